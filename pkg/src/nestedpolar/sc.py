"""Successive cancellation decoding.

Two variants share one recursion shape:

* an exact three-valued (0 / 1 / erased) message propagation for the
  binary erasure channel, and
* an exact log-likelihood-ratio recursion for general symmetric channels,
  with the check-node combine computed in the log domain as
  logaddexp(0, a+b) - logaddexp(a, b), which equals the hyperbolic-tangent
  rule without overflow.

LLR sign convention: positive means bit 0 is more likely; a tie (LLR
exactly zero) decides 0, matching a likelihood-ratio-at-least-one rule.
Decoding order is the natural index order of u; the received word is
bit-reversal permuted once up front so the in-place butterfly halves pair
correctly.

The batch entry points (`decode_bec_rows`, `decode_llr_rows`, genie
variants) process many received words at once and are what the
Monte-Carlo drivers call.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitVector
from .polar import PolarCodeSpec, bit_reversal_permutation

__all__ = [
    "ERASED",
    "LLR_CAP",
    "ReceivedWord",
    "DecodeResult",
    "sc_decode_bec",
    "sc_decode_llr",
    "decode_bec_rows",
    "decode_llr_rows",
    "genie_bec_rows",
    "genie_llr_rows",
]

# Sentinel for an erased symbol in three-valued words.
ERASED = -1

# Input LLR magnitudes are clamped to this; keeps combines well-scaled.
LLR_CAP = 40.0


class ReceivedWord:
    """Channel output over one block: hard symbols with erasures, or LLRs."""

    __slots__ = ("_values", "_kind")

    def __init__(self, values, kind: str):
        if kind not in ("erasure", "llr"):
            raise ValueError(f"unknown received-word kind {kind!r}")
        if kind == "erasure":
            arr = np.asarray(values, dtype=np.int8)
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError("received word must be a nonempty 1-D sequence")
            ok = (arr == 0) | (arr == 1) | (arr == ERASED)
            if not ok.all():
                raise ValueError(f"erasure symbols must be 0, 1 or {ERASED}")
        else:
            arr = np.asarray(values, dtype=np.float64)
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError("received word must be a nonempty 1-D sequence")
            if not np.isfinite(arr).all():
                raise ValueError("LLR values must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        self._values = arr
        self._kind = kind

    @classmethod
    def from_symbols(cls, symbols) -> "ReceivedWord":
        return cls(symbols, "erasure")

    @classmethod
    def from_llrs(cls, values) -> "ReceivedWord":
        return cls(values, "llr")

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __len__(self) -> int:
        return self._values.size

    def erased_mask(self) -> np.ndarray:
        if self._kind != "erasure":
            raise ValueError("erased_mask is only defined for erasure words")
        return self._values == ERASED

    def __repr__(self) -> str:
        return f"ReceivedWord(kind={self._kind!r}, length={len(self)})"


@dataclass(frozen=True)
class DecodeResult:
    """Hard SC output: full u estimate, its restriction to A, erasure count."""

    u_hat: BitVector
    info_bits: BitVector
    undetermined_count: int


def _check_word(spec: PolarCodeSpec, word: ReceivedWord, kind: str) -> None:
    if word.kind != kind:
        raise ValueError(f"expected a {kind} received word, got {word.kind}")
    if len(word) != spec.N:
        raise ValueError(f"received word length {len(word)} != block length {spec.N}")


# ---------------------------------------------------------------------------
# three-valued BEC recursion


def decode_bec_rows(
    y: np.ndarray, info_mask: np.ndarray, frozen_values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """SC-decode a batch of erasure words.

    y is (batch, N) int8 over {0, 1, ERASED}; frozen_values is (N,) or
    (batch, N) uint8 and is read wherever info_mask is False.  Returns the
    decoded (batch, N) u array and the per-word count of information-bit
    decisions that had to be made on an erased message (decided 0).
    """
    nbatch, N = y.shape
    n = N.bit_length() - 1
    fv = np.broadcast_to(frozen_values, (nbatch, N))
    uhat = np.zeros((nbatch, N), dtype=np.uint8)
    undet = np.zeros(nbatch, dtype=np.int64)

    def rec(msgs: np.ndarray, lo: int) -> np.ndarray:
        L = msgs.shape[1]
        if L == 1:
            m = msgs[:, 0]
            if info_mask[lo]:
                er = m == ERASED
                u = np.where(er, 0, m).astype(np.int8)
                undet[er] += 1
            else:
                u = fv[:, lo].astype(np.int8)
            uhat[:, lo] = u
            return u[:, None]
        h = L // 2
        a = msgs[:, :h]
        b = msgs[:, h:]
        f = np.where((a >= 0) & (b >= 0), (a ^ b).astype(np.int8), np.int8(ERASED))
        xl = rec(f, lo)
        g = np.where(b >= 0, b, np.where(a >= 0, (a ^ xl).astype(np.int8), np.int8(ERASED)))
        xr = rec(g, lo + h)
        return np.concatenate([xl ^ xr, xr], axis=1)

    rec(np.ascontiguousarray(y[:, bit_reversal_permutation(n)]), 0)
    return uhat, undet


def genie_bec_rows(y: np.ndarray, u_true: np.ndarray) -> np.ndarray:
    """Per-position erasure indicators of genie-aided SC over a batch.

    Every decision is replaced by the true bit before propagating, so the
    returned (batch, N) boolean array marks exactly the positions whose
    synthesized bit-channel erased in that trial.
    """
    nbatch, N = y.shape
    n = N.bit_length() - 1
    flags = np.zeros((nbatch, N), dtype=bool)

    def rec(msgs: np.ndarray, lo: int) -> np.ndarray:
        L = msgs.shape[1]
        if L == 1:
            flags[:, lo] = msgs[:, 0] == ERASED
            return u_true[:, lo : lo + 1].astype(np.int8)
        h = L // 2
        a = msgs[:, :h]
        b = msgs[:, h:]
        f = np.where((a >= 0) & (b >= 0), (a ^ b).astype(np.int8), np.int8(ERASED))
        xl = rec(f, lo)
        g = np.where(b >= 0, b, np.where(a >= 0, (a ^ xl).astype(np.int8), np.int8(ERASED)))
        xr = rec(g, lo + h)
        return np.concatenate([xl ^ xr, xr], axis=1)

    rec(np.ascontiguousarray(y[:, bit_reversal_permutation(n)]), 0)
    return flags


# ---------------------------------------------------------------------------
# LLR recursion


def _check_combine(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, a + b) - np.logaddexp(a, b)


def decode_llr_rows(
    llr: np.ndarray, info_mask: np.ndarray, frozen_values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """SC-decode a batch of LLR words; returns (u array, zero-LLR tie counts)."""
    nbatch, N = llr.shape
    n = N.bit_length() - 1
    fv = np.broadcast_to(frozen_values, (nbatch, N))
    uhat = np.zeros((nbatch, N), dtype=np.uint8)
    ties = np.zeros(nbatch, dtype=np.int64)

    def rec(msgs: np.ndarray, lo: int) -> np.ndarray:
        L = msgs.shape[1]
        if L == 1:
            m = msgs[:, 0]
            if info_mask[lo]:
                u = (m < 0).astype(np.uint8)
                ties[m == 0] += 1
            else:
                u = fv[:, lo]
            uhat[:, lo] = u
            return u[:, None]
        h = L // 2
        a = msgs[:, :h]
        b = msgs[:, h:]
        xl = rec(_check_combine(a, b), lo)
        g = b + a * (1.0 - 2.0 * xl)
        xr = rec(g, lo + h)
        return np.concatenate([xl ^ xr, xr], axis=1)

    rec(np.ascontiguousarray(llr[:, bit_reversal_permutation(n)], dtype=np.float64), 0)
    return uhat, ties


def genie_llr_rows(llr: np.ndarray, u_true: np.ndarray) -> np.ndarray:
    """Per-position hard-decision error indicators of genie-aided SC."""
    nbatch, N = llr.shape
    n = N.bit_length() - 1
    flags = np.zeros((nbatch, N), dtype=bool)

    def rec(msgs: np.ndarray, lo: int) -> np.ndarray:
        L = msgs.shape[1]
        if L == 1:
            dec = (msgs[:, 0] < 0).astype(np.uint8)
            flags[:, lo] = dec != u_true[:, lo]
            return u_true[:, lo : lo + 1]
        h = L // 2
        a = msgs[:, :h]
        b = msgs[:, h:]
        xl = rec(_check_combine(a, b), lo)
        g = b + a * (1.0 - 2.0 * xl)
        xr = rec(g, lo + h)
        return np.concatenate([xl ^ xr, xr], axis=1)

    rec(np.ascontiguousarray(llr[:, bit_reversal_permutation(n)], dtype=np.float64), 0)
    return flags


# ---------------------------------------------------------------------------
# single-word entry points


def sc_decode_bec(spec: PolarCodeSpec, word: ReceivedWord) -> DecodeResult:
    """Exact erasure-propagation SC decoding of one received word.

    Frozen positions always output their frozen value.  An information
    bit whose message is erased is decided 0 and counted in
    ``undetermined_count``.
    """
    _check_word(spec, word, "erasure")
    uhat, undet = decode_bec_rows(word.values[None, :], spec.info_mask, spec.frozen_template)
    u = BitVector(uhat[0])
    return DecodeResult(u, BitVector(uhat[0][spec.info_set]), int(undet[0]))


def sc_decode_llr(spec: PolarCodeSpec, word: ReceivedWord) -> DecodeResult:
    """LLR-domain SC decoding of one received word.

    Inputs are clamped to +/-LLR_CAP.  ``undetermined_count`` reports how
    many information decisions hit an exactly-zero LLR (decided 0).
    """
    _check_word(spec, word, "llr")
    llr = np.clip(word.values, -LLR_CAP, LLR_CAP)
    uhat, ties = decode_llr_rows(llr[None, :], spec.info_mask, spec.frozen_template)
    u = BitVector(uhat[0])
    return DecodeResult(u, BitVector(uhat[0][spec.info_set]), int(ties[0]))
