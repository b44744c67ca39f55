"""Bit-channel reliability and information/secure set selection.

For the BEC the per-index parameters come from the exact polarization
recursion z -> (2z - z^2, z^2); for other symmetric channels they are
genie-aided Monte-Carlo estimates of each bit-channel's error indicator.
Selection is size-based: the k most reliable indices, ties broken toward
the smaller index, which is the finite-length stand-in for the asymptotic
threshold sets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .channels import RngStream, bsc_llr_magnitude
from .polar import CodeParams, transform_rows
from .sc import ERASED, genie_bec_rows, genie_llr_rows

__all__ = [
    "BEC",
    "BSC",
    "ChannelSpec",
    "ReliabilityProfile",
    "ConstructionPolicy",
    "bec_reliability",
    "mc_reliability",
    "select_info_set",
    "select_secure_subset",
]


@dataclass(frozen=True)
class BEC:
    """Binary erasure channel."""

    erasure_prob: float

    def __post_init__(self):
        if not 0.0 <= self.erasure_prob <= 1.0:
            raise ValueError(f"erasure probability must be in [0, 1], got {self.erasure_prob}")


@dataclass(frozen=True)
class BSC:
    """Binary symmetric channel."""

    crossover_prob: float

    def __post_init__(self):
        if not 0.0 <= self.crossover_prob <= 0.5:
            raise ValueError(f"crossover probability must be in [0, 1/2], got {self.crossover_prob}")


ChannelSpec = Union[BEC, BSC]


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per-bit-channel unreliability, index-aligned with the encoder.

    ``exact`` is True only for profiles produced by the BEC recursion,
    where z[i] is exactly the erasure probability of bit-channel i.
    """

    params: CodeParams
    z: np.ndarray
    exact: bool

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.float64)
        if z.shape != (self.params.N,):
            raise ValueError(f"profile must have length {self.params.N}, got {z.shape}")
        if z.size and (z.min() < 0.0 or z.max() > 1.0):
            raise ValueError("profile values must lie in [0, 1]")
        z = z.copy()
        z.setflags(write=False)
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class ConstructionPolicy:
    """Size-based selection targets plus Monte-Carlo parameters."""

    info_size: int
    secure_size: int
    mc_trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.secure_size <= self.info_size:
            raise ValueError("need 0 <= secure_size <= info_size")
        if self.mc_trials < 1:
            raise ValueError("mc_trials must be positive")


def bec_reliability(n: int, erasure_prob: float) -> ReliabilityProfile:
    """Exact Bhattacharyya parameters of all 2^n BEC bit-channels.

    Each polarization stage maps z to (2z - z^2, z^2), interleaved so the
    output is in the same index order the encoder and decoder use.  The
    stage preserves the mean exactly and values are clamped to [0, 1] to
    absorb rounding.
    """
    if not 0.0 <= erasure_prob <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {erasure_prob}")
    z = np.array([erasure_prob], dtype=np.float64)
    for _ in range(n):
        nxt = np.empty(2 * z.size, dtype=np.float64)
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        np.clip(nxt, 0.0, 1.0, out=nxt)
        z = nxt
    return ReliabilityProfile(CodeParams(n), z, exact=True)


def mc_reliability(channel: ChannelSpec, n: int, trials: int, seed: int) -> ReliabilityProfile:
    """Genie-aided SC Monte-Carlo estimate of each bit-channel's error rate.

    Random inputs are encoded, passed through the channel, and decoded
    with every past decision replaced by the true bit.  For the BEC the
    per-index indicator is "message erased" (the exact event behind the
    Bhattacharyya parameter); for the BSC it is a hard-decision error.
    Deterministic given (channel, n, trials, seed).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    params = CodeParams(n)
    N = params.N
    counts = np.zeros(N, dtype=np.int64)
    chunk = max(1, 4_000_000 // N)
    done = 0
    chunk_index = 0
    while done < trials:
        size = min(chunk, trials - done)
        rng = RngStream(seed, chunk_index).generator()
        u = rng.integers(0, 2, size=(size, N), dtype=np.uint8)
        x = transform_rows(u)
        if isinstance(channel, BEC):
            draws = rng.random((size, N))
            y = np.where(draws < channel.erasure_prob, np.int8(ERASED), x.astype(np.int8))
            flags = genie_bec_rows(y, u)
        else:
            flips = rng.random((size, N)) < channel.crossover_prob
            mag = bsc_llr_magnitude(channel.crossover_prob)
            llr = (1.0 - 2.0 * (x ^ flips)) * mag
            flags = genie_llr_rows(llr, u)
        counts += flags.sum(axis=0)
        done += size
        chunk_index += 1
    return ReliabilityProfile(params, counts / trials, exact=False)


def select_info_set(profile: ReliabilityProfile, k: int) -> np.ndarray:
    """The k most reliable indices (smallest z), ties toward smaller index."""
    if not 0 <= k <= profile.params.N:
        raise ValueError(f"k must be in [0, {profile.params.N}], got {k}")
    order = np.argsort(profile.z, kind="stable")
    return np.sort(order[:k])


def select_secure_subset(info_set, wiretap_profile: ReliabilityProfile, b: int) -> np.ndarray:
    """The b members of ``info_set`` with smallest wiretap-channel z."""
    info = np.asarray(info_set, dtype=np.int64)
    if not 0 <= b <= info.size:
        raise ValueError(f"subset size {b} exceeds |info_set| = {info.size}")
    z = wiretap_profile.z[info]
    order = np.argsort(z, kind="stable")
    return np.sort(info[order[:b]])
