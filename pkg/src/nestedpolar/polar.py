"""Polar transform core: bit reversal, generator matrix, fast encoding.

The generator is G = R F^(x)n where R is the bit-reversal permutation and
F = [[1,0],[1,1]].  Encoding never materialises G: it permutes the input
by R and runs the O(N log N) butterfly.  The explicit matrix is kept for
tests and for parity-check extraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .gf2 import BitMatrix, BitVector

__all__ = [
    "MAX_LOG2_BLOCK",
    "CodeParams",
    "PolarCodeSpec",
    "bit_reversal_permutation",
    "generator_matrix",
    "polar_transform",
    "encode",
    "transform_rows",
]

# Desk-scale guard: block lengths beyond 2^20 are out of scope.
MAX_LOG2_BLOCK = 20

F = np.array([[1, 0], [1, 1]], dtype=np.uint8)


@dataclass(frozen=True)
class CodeParams:
    """Block structure of a polar code: N = 2^n."""

    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_LOG2_BLOCK:
            raise ValueError(f"n must be in [0, {MAX_LOG2_BLOCK}], got {self.n}")

    @property
    def N(self) -> int:
        return 1 << self.n


@lru_cache(maxsize=None)
def bit_reversal_permutation(n: int) -> np.ndarray:
    """Permutation sending i to the integer with i's n-bit string reversed.

    An involution: applying it twice is the identity.
    """
    if not 0 <= n <= MAX_LOG2_BLOCK:
        raise ValueError(f"n must be in [0, {MAX_LOG2_BLOCK}], got {n}")
    idx = np.arange(1 << n, dtype=np.int64)
    rev = np.zeros(1 << n, dtype=np.int64)
    for _ in range(n):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.setflags(write=False)
    return rev


def generator_matrix(n: int) -> BitMatrix:
    """G = R F^(x)n: the n-th Kronecker power of F with bit-reversed rows."""
    m = np.array([[1]], dtype=np.uint8)
    for _ in range(n):
        m = np.kron(F, m)
    return BitMatrix(m[bit_reversal_permutation(n)])


def transform_rows(rows: np.ndarray) -> np.ndarray:
    """Apply the polar transform to each row of a (batch, N) uint8 array."""
    nbatch, N = rows.shape
    if N == 0 or N & (N - 1):
        raise ValueError(f"row length must be a power of two, got {N}")
    n = N.bit_length() - 1
    x = rows[:, bit_reversal_permutation(n)]
    h = 1
    while h < N:
        x = x.reshape(nbatch, -1, 2 * h)
        x[:, :, :h] ^= x[:, :, h:]
        x = x.reshape(nbatch, N)
        h *= 2
    return x


def polar_transform(u: BitVector) -> BitVector:
    """x = u G computed by the butterfly recursion; an involution."""
    N = u.length
    if N == 0 or N & (N - 1):
        raise ValueError(f"input length must be a power of two, got {N}")
    return BitVector(transform_rows(u.bits[None, :])[0])


class PolarCodeSpec:
    """A polar code: block structure, information set A, frozen-bit values.

    ``frozen_values`` maps every index outside A to its fixed bit.  The
    values need not be zero: coset decoding fixes some of them to message
    bits from another stage.
    """

    __slots__ = ("params", "info_set", "frozen_values", "_info_mask", "_u_template")

    def __init__(self, params: CodeParams, info_set, frozen_values: Mapping[int, int]):
        N = params.N
        info = np.array(info_set, dtype=np.int64)
        if info.ndim != 1:
            raise ValueError("info_set must be one-dimensional")
        if info.size:
            if np.any(np.diff(info) <= 0):
                raise ValueError("info_set must be strictly increasing")
            if info[0] < 0 or info[-1] >= N:
                raise ValueError(f"info_set indices must lie in [0, {N})")
        mask = np.zeros(N, dtype=bool)
        mask[info] = True
        frozen_idx = np.nonzero(~mask)[0]
        if set(frozen_values) != set(frozen_idx.tolist()):
            raise ValueError("frozen_values keys must be exactly the complement of info_set")
        template = np.zeros(N, dtype=np.uint8)
        for i, b in frozen_values.items():
            if b not in (0, 1):
                raise ValueError(f"frozen value at index {i} must be 0 or 1")
            template[i] = b
        info.setflags(write=False)
        mask.setflags(write=False)
        template.setflags(write=False)
        self.params = params
        self.info_set = info
        self.frozen_values = dict(frozen_values)
        self._info_mask = mask
        self._u_template = template

    @classmethod
    def zero_frozen(cls, params: CodeParams, info_set) -> "PolarCodeSpec":
        info = np.asarray(info_set, dtype=np.int64)
        mask = np.zeros(params.N, dtype=bool)
        mask[info] = True
        frozen = {int(i): 0 for i in np.nonzero(~mask)[0]}
        return cls(params, info, frozen)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def info_len(self) -> int:
        return self.info_set.size

    @property
    def info_mask(self) -> np.ndarray:
        return self._info_mask

    @property
    def frozen_template(self) -> np.ndarray:
        """Length-N uint8 array: frozen values, zeros at information positions."""
        return self._u_template

    def __repr__(self) -> str:
        return f"PolarCodeSpec(N={self.N}, |A|={self.info_len})"


def encode(spec: PolarCodeSpec, message: BitVector) -> BitVector:
    """Codeword for ``message``: info bits on A, frozen values elsewhere."""
    if message.length != spec.info_len:
        raise ValueError(f"message length must be {spec.info_len}, got {message.length}")
    u = spec.frozen_template.copy()
    u[spec.info_set] = message.bits
    return BitVector(transform_rows(u[None, :])[0])
