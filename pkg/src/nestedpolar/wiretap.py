"""Nested coset coding for the degraded erasure wiretap channel.

The sender hides a message in the choice of coset: codewords are
x = t G_B + s G_{A\\B} with t uniform, where A is chosen by main-channel
reliability and B (the positions sacrificed to randomization) collects
the members of A the eavesdropper receives most reliably.

For erasure channels the eavesdropper's residual uncertainty about s is
measured exactly, with no decoder in the loop: given the erased position
set E, it equals rank of the subcode parity checks restricted to E minus
rank of the overall-code parity checks restricted to E.  A brute-force
enumeration oracle of the same quantity backs the rank path at toy sizes.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .channels import RngStream
from .construction import bec_reliability, select_info_set, select_secure_subset
from .gf2 import (
    BitMatrix,
    BitVector,
    IncrementalRank,
    null_space_basis,
    pack_columns,
    rank,
    select_columns,
    select_rows,
)
from .polar import CodeParams, PolarCodeSpec, generator_matrix, transform_rows
from .sc import ReceivedWord, sc_decode_bec

__all__ = [
    "NestedCodeSpec",
    "WiretapConfig",
    "EquivocationReport",
    "build_wiretap_code",
    "alice_encode",
    "bob_decode",
    "parity_checks",
    "equivocation_rank",
    "equivocation_bruteforce",
    "run_wiretap_experiment",
]

# Enumeration guard for the brute-force oracle.
BRUTEFORCE_MAX_INFO = 20


class NestedCodeSpec:
    """Nested polar code: overall information set A and subcode set B ⊂ A.

    Messages ride on A\\B (one coset per message); the |B| randomization
    bits pick the codeword within the coset; everything outside A is
    frozen to zero.
    """

    __slots__ = ("params", "info_set", "secure_set", "message_set")

    def __init__(self, params: CodeParams, info_set, secure_set):
        info = np.array(info_set, dtype=np.int64)
        sec = np.array(secure_set, dtype=np.int64)
        for name, arr in (("info_set", info), ("secure_set", sec)):
            if arr.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            if arr.size and (np.any(np.diff(arr) <= 0) or arr[0] < 0 or arr[-1] >= params.N):
                raise ValueError(f"{name} must be strictly increasing within [0, {params.N})")
        if not np.all(np.isin(sec, info)):
            raise ValueError("secure_set must be a subset of info_set")
        msg = np.setdiff1d(info, sec)
        for arr in (info, sec, msg):
            arr.setflags(write=False)
        self.params = params
        self.info_set = info
        self.secure_set = sec
        self.message_set = msg

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def message_len(self) -> int:
        return self.message_set.size

    @property
    def randomization_len(self) -> int:
        return self.secure_set.size

    def bob_spec(self) -> PolarCodeSpec:
        """Decoder view at the legitimate receiver: info set A, frozen zeros."""
        return PolarCodeSpec.zero_frozen(self.params, self.info_set)

    def __repr__(self) -> str:
        return (
            f"NestedCodeSpec(N={self.N}, |A|={self.info_set.size}, "
            f"|B|={self.randomization_len})"
        )


@dataclass(frozen=True)
class WiretapConfig:
    """Design point and experiment parameters for a wiretap run."""

    e_m: float
    e_w: float
    rate: float
    n: int
    trials: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.e_m <= self.e_w <= 1.0:
            raise ValueError(f"need 0 <= e_m <= e_w <= 1, got e_m={self.e_m}, e_w={self.e_w}")
        if not 0.0 <= self.rate < 1.0:
            raise ValueError(f"rate must be in [0, 1), got {self.rate}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        CodeParams(self.n)


@dataclass(frozen=True)
class EquivocationReport:
    """Monte-Carlo equivocation at one evaluated wiretap erasure rate."""

    e_w: float
    mean_equivocation_rate: float
    equivocations: np.ndarray
    upper_bound: float
    trials: int
    info_size: int
    secure_size: int
    block_length: int
    seed: int

    def __post_init__(self):
        eq = np.asarray(self.equivocations, dtype=np.int64)
        eq = eq.copy()
        eq.setflags(write=False)
        object.__setattr__(self, "equivocations", eq)
        limit = (self.info_size - self.secure_size) / self.block_length + 1e-12
        if not 0.0 <= self.mean_equivocation_rate <= limit:
            raise ValueError("mean equivocation rate outside [0, |A\\B|/N]")


def build_wiretap_code(cfg: WiretapConfig) -> NestedCodeSpec:
    """Size the nested code from (rate, capacities) and pick A and B.

    |B| = round(N (C_M - rate)) and |A| = |B| + round(N rate), with A the
    most reliable main-channel indices and B the members of A with the
    smallest wiretap-channel parameters at the design e_w.
    """
    N = CodeParams(cfg.n).N
    c_m = 1.0 - cfg.e_m
    b = round(N * (c_m - cfg.rate))
    k = b + round(N * cfg.rate)
    if b < 0 or k > N:
        raise ValueError(f"infeasible sizes: |B|={b}, |A|={k} with N={N}")
    main = bec_reliability(cfg.n, cfg.e_m)
    wire = bec_reliability(cfg.n, cfg.e_w)
    info = select_info_set(main, k)
    secure = select_secure_subset(info, wire, b)
    return NestedCodeSpec(CodeParams(cfg.n), info, secure)


def alice_encode(code: NestedCodeSpec, s: BitVector, t: BitVector) -> BitVector:
    """Codeword carrying message s on A\\B and randomization t on B."""
    if s.length != code.message_len:
        raise ValueError(f"message length must be {code.message_len}, got {s.length}")
    if t.length != code.randomization_len:
        raise ValueError(f"randomization length must be {code.randomization_len}, got {t.length}")
    u = np.zeros(code.N, dtype=np.uint8)
    u[code.message_set] = s.bits
    u[code.secure_set] = t.bits
    return BitVector(transform_rows(u[None, :])[0])


def bob_decode(code: NestedCodeSpec, rw: ReceivedWord) -> BitVector:
    """Bob's estimate of the message: SC over A, then restrict to A\\B."""
    result = sc_decode_bec(code.bob_spec(), rw)
    return BitVector(result.u_hat.bits[code.message_set])


def parity_checks(code: NestedCodeSpec) -> tuple[BitMatrix, BitMatrix]:
    """Parity-check matrices (H, H_s) of the overall code and the subcode."""
    g = generator_matrix(code.params.n)
    h = null_space_basis(select_rows(g, code.info_set))
    h_s = null_space_basis(select_rows(g, code.secure_set))
    return h, h_s


def equivocation_rank(h: BitMatrix, h_s: BitMatrix, erased) -> int:
    """Eavesdropper equivocation, in bits, for one erased position set.

    rank of the subcode checks restricted to the erased columns minus
    rank of the overall-code checks restricted to the same columns;
    non-negative because the overall code's dual lies inside the
    subcode's dual.
    """
    return rank(select_columns(h_s, erased)) - rank(select_columns(h, erased))


def equivocation_bruteforce(code: NestedCodeSpec, erased) -> float:
    """Exact H(S | Z = z) by enumerating every (message, randomization) pair.

    Groups codewords by their unerased restriction and computes the
    conditional message entropy of each group from the uniform prior.
    Linearity makes the value identical for every consistent observation;
    that is asserted during the enumeration.  Guarded to |A| <= 20.
    """
    k = code.info_set.size
    if k > BRUTEFORCE_MAX_INFO:
        raise ValueError(f"brute force limited to |A| <= {BRUTEFORCE_MAX_INFO}, got {k}")
    erased_arr = np.asarray(erased, dtype=np.int64)
    keep = np.setdiff1d(np.arange(code.N), erased_arr)
    ms, rs = code.message_len, code.randomization_len
    groups: dict[bytes, np.ndarray] = {}
    t_all = ((np.arange(1 << rs)[:, None] >> np.arange(rs)) & 1).astype(np.uint8)
    for s_index in range(1 << ms):
        s_bits = (s_index >> np.arange(ms)) & 1
        u = np.zeros((1 << rs, code.N), dtype=np.uint8)
        u[:, code.message_set] = s_bits.astype(np.uint8)
        u[:, code.secure_set] = t_all
        x = transform_rows(u)
        for row in x[:, keep]:
            key = row.tobytes()
            counts = groups.get(key)
            if counts is None:
                counts = np.zeros(1 << ms, dtype=np.int64)
                groups[key] = counts
            counts[s_index] += 1
    value = None
    for counts in groups.values():
        total = counts.sum()
        p = counts[counts > 0] / total
        entropy = float(-(p * np.log2(p)).sum())
        if value is None:
            value = entropy
        elif abs(entropy - value) > 1e-9:
            raise AssertionError("conditional entropy differs across observations")
    return value if value is not None else 0.0


def run_wiretap_experiment(
    cfg: WiretapConfig, e_w_sweep, workers: int = 1
) -> list[EquivocationReport]:
    """Design once at cfg.e_w, then evaluate equivocation at each swept e_w.

    Every trial draws one uniform per position from its own substream and
    reuses it at every sweep point (erase iff draw < e_w), so erasure sets
    are nested across points and the per-trial equivocation is monotone.
    The ranks are maintained incrementally while columns join in draw
    order, which prices a whole sweep at one elimination per trial.
    """
    code = build_wiretap_code(cfg)
    h, h_s = parity_checks(code)
    h_cols = pack_columns(h)
    hs_cols = pack_columns(h_s)
    points = np.asarray(e_w_sweep, dtype=np.float64)
    if points.ndim != 1 or points.size == 0:
        raise ValueError("e_w sweep must be a nonempty 1-D sequence")
    if points.min() < 0.0 or points.max() > 1.0:
        raise ValueError("swept e_w values must lie in [0, 1]")
    N = code.N
    ascending = np.argsort(points, kind="stable")
    eq = np.zeros((cfg.trials, points.size), dtype=np.int64)

    def run_span(t0: int, t1: int) -> None:
        for t in range(t0, t1):
            draws = RngStream(cfg.seed, t).generator().random(N)
            order = np.argsort(draws, kind="stable")
            cuts = np.searchsorted(draws[order], points[ascending], side="left")
            acc_h = IncrementalRank()
            acc_s = IncrementalRank()
            pos = 0
            for pi, cut in zip(ascending, cuts):
                for j in order[pos:cut]:
                    acc_h.add(h_cols[j])
                    acc_s.add(hs_cols[j])
                pos = cut
                eq[t, pi] = acc_s.rank - acc_h.rank

    if workers <= 1:
        run_span(0, cfg.trials)
    else:
        span = math.ceil(cfg.trials / workers)
        bounds = [(i, min(i + span, cfg.trials)) for i in range(0, cfg.trials, span)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for fut in [pool.submit(run_span, a, b) for a, b in bounds]:
                fut.result()

    reports = []
    for pi, e_w in enumerate(points):
        reports.append(
            EquivocationReport(
                e_w=float(e_w),
                mean_equivocation_rate=float(eq[:, pi].mean() / N),
                equivocations=eq[:, pi],
                upper_bound=min(cfg.rate, float(e_w) - cfg.e_m),
                trials=cfg.trials,
                info_size=int(code.info_set.size),
                secure_size=int(code.randomization_len),
                block_length=N,
                seed=cfg.seed,
            )
        )
    return reports
