"""Block-Markov decode-and-forward over a degraded erasure relay channel.

Topology: the source broadcasts; the relay hears the source-relay (SR)
channel; the destination hears a physically degraded source-destination
(SD) copy, obtained from the very same SR realization by further
erasures, plus an orthogonal relay-destination (RD) channel.

Per block the source sends a nested codeword carrying |A| fresh bits.
The relay decodes all of A and forwards the coset part A\\B over RD in
the next block; the destination first recovers that coset from the relay,
freezes it into the nested code, and then resolves the remaining B bits
from its stored SD output of the previous block.  Relay mistakes
propagate into the forwarded coset; there is no genie.

Finite-length sizing is driven by the computable union bound: each
stage's summed bit-channel parameters are pushed under a target by
shrinking one margin knob.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channels import RngStream, bec_sample_rows, cascade_rows
from .construction import bec_reliability, select_info_set
from .polar import CodeParams, PolarCodeSpec, transform_rows
from .sc import decode_bec_rows
from .wiretap import NestedCodeSpec

__all__ = [
    "RelayChannelSpec",
    "RelayScheme",
    "RelayRunReport",
    "build_relay_scheme",
    "calibrate_margin",
    "simulate_relay",
]


@dataclass(frozen=True)
class RelayChannelSpec:
    """Erasure rates of the three links; SD is the SR cascade."""

    e_sr: float
    e_deg: float
    e_rd: float

    def __post_init__(self):
        for name in ("e_sr", "e_deg", "e_rd"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    @property
    def e_sd(self) -> float:
        return self.e_sr + (1.0 - self.e_sr) * self.e_deg

    @property
    def c_sr(self) -> float:
        return 1.0 - self.e_sr

    @property
    def c_sd(self) -> float:
        return 1.0 - self.e_sd

    @property
    def c_rd(self) -> float:
        return 1.0 - self.e_rd


@dataclass(frozen=True)
class RelayScheme:
    """Constructed codes for one operating point."""

    source_code: NestedCodeSpec
    rd_code: PolarCodeSpec
    blocks: int
    regime: int
    margin: float
    stage_bounds: tuple[float, float, float]  # sum z over (A on SR, B on SD, rd info on RD)

    def __post_init__(self):
        if self.blocks < 1:
            raise ValueError("blocks must be positive")
        if self.rd_code.info_len != self.source_code.message_len:
            raise ValueError("relay code must carry exactly |A\\B| bits")

    @property
    def achieved_rate(self) -> Fraction:
        a = self.source_code.info_set.size
        n_len = self.source_code.N
        return Fraction(self.blocks * a, n_len * (self.blocks + 1))


def build_relay_scheme(
    spec: RelayChannelSpec, n: int, blocks: int, margin: float
) -> RelayScheme:
    """Size and select all three stages at one margin.

    Regime 1 (C_SR <= C_SD + C_RD): A is the round(margin N C_SR) best SR
    indices and B is A intersected with the round(margin N C_SD) best SD
    indices; the leftover coset A\\B must fit the RD budget
    round(margin N C_RD).  Regime 2: B is the round(margin N C_SD) best SD
    indices and A grows B with the best remaining SR indices up to
    round(margin N (C_SD + C_RD)).  The relay's own code always carries
    |A\\B| bits on the best RD indices.
    """
    if not 0.0 < margin <= 1.0:
        raise ValueError(f"margin must be in (0, 1], got {margin}")
    params = CodeParams(n)
    N = params.N
    z_sr = bec_reliability(n, spec.e_sr)
    z_sd = bec_reliability(n, spec.e_sd)
    z_rd = bec_reliability(n, spec.e_rd)

    if spec.c_sr <= spec.c_sd + spec.c_rd:
        regime = 1
        k_a = round(margin * N * spec.c_sr)
        k_sd = round(margin * N * spec.c_sd)
        k_rd = round(margin * N * spec.c_rd)
        info = select_info_set(z_sr, k_a)
        best_sd = select_info_set(z_sd, k_sd)
        secure = np.intersect1d(info, best_sd)
        if info.size - secure.size > k_rd:
            raise ValueError(
                f"infeasible at margin {margin}: coset size {info.size - secure.size} "
                f"exceeds RD budget {k_rd}"
            )
    else:
        regime = 2
        k_b = round(margin * N * spec.c_sd)
        k_a = round(margin * N * (spec.c_sd + spec.c_rd))
        if k_a < k_b:
            raise ValueError(f"infeasible at margin {margin}: |A| target {k_a} below |B| {k_b}")
        secure = select_info_set(z_sd, k_b)
        sr_order = np.argsort(z_sr.z, kind="stable")
        outside = sr_order[~np.isin(sr_order, secure)]
        info = np.sort(np.concatenate([secure, outside[: k_a - k_b]]))

    source = NestedCodeSpec(params, info, secure)
    rd_info = select_info_set(z_rd, source.message_len)
    rd_code = PolarCodeSpec.zero_frozen(params, rd_info)
    bounds = (
        float(z_sr.z[info].sum()) if info.size else 0.0,
        float(z_sd.z[secure].sum()) if secure.size else 0.0,
        float(z_rd.z[rd_info].sum()) if rd_info.size else 0.0,
    )
    return RelayScheme(source, rd_code, blocks, regime, margin, bounds)


def calibrate_margin(
    spec: RelayChannelSpec,
    n: int,
    blocks: int,
    target: float,
    step: float = 0.005,
) -> RelayScheme:
    """Largest margin (scanned down from 1 in ``step``s) whose three stage
    union bounds all sit at or below ``target``."""
    margin = 1.0
    while margin > 0.0:
        try:
            scheme = build_relay_scheme(spec, n, blocks, margin)
        except ValueError:
            scheme = None
        if scheme is not None and max(scheme.stage_bounds) <= target:
            return scheme
        margin = round(margin - step, 12)
    raise ValueError(f"no margin meets stage bound target {target}")


@dataclass(frozen=True)
class RelayRunReport:
    """Stage-by-stage outcomes of a simulated run."""

    relay_errors: np.ndarray  # (trials, blocks) bool: relay misdecoded A
    rd_errors: np.ndarray  # destination misdecoded the forwarded coset
    dest_errors: np.ndarray  # delivered message differs from the source's
    achieved_rate: Fraction
    overall_error_rate: float
    trials: int
    seed: int

    def __post_init__(self):
        for name in ("relay_errors", "rd_errors", "dest_errors"):
            arr = np.asarray(getattr(self, name), dtype=bool).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


# substream roles within a (trial, block) cell
_ROLE_MESSAGE, _ROLE_SR, _ROLE_DEG, _ROLE_RD = range(4)


def _stream(seed: int, trial: int, block: int, blocks: int, role: int) -> np.random.Generator:
    return RngStream(seed, (trial * (blocks + 1) + block) * 4 + role).generator()


def simulate_relay(
    scheme: RelayScheme, spec: RelayChannelSpec, trials: int, seed: int
) -> RelayRunReport:
    """Run the block-Markov pipeline end to end.

    Uses blocks+1 slots: the source is active in blocks 1..blocks, the
    relay forwards block k's coset during block k+1, and the destination
    resolves block k once that arrives.  SD outputs are the SR outputs
    further erased under the same draw, preserving physical degradedness.
    Deterministic given the seed; each (trial, block, role) has its own
    substream so erasure-rate changes couple monotonically.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    code = scheme.source_code
    N, blocks = code.N, scheme.blocks
    a_set = code.info_set
    msg_pos = np.isin(a_set, code.message_set)  # A\B positions within A
    source_spec = code.bob_spec()
    rd_info = scheme.rd_code.info_set

    relay_err = np.zeros((trials, blocks), dtype=bool)
    rd_err = np.zeros((trials, blocks), dtype=bool)
    dest_err = np.zeros((trials, blocks), dtype=bool)

    for k in range(blocks):
        msgs = np.empty((trials, a_set.size), dtype=np.uint8)
        y_sr = np.empty((trials, N), dtype=np.int8)
        y_sd = np.empty((trials, N), dtype=np.int8)
        for t in range(trials):
            msgs[t] = _stream(seed, t, k, blocks, _ROLE_MESSAGE).integers(
                0, 2, a_set.size, dtype=np.uint8
            )
        u = np.zeros((trials, N), dtype=np.uint8)
        u[:, a_set] = msgs
        x = transform_rows(u)
        for t in range(trials):
            y_sr[t] = bec_sample_rows(x[t : t + 1], spec.e_sr, _stream(seed, t, k, blocks, _ROLE_SR))[0]
            y_sd[t] = cascade_rows(y_sr[t : t + 1], spec.e_deg, _stream(seed, t, k, blocks, _ROLE_DEG))[0]

        # relay decodes the whole information set from its SR output
        u_relay, _ = decode_bec_rows(y_sr, source_spec.info_mask, source_spec.frozen_template)
        relay_bits = u_relay[:, a_set]
        relay_err[:, k] = np.any(relay_bits != msgs, axis=1)

        # relay re-encodes A\B (its own, possibly wrong, estimate) over RD
        coset_true = msgs[:, msg_pos]
        coset_fwd = relay_bits[:, msg_pos]
        u_rd = np.zeros((trials, N), dtype=np.uint8)
        u_rd[:, rd_info] = coset_fwd
        x_rd = transform_rows(u_rd)
        y_rd = np.empty((trials, N), dtype=np.int8)
        for t in range(trials):
            y_rd[t] = bec_sample_rows(x_rd[t : t + 1], spec.e_rd, _stream(seed, t, k + 1, blocks, _ROLE_RD))[0]
        u_dest_rd, _ = decode_bec_rows(y_rd, scheme.rd_code.info_mask, scheme.rd_code.frozen_template)
        coset_dest = u_dest_rd[:, rd_info]
        rd_err[:, k] = np.any(coset_dest != coset_true, axis=1)

        # destination freezes the received coset and decodes B from stored SD
        frozen = np.zeros((trials, N), dtype=np.uint8)
        frozen[:, code.message_set] = coset_dest
        b_mask = np.zeros(N, dtype=bool)
        b_mask[code.secure_set] = True
        u_dest, _ = decode_bec_rows(y_sd, b_mask, frozen)
        recovered = np.empty_like(msgs)
        recovered[:, msg_pos] = coset_dest
        recovered[:, ~msg_pos] = u_dest[:, code.secure_set]
        dest_err[:, k] = np.any(recovered != msgs, axis=1)

    return RelayRunReport(
        relay_errors=relay_err,
        rd_errors=rd_err,
        dest_errors=dest_err,
        achieved_rate=scheme.achieved_rate,
        overall_error_rate=float(dest_err.mean()),
        trials=trials,
        seed=seed,
    )
