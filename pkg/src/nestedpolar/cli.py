"""Batch experiment driver.

Commands: ``construct`` (reliability profile to CSV), ``wiretap-sweep``
(equivocation vs. eavesdropper erasure rate), ``fig1`` (the wiretap sweep
at the canonical design point N=1024, rate 0.25, main erasure 0.25,
design eavesdropper erasure 0.5), ``relay-sim`` (block-Markov
decode-and-forward run), and ``selftest`` (oracle equivalence checks).

Configuration comes from plain-text key=value files, overridden on the
command line.  Every artifact is a CSV whose non-comment body is a pure
function of the configuration and seed; the only volatile line is the
"generated:" comment.  Sweep commands also emit a standalone matplotlib
plot script so the core keeps zero graphics dependencies.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .channels import GENERATOR_NAME
from .construction import BSC, bec_reliability, mc_reliability
from .relay import RelayChannelSpec, build_relay_scheme, calibrate_margin, simulate_relay
from .wiretap import WiretapConfig, run_wiretap_experiment

__all__ = ["ExperimentConfig", "ConfigError", "run", "main"]

COMMANDS = ("construct", "wiretap-sweep", "relay-sim", "fig1", "selftest")

FIG1_PRESET = {
    "n": 10,
    "rate": 0.25,
    "e_m": 0.25,
    "design_e_w": 0.5,
    "ew_start": 0.26,
    "ew_stop": 0.50,
    "ew_step": 0.02,
}

# key -> (converter, default); None default means required
_SCHEMAS: dict[str, dict] = {
    "construct": {
        "n": (int, None),
        "channel": (str, "bec"),
        "erasure_prob": (float, 0.5),
        "crossover_prob": (float, 0.11),
        "trials": (int, 100_000),
        "seed": (int, 0),
    },
    "wiretap-sweep": {
        "n": (int, 10),
        "rate": (float, 0.25),
        "e_m": (float, 0.25),
        "design_e_w": (float, 0.5),
        "ew_start": (float, 0.26),
        "ew_stop": (float, 0.50),
        "ew_step": (float, 0.02),
        "trials": (int, 1000),
        "seed": (int, 0),
        "threads": (int, 1),
    },
    "fig1": {
        "trials": (int, 1000),
        "seed": (int, 0),
        "threads": (int, 1),
    },
    "relay-sim": {
        "n": (int, 10),
        "e_sr": (float, 0.1),
        "e_deg": (float, 4.0 / 9.0),
        "e_rd": (float, 0.5),
        "blocks": (int, 8),
        "margin": (float, 0.0),  # 0 means "calibrate to target"
        "target": (float, 0.001),
        "trials": (int, 200),
        "seed": (int, 0),
    },
    "selftest": {
        "seed": (int, 0),
    },
}


class ConfigError(Exception):
    """Invalid configuration; the message names the offending key."""


@dataclass
class ExperimentConfig:
    """One validated experiment: command, typed parameters, output target."""

    command: str
    params: dict = field(default_factory=dict)
    output_path: Path | None = None


def _parse_config_file(path: Path) -> dict[str, str]:
    raw: dict[str, str] = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config: line {lineno} is not key=value: {line!r}")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()
    return raw


def _typed_params(command: str, raw: dict[str, str]) -> dict:
    schema = _SCHEMAS[command]
    params = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(f"{key}: unknown key for command {command!r}")
        conv = schema[key][0]
        try:
            params[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {value!r} as {conv.__name__}") from exc
    for key, (_, default) in schema.items():
        if key not in params:
            if default is None:
                raise ConfigError(f"{key}: required key missing for command {command!r}")
            params[key] = default
    return params


def _require(cond: bool, key: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"{key}: {message}")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _header_lines(command: str, params: dict, schema_name: str) -> list[str]:
    items = " ".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))
    return [
        f"# nestedpolar {__version__} schema={schema_name}",
        f"# config: command={command} {items}",
        f"# rng: {GENERATOR_NAME}",
        f"# generated: {datetime.now(timezone.utc).isoformat()}",
    ]


def _write_artifacts(files: list[tuple[Path, str]]) -> None:
    """Write all artifacts, or none: temp files are renamed only at the end."""
    temps = []
    try:
        for path, content in files:
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(content)
            temps.append((tmp, path))
        for tmp, path in temps:
            os.replace(tmp, path)
    except BaseException:
        for tmp, _ in temps:
            try:
                tmp.unlink(missing_ok=True)
            except OSError:
                pass
        raise


# ---------------------------------------------------------------------------
# commands


def _run_construct(cfg: ExperimentConfig) -> int:
    p = cfg.params
    _require(p["channel"] in ("bec", "bsc"), "channel", "must be 'bec' or 'bsc'")
    if p["channel"] == "bec":
        _require(0.0 <= p["erasure_prob"] <= 1.0, "erasure_prob", "must be in [0, 1]")
        profile = bec_reliability(p["n"], p["erasure_prob"])
    else:
        _require(0.0 <= p["crossover_prob"] <= 0.5, "crossover_prob", "must be in [0, 1/2]")
        _require(p["trials"] >= 1, "trials", "must be positive")
        profile = mc_reliability(BSC(p["crossover_prob"]), p["n"], p["trials"], p["seed"])
    out = cfg.output_path or Path("construct.csv")
    lines = _header_lines(cfg.command, p, "construct-v1")
    lines.append("index,z,exact")
    flag = "true" if profile.exact else "false"
    for i, z in enumerate(profile.z):
        lines.append(f"{i},{float(z)!r},{flag}")
    _write_artifacts([(out, "\n".join(lines) + "\n")])
    print(f"wrote {out}")
    return 0


def _sweep_points(start: float, stop: float, step: float) -> list[float]:
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def _plot_script(csv_name: str) -> str:
    return f'''"""Plot equivocation rate and its upper bound from {csv_name}."""
import matplotlib.pyplot as plt

with open("{csv_name}") as f:
    rows = [ln.strip().split(",") for ln in f if ln.strip() and not ln.startswith("#")]
columns = {{name: [float(r[i]) for r in rows[1:]] for i, name in enumerate(rows[0])}}

plt.figure(figsize=(6, 4))
plt.plot(columns["e_w"], columns["mean_equivocation_rate"], "o-", label="equivocation rate")
plt.plot(columns["e_w"], columns["upper_bound"], "k--", label="upper bound")
plt.xlabel("eavesdropper erasure probability")
plt.ylabel("equivocation rate (bits/use)")
plt.legend()
plt.grid(True, alpha=0.3)
plt.tight_layout()
out = "{csv_name}".replace(".csv", "") + ".png"
plt.savefig(out, dpi=150)
print("saved", out)
'''


def _run_wiretap(cfg: ExperimentConfig, schema_name: str) -> int:
    p = dict(FIG1_PRESET) if cfg.command == "fig1" else {}
    p.update(cfg.params)
    _require(0.0 <= p["e_m"] <= p["design_e_w"] <= 1.0, "e_m", "need 0 <= e_m <= design_e_w <= 1")
    _require(0.0 <= p["rate"] < 1.0, "rate", "must be in [0, 1)")
    _require(p["trials"] >= 1, "trials", "must be positive")
    _require(p["threads"] >= 1, "threads", "must be positive")
    _require(p["ew_step"] > 0.0, "ew_step", "must be positive")
    _require(p["ew_start"] <= p["ew_stop"], "ew_start", "must not exceed ew_stop")
    points = _sweep_points(p["ew_start"], p["ew_stop"], p["ew_step"])
    _require(all(0.0 <= x <= 1.0 for x in points), "ew_stop", "sweep leaves [0, 1]")
    try:
        wcfg = WiretapConfig(
            e_m=p["e_m"], e_w=p["design_e_w"], rate=p["rate"], n=p["n"],
            trials=p["trials"], seed=p["seed"],
        )
    except ValueError as exc:
        raise ConfigError(f"n: {exc}") from exc
    reports = run_wiretap_experiment(wcfg, points, workers=p["threads"])
    out = cfg.output_path or Path(f"{cfg.command}.csv")
    lines = _header_lines(cfg.command, p, schema_name)
    lines.append("e_w,mean_equivocation_rate,upper_bound,trials,info_size,secure_size,block_length,seed")
    for r in reports:
        lines.append(
            f"{r.e_w!r},{r.mean_equivocation_rate!r},{r.upper_bound!r},"
            f"{r.trials},{r.info_size},{r.secure_size},{r.block_length},{r.seed}"
        )
    script_path = out.with_name(out.stem + "_plot.py")
    _write_artifacts([
        (out, "\n".join(lines) + "\n"),
        (script_path, _plot_script(out.name)),
    ])
    print(f"wrote {out} and {script_path}")
    return 0


def _run_relay(cfg: ExperimentConfig) -> int:
    p = cfg.params
    for key in ("e_sr", "e_deg", "e_rd"):
        _require(0.0 <= p[key] <= 1.0, key, "must be in [0, 1]")
    _require(p["blocks"] >= 1, "blocks", "must be positive")
    _require(p["trials"] >= 1, "trials", "must be positive")
    _require(p["margin"] == 0.0 or 0.0 < p["margin"] <= 1.0, "margin", "must be in (0, 1] (or 0 to calibrate)")
    _require(p["target"] > 0.0, "target", "must be positive")
    spec = RelayChannelSpec(p["e_sr"], p["e_deg"], p["e_rd"])
    try:
        if p["margin"] > 0.0:
            scheme = build_relay_scheme(spec, p["n"], p["blocks"], p["margin"])
        else:
            scheme = calibrate_margin(spec, p["n"], p["blocks"], p["target"])
    except ValueError as exc:
        raise ConfigError(f"margin: {exc}") from exc
    report = simulate_relay(scheme, spec, p["trials"], p["seed"])
    out = cfg.output_path or Path("relay-sim.csv")
    lines = _header_lines(cfg.command, p, "relay-sim-v1")
    lines.append(
        f"# scheme: regime={scheme.regime} margin={scheme.margin!r} "
        f"info_size={scheme.source_code.info_set.size} "
        f"secure_size={scheme.source_code.randomization_len} "
        f"stage_bounds={scheme.stage_bounds[0]!r},{scheme.stage_bounds[1]!r},{scheme.stage_bounds[2]!r}"
    )
    lines.append("trial,block,relay_error,rd_error,dest_error")
    for t in range(report.trials):
        for k in range(scheme.blocks):
            lines.append(
                f"{t},{k},{int(report.relay_errors[t, k])},"
                f"{int(report.rd_errors[t, k])},{int(report.dest_errors[t, k])}"
            )
    lines.append(
        f"summary,achieved_rate,{report.achieved_rate},"
        f"overall_error_rate,{report.overall_error_rate!r}"
    )
    _write_artifacts([(out, "\n".join(lines) + "\n")])
    print(f"wrote {out}")
    return 0


def _run_selftest(cfg: ExperimentConfig) -> int:
    from .polar import CodeParams, generator_matrix, polar_transform
    from .gf2 import BitVector, vec_mat_mul
    from .wiretap import (
        NestedCodeSpec,
        equivocation_bruteforce,
        equivocation_rank,
        parity_checks,
    )
    from .construction import select_info_set, select_secure_subset

    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1

    # rank formula vs brute force, all 256 erasure patterns, two shapes
    for ka, kb in ((5, 3), (6, 2)):
        params = CodeParams(3)
        info = select_info_set(bec_reliability(3, 0.25), ka)
        secure = select_secure_subset(info, bec_reliability(3, 0.5), kb)
        code = NestedCodeSpec(params, info, secure)
        h, h_s = parity_checks(code)
        ok = True
        for pattern in range(256):
            erased = [i for i in range(8) if (pattern >> i) & 1]
            by_rank = equivocation_rank(h, h_s, erased)
            brute = equivocation_bruteforce(code, erased)
            if abs(by_rank - brute) > 1e-9:
                ok = False
                break
        check(f"equivocation by rank == brute force (|A|={ka}, |B|={kb})", ok)

    # mean preservation of the erasure recursion
    ok = all(
        abs(bec_reliability(n, eps).z.mean() - eps) <= 1e-12
        for n in range(1, 13)
        for eps in (0.1, 0.25, 0.5)
    )
    check("erasure recursion preserves the mean", ok)

    # degradation monotonicity at n=10
    z_m = bec_reliability(10, 0.25).z
    z_w = bec_reliability(10, 0.5).z
    check("degraded-channel parameters dominate", bool(np.all(z_w >= z_m - 1e-12)))

    # fast transform against the explicit generator, and involution
    rng = np.random.default_rng(cfg.params["seed"])
    g = generator_matrix(4)
    ok = True
    for _ in range(50):
        u = BitVector(rng.integers(0, 2, 16, dtype=np.uint8))
        if polar_transform(u) != vec_mat_mul(u, g):
            ok = False
            break
        if polar_transform(polar_transform(u)) != u:
            ok = False
            break
    check("butterfly transform matches generator matrix and inverts itself", ok)

    print("selftest:", "OK" if failures == 0 else f"{failures} failure(s)")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# entry point


def run(config: ExperimentConfig) -> int:
    """Execute one validated experiment; returns the process exit status."""
    if config.command == "construct":
        return _run_construct(config)
    if config.command == "wiretap-sweep":
        return _run_wiretap(config, "wiretap-sweep-v1")
    if config.command == "fig1":
        return _run_wiretap(config, "fig1-v1")
    if config.command == "relay-sim":
        return _run_relay(config)
    if config.command == "selftest":
        return _run_selftest(config)
    raise ConfigError(f"command: unknown command {config.command!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nestedpolar",
        description="Nested polar coding experiments on erasure wiretap and relay channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=Path, default=None, help="key=value config file")
        p.add_argument("--seed", type=int, default=None, help="master PRNG seed")
        p.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials")
        p.add_argument("--out", type=Path, default=None, help="output CSV path")
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override any config key (repeatable)",
        )
    return parser


def _assemble_config(args: argparse.Namespace) -> ExperimentConfig:
    raw: dict[str, str] = {}
    if args.config is not None:
        raw.update(_parse_config_file(args.config))
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set: expected KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        raw[key.strip()] = value.strip()
    for key in ("seed", "trials", "threads"):
        value = getattr(args, key)
        if value is not None:
            raw[key] = str(value)
    params = _typed_params(args.command, raw)
    return ExperimentConfig(command=args.command, params=params, output_path=args.out)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _assemble_config(args)
        return run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
