"""Command-line experiment runner.

``descriptorsim run <experiment>`` executes one of the library's
experiments (or all of them), compares every reported measure against its
closed form and against the independent state-vector oracle, and emits a
table, CSV, or JSON report.  Exit code 0 means every residual stayed
below the tolerance, 1 flags a residual violation, and 2 a configuration
error.  Identical configurations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from .bell import (
    BellConfig,
    Chained,
    Decohered,
    build_bell_network,
    closed_form_measures,
    nonisomorphism_witness,
    run_bell,
    run_wigner_undo,
)
from .chsh import (
    ALICE_ANGLES,
    BOB_ANGLES,
    INPUT_PAIRS,
    chsh_win_rate,
    enumerate_classical,
    quantum_distribution,
)
from .operators import DEFAULT_TOLERANCE
from .oracle import joint_outcome_distribution, simulate_statevector

EXPERIMENTS = ("bell", "chsh", "decoherence", "chain", "wigner", "nonisomorphism", "all")
FORMATS = ("table", "csv", "json")
PRESETS = {
    "chsh-00": (0, 0),
    "chsh-01": (0, 1),
    "chsh-10": (1, 0),
    "chsh-11": (1, 1),
}
ENV_TOLERANCE = "DESCRIPTOR_SIM_TOLERANCE"
# engine-side algebraic validation cannot be meaningfully tighter than
# double-precision accumulation; reporting uses the raw user tolerance
MIN_ENGINE_TOLERANCE = 1e-12


class ConfigError(ValueError):
    """Bad flag combination, malformed value, or unknown config key."""


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    theta: float = 0.0
    phi: float = math.pi / 4
    seed: int = 0
    chain_alice: int = 2
    chain_bob: int = 2
    tolerance: float = DEFAULT_TOLERANCE
    format: str = "table"
    output: str | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.chain_alice < 0 or self.chain_bob < 0:
            raise ConfigError("chain lengths must be >= 0")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")


_CONFIG_KEYS = {
    "experiment": str,
    "theta": float,
    "phi": float,
    "seed": int,
    "chain_alice": int,
    "chain_bob": int,
    "tolerance": float,
    "format": str,
    "output": str,
    "preset": str,
}


def _load_config_file(path: str) -> dict:
    try:
        text = open(path).read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    raw: dict = {}
    if text.lstrip().startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("JSON config must be an object")
    else:
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno} is not key=value: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
    out = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="descriptorsim",
        description="Run descriptor-evolution experiments and report branch measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment and emit a report")
    run.add_argument("experiment", choices=EXPERIMENTS)
    run.add_argument("--theta", type=float, default=None, help="Alice's rotation (radians; default 0)")
    run.add_argument("--phi", type=float, default=None, help="Bob's rotation (radians; default pi/4)")
    run.add_argument("--seed", type=int, default=None, help="environment scramble seed (default 0)")
    run.add_argument("--chain-alice", type=int, default=None, dest="chain_alice",
                     help="Alice-side chain length (default 2)")
    run.add_argument("--chain-bob", type=int, default=None, dest="chain_bob",
                     help="Bob-side chain length (default 2)")
    run.add_argument("--tolerance", type=float, default=None,
                     help=f"residual tolerance (default {DEFAULT_TOLERANCE}; "
                          f"env {ENV_TOLERANCE})")
    run.add_argument("--format", choices=FORMATS, default=None, help="report format (default table)")
    run.add_argument("--output", default=None, help="write the report to this path instead of stdout")
    run.add_argument("--preset", choices=sorted(PRESETS), default=None,
                     help="CHSH input pair; sets theta and phi")
    run.add_argument("--config", default=None, help="key=value or JSON config file")
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Resolve CLI flags, config file, environment, and defaults, in that
    precedence order; deterministic for identical inputs."""
    ns = _build_parser().parse_args(argv)
    file_vals = _load_config_file(ns.config) if ns.config else {}

    def pick(key):
        cli = getattr(ns, key, None)
        return cli if cli is not None else file_vals.get(key)

    experiment = ns.experiment
    if "experiment" in file_vals and file_vals["experiment"] != experiment:
        raise ConfigError(
            f"config file experiment {file_vals['experiment']!r} conflicts "
            f"with command line {experiment!r}"
        )

    theta, phi = pick("theta"), pick("phi")
    preset = pick("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        if theta is not None or phi is not None:
            raise ConfigError("--preset conflicts with explicit --theta/--phi")
        x, y = PRESETS[preset]
        theta, phi = ALICE_ANGLES[x], BOB_ANGLES[y]

    tolerance = pick("tolerance")
    if tolerance is None and ENV_TOLERANCE in os.environ:
        try:
            tolerance = float(os.environ[ENV_TOLERANCE])
        except ValueError as exc:
            raise ConfigError(f"bad {ENV_TOLERANCE}: {os.environ[ENV_TOLERANCE]!r}") from exc

    defaults = RunConfig(experiment="bell")
    return RunConfig(
        experiment=experiment,
        theta=defaults.theta if theta is None else theta,
        phi=defaults.phi if phi is None else phi,
        seed=defaults.seed if pick("seed") is None else pick("seed"),
        chain_alice=defaults.chain_alice if pick("chain_alice") is None else pick("chain_alice"),
        chain_bob=defaults.chain_bob if pick("chain_bob") is None else pick("chain_bob"),
        tolerance=defaults.tolerance if tolerance is None else tolerance,
        format=defaults.format if pick("format") is None else pick("format"),
        output=pick("output"),
    )


def _round10(x: float) -> float:
    return float(f"{x:.10g}")


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _record_oracle(bell_cfg: BellConfig) -> dict[str, float]:
    network = build_bell_network(bell_cfg).network
    dist = joint_outcome_distribution(simulate_statevector(network), ("SC",))
    return {format(value[0], "02b"): p for value, p in dist.items()}


def _bell_like_section(
    name: str, bell_cfg: BellConfig, expected: dict[str, float], tolerance: float
) -> dict:
    outcome = run_bell(bell_cfg)
    oracle = _record_oracle(bell_cfg)
    rows = []
    for key in ("00", "01", "10", "11"):
        measure = outcome.branch_measures[key]
        rows.append(
            {
                "branch": key,
                "measure": measure,
                "expected": expected[key],
                "residual": abs(measure - expected[key]),
                "oracle": oracle[key],
                "oracle_residual": abs(measure - oracle[key]),
            }
        )
    checks = {
        "measure_sum_residual": abs(sum(outcome.branch_measures.values()) - 1.0),
        "alice_marginal_residual": max(abs(m - 0.5) for m in outcome.alice_marginal),
        "bob_marginal_residual": max(abs(m - 0.5) for m in outcome.bob_marginal),
        "reconstruction_residual": outcome.reconstruction_residual,
        "alice_unsharp": not any(outcome.alice_sharpness.values()),
    }
    for key, value in outcome.diagnostics.items():
        if key != "measure_sum":
            checks[key] = value
    ok = (
        all(r["residual"] < tolerance and r["oracle_residual"] < tolerance for r in rows)
        and checks["measure_sum_residual"] < tolerance
        and checks["alice_marginal_residual"] < tolerance
        and checks["bob_marginal_residual"] < tolerance
        and checks["reconstruction_residual"] < tolerance
        and checks["alice_unsharp"]
    )
    if "q1_offdiagonal" in checks:
        ok = ok and checks["q1_offdiagonal"] < tolerance and checks["q1_x_expectation"] < tolerance
    return {"experiment": name, "parameters": _params(bell_cfg), "rows": rows,
            "checks": checks, "pass": ok}


def _params(bell_cfg: BellConfig) -> dict:
    params = {"theta": bell_cfg.theta, "phi": bell_cfg.phi}
    v = bell_cfg.variant
    if isinstance(v, Decohered):
        params["seed"] = v.seed
    if isinstance(v, Chained):
        params["chain_alice"], params["chain_bob"] = v.alice, v.bob
    return params


def _engine_tolerance(tolerance: float) -> float:
    return max(tolerance, MIN_ENGINE_TOLERANCE)


def _section_bell(cfg: RunConfig) -> dict:
    bell_cfg = BellConfig(cfg.theta, cfg.phi, tolerance=_engine_tolerance(cfg.tolerance))
    return _bell_like_section(
        "bell", bell_cfg, closed_form_measures(cfg.theta, cfg.phi), cfg.tolerance
    )


def _section_decoherence(cfg: RunConfig) -> dict:
    bell_cfg = BellConfig(
        cfg.theta, cfg.phi, Decohered(cfg.seed), tolerance=_engine_tolerance(cfg.tolerance)
    )
    return _bell_like_section(
        "decoherence", bell_cfg, closed_form_measures(cfg.theta, cfg.phi), cfg.tolerance
    )


def _section_chain(cfg: RunConfig) -> dict:
    bell_cfg = BellConfig(
        cfg.theta, cfg.phi, Chained(cfg.chain_alice, cfg.chain_bob),
        tolerance=_engine_tolerance(cfg.tolerance),
    )
    return _bell_like_section(
        "chain", bell_cfg, closed_form_measures(cfg.theta, cfg.phi), cfg.tolerance
    )


def _section_wigner(cfg: RunConfig) -> dict:
    report = run_wigner_undo(cfg.theta, cfg.phi, tolerance=_engine_tolerance(cfg.tolerance))
    expected = closed_form_measures(cfg.theta, report.effective_bob_angle)
    outcome = report.outcome
    oracle = _record_oracle(outcome.config)
    rows = []
    for key in ("00", "01", "10", "11"):
        measure = outcome.branch_measures[key]
        rows.append(
            {
                "branch": key,
                "measure": measure,
                "expected": expected[key],
                "residual": abs(measure - expected[key]),
                "oracle": oracle[key],
                "oracle_residual": abs(measure - oracle[key]),
            }
        )
    conditional = report.conditional_bob_given_alice
    checks = {
        "effective_bob_angle": report.effective_bob_angle,
        "reconstruction_residual": outcome.reconstruction_residual,
    }
    for (b, a), value in sorted(conditional.items()):
        checks[f"p_bob{b}_given_alice{a}"] = "undefined" if value is None else value
    ok = all(
        r["residual"] < cfg.tolerance and r["oracle_residual"] < cfg.tolerance
        for r in rows
    ) and checks["reconstruction_residual"] < cfg.tolerance
    return {
        "experiment": "wigner",
        "parameters": {"theta": cfg.theta, "phi": cfg.phi},
        "rows": rows,
        "checks": checks,
        "pass": ok,
    }


def _section_chsh(cfg: RunConfig) -> dict:
    rate = chsh_win_rate(_engine_tolerance(cfg.tolerance))
    expected_rate = math.cos(math.pi / 8) ** 2
    best, _ = enumerate_classical()
    rows = [
        {
            "branch": "win_rate",
            "measure": rate,
            "expected": expected_rate,
            "residual": abs(rate - expected_rate),
        },
        {
            "branch": "classical_bound",
            "measure": best / 4,
            "expected": 0.75,
            "residual": abs(best / 4 - 0.75),
        },
    ]
    for x, y in INPUT_PAIRS:
        dist = quantum_distribution(x, y, _engine_tolerance(cfg.tolerance))
        expected = closed_form_measures(ALICE_ANGLES[x], BOB_ANGLES[y])
        oracle = _record_oracle(BellConfig(ALICE_ANGLES[x], BOB_ANGLES[y]))
        for key in ("00", "01", "10", "11"):
            rows.append(
                {
                    "branch": f"x{x}y{y}:{key}",
                    "measure": dist[key],
                    "expected": expected[key],
                    "residual": abs(dist[key] - expected[key]),
                    "oracle": oracle[key],
                    "oracle_residual": abs(dist[key] - oracle[key]),
                }
            )
    ok = all(r["residual"] < cfg.tolerance for r in rows) and all(
        r.get("oracle_residual", 0.0) < cfg.tolerance for r in rows
    ) and best == 3
    return {
        "experiment": "chsh",
        "parameters": {
            "alice_angles": list(ALICE_ANGLES),
            "bob_angles": list(BOB_ANGLES),
        },
        "rows": rows,
        "checks": {"classical_best_wins": best, "win_rate": rate,
                   "classical_bound": 0.75},
        "pass": ok,
    }


def _section_nonisomorphism(cfg: RunConfig) -> dict:
    report = nonisomorphism_witness(_engine_tolerance(cfg.tolerance))
    exact_gap = 2 * math.sqrt(2)  # Cnot turns q1x into a two-qubit product
    rows = [
        {
            "branch": "state_distance",
            "measure": report.state_distance,
            "expected": 0.0,
            "residual": report.state_distance,
        },
        {
            "branch": "descriptor_distance",
            "measure": report.descriptor_distance,
            "expected": exact_gap,
            "residual": abs(report.descriptor_distance - exact_gap),
        },
        {
            "branch": "marginal_expectation_gap",
            "measure": report.marginal_expectation_gap,
            "expected": 0.0,
            "residual": report.marginal_expectation_gap,
        },
    ]
    ok = (
        report.states_match
        and report.descriptors_differ
        and all(r["residual"] < cfg.tolerance for r in rows)
    )
    return {
        "experiment": "nonisomorphism",
        "parameters": {},
        "rows": rows,
        "checks": {
            "states_match": report.states_match,
            "descriptors_differ": report.descriptors_differ,
        },
        "pass": ok,
    }


_SECTIONS = {
    "bell": _section_bell,
    "chsh": _section_chsh,
    "decoherence": _section_decoherence,
    "chain": _section_chain,
    "wigner": _section_wigner,
    "nonisomorphism": _section_nonisomorphism,
}


def _render_json(sections: list[dict], cfg: RunConfig) -> str:
    def clean(value):
        if isinstance(value, float):
            return _round10(value)
        if isinstance(value, dict):
            return {k: clean(v) for k, v in value.items()}
        if isinstance(value, list):
            return [clean(v) for v in value]
        return value

    doc = {
        "tolerance": _round10(cfg.tolerance),
        "experiments": clean(sections),
        "pass": all(s["pass"] for s in sections),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_csv(sections: list[dict], cfg: RunConfig) -> str:
    multi = len(sections) > 1
    header = ("experiment," if multi else "") + "branch,measure,expected,residual"
    lines = [header]
    for section in sections:
        prefix = f"{section['experiment']}," if multi else ""
        for row in section["rows"]:
            lines.append(
                prefix
                + ",".join(
                    (row["branch"], _fmt(row["measure"]), _fmt(row["expected"]),
                     _fmt(row["residual"]))
                )
            )
    return "\n".join(lines) + "\n"


def _render_table(sections: list[dict], cfg: RunConfig) -> str:
    lines = []
    for section in sections:
        params = "  ".join(f"{k}={v}" for k, v in section["parameters"].items())
        lines.append(f"== {section['experiment']} {params}".rstrip())
        lines.append(
            f"{'branch':<26}{'measure':>18}{'expected':>18}{'residual':>18}"
            f"{'oracle':>18}"
        )
        for row in section["rows"]:
            oracle = _fmt(row["oracle"]) if "oracle" in row else "-"
            lines.append(
                f"{row['branch']:<26}{_fmt(row['measure']):>18}"
                f"{_fmt(row['expected']):>18}{_fmt(row['residual']):>18}"
                f"{oracle:>18}"
            )
        for name, value in section["checks"].items():
            shown = _fmt(value) if isinstance(value, float) else value
            lines.append(f"  {name} = {shown}")
        lines.append(f"  result: {'PASS' if section['pass'] else 'FAIL'}")
        lines.append("")
    overall = all(s["pass"] for s in sections)
    lines.append(f"overall: {'PASS' if overall else 'FAIL'} (tolerance {_fmt(cfg.tolerance)})")
    return "\n".join(lines) + "\n"


def execute_and_report(cfg: RunConfig) -> tuple[int, str]:
    """Run the configured experiment(s); returns (exit code, report text)."""
    names = [e for e in EXPERIMENTS if e != "all"] if cfg.experiment == "all" else [cfg.experiment]
    sections = [_SECTIONS[name](cfg) for name in names]
    render = {"json": _render_json, "csv": _render_csv, "table": _render_table}[cfg.format]
    text = render(sections, cfg)
    code = 0 if all(s["pass"] for s in sections) else 1
    return code, text


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse reports and exits 2 on bad flags
        return int(exc.code or 0)
    code, text = execute_and_report(cfg)
    if cfg.output:
        with open(cfg.output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
