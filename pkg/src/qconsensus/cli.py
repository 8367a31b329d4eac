"""Command line front end: run, compare, prepare, verify, convergence.

Experiments are described by a YAML config file (print the schema with
`qconsensus --print-schema`).  Exit codes: 0 success, 1 config or usage
error, 2 numeric invariant violation or failed verification.
"""

from __future__ import annotations

import argparse
import sys
from itertools import combinations
from pathlib import Path

import numpy as np
import yaml

from .dynamics import ChannelFamily, build_channels
from .network import NetworkTopology, is_connected
from .qcore import (
    apply_channel,
    bitstring_ket,
    check_cptp,
    dual_apply,
    expectation,
    ket_to_density,
    load_matrix,
    purity,
)
from .simulator import (
    Schedule,
    convergence_probability,
    prepare_dicke,
    random_density,
    run,
    write_trajectory_csv,
)
from .symmetry import consensus_report, dicke_ket, global_observable, v_smc, v_total

CONFIG_SCHEMA = """\
# qconsensus experiment configuration (YAML)

topology:
  m: 3                       # number of qubits (>= 2)
  edges: [[1, 2], [2, 3]]    # interaction pairs, 1-based site indices
  probabilities: [0.6, 0.4]  # optional per-edge selection weights (sum to 1)

family:
  kind: ssc                  # gossip | ssc | smc
  alpha: 0.5                 # gossip only: mixing weight in (0, 1)

schedule:
  mode: cyclic               # cyclic | random
  order: [0, 1]              # cyclic only: indices into edges
                             # (optional, defaults to round robin)
  seed: 7                    # random only (optional, defaults to top-level seed)

steps: 300                   # channel applications per run (>= 1)

initial_state:
  kind: basis                # basis | dicke | random | file
  string: "011"              # basis: bit string, site 1 first
  k: 1                       # dicke: excitation count
  seed: 42                   # random: optional, defaults to top-level seed
  path: rho.json             # file: JSON matrix, see below

seed: 123                    # master seed for any unseeded randomness
output: trajectory.csv       # optional output file name

prepare:                     # `prepare` subcommand only
  target_k: 1
  use_s_measurement: false
  steps: 300

convergence:                 # `convergence` subcommand only
  gamma: 0.01
  horizon: 200
  trials: 200

# Matrix file format (JSON): {"dim": d, "entries": [[re, im], ...]} with
# d*d entries in row-major order (site 1 = most significant bit).
#
# Trajectory CSV columns: step, purity, s_expectation, v_total, v_smc,
# smc_population, pop_dicke_0 ... pop_dicke_m (12 significant digits).
"""

DEFAULT_SEED = 0
VERIFY_STATES = 50


class ConfigError(Exception):
    """Invalid or unreadable experiment configuration."""


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must be a mapping at the top level")
    return cfg


def _section(cfg: dict, key: str, required: bool = True) -> dict:
    value = cfg.get(key)
    if value is None:
        if required:
            raise ConfigError(f"missing config section '{key}'")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"config section '{key}' must be a mapping")
    return value


def _int_value(section: dict, key: str, context: str, *, required: bool = True, default=None):
    value = section.get(key, default)
    if value is None:
        if required:
            raise ConfigError(f"missing key '{context}.{key}'")
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{context}.{key}' must be an integer, got {value!r}")
    return value


def _build_topology(cfg: dict) -> NetworkTopology:
    section = _section(cfg, "topology")
    m = _int_value(section, "m", "topology")
    edges = section.get("edges")
    if not isinstance(edges, list) or not edges:
        raise ConfigError("'topology.edges' must be a nonempty list of site pairs")
    pairs = []
    for i, edge in enumerate(edges):
        if (not isinstance(edge, (list, tuple))) or len(edge) != 2:
            raise ConfigError(f"'topology.edges[{i}]' must be a pair of site indices")
        pairs.append(tuple(edge))
    probabilities = section.get("probabilities")
    try:
        return NetworkTopology(m=m, neighborhoods=tuple(pairs), probabilities=None if probabilities is None else tuple(probabilities))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'topology': {exc}") from exc


def _build_family(cfg: dict) -> ChannelFamily:
    section = _section(cfg, "family")
    kind = section.get("kind")
    if kind not in ("gossip", "ssc", "smc"):
        raise ConfigError(f"'family.kind' must be gossip, ssc, or smc, got {kind!r}")
    alpha = section.get("alpha")
    try:
        if kind == "gossip":
            return ChannelFamily.gossip(0.5 if alpha is None else float(alpha))
        if alpha is not None:
            raise ConfigError(f"'family.alpha' is only valid for gossip")
        return ChannelFamily(kind)
    except ValueError as exc:
        raise ConfigError(f"'family': {exc}") from exc


def _build_schedule(cfg: dict, master_seed: int) -> Schedule:
    section = _section(cfg, "schedule", required=False)
    mode = section.get("mode", "cyclic")
    try:
        if mode == "cyclic":
            order = section.get("order")
            return Schedule.cyclic(None if order is None else tuple(order))
        if mode == "random":
            seed = section.get("seed", master_seed)
            return Schedule.random(probabilities=section.get("probabilities"), seed=seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'schedule': {exc}") from exc
    raise ConfigError(f"'schedule.mode' must be cyclic or random, got {mode!r}")


def _build_initial_state(cfg: dict, m: int, master_seed: int) -> np.ndarray:
    section = _section(cfg, "initial_state")
    kind = section.get("kind")
    if kind == "basis":
        bits = section.get("string")
        if not isinstance(bits, str) or len(bits) != m or any(c not in "01" for c in bits):
            raise ConfigError(f"'initial_state.string' must be an m={m} bit string, got {bits!r}")
        return ket_to_density(bitstring_ket(bits))
    if kind == "dicke":
        k = _int_value(section, "k", "initial_state")
        if not 0 <= k <= m:
            raise ConfigError(f"'initial_state.k' must lie in 0..{m}, got {k}")
        return ket_to_density(dicke_ket(m, k))
    if kind == "random":
        seed = _int_value(section, "seed", "initial_state", required=False)
        return random_density(master_seed if seed is None else seed, 1 << m)
    if kind == "file":
        path = section.get("path")
        if not isinstance(path, str):
            raise ConfigError("'initial_state.path' must be a file path")
        try:
            rho = load_matrix(path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"'initial_state.path': {exc}") from exc
        if rho.shape != (1 << m, 1 << m):
            raise ConfigError(f"matrix in {path} has shape {rho.shape}, expected {(1 << m, 1 << m)}")
        return rho
    raise ConfigError(f"'initial_state.kind' must be basis, dicke, random, or file, got {kind!r}")


def _steps(cfg: dict) -> int:
    steps = _int_value(cfg, "steps", "config")
    if steps < 1:
        raise ConfigError(f"'steps' must be >= 1, got {steps}")
    return steps


def _master_seed(cfg: dict, override) -> int:
    if override is not None:
        return int(override)
    seed = cfg.get("seed", DEFAULT_SEED)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"'seed' must be an integer, got {seed!r}")
    return seed


def _output_path(cfg: dict, args, default_name: str) -> Path:
    name = cfg.get("output", default_name)
    if not isinstance(name, str) or not name:
        raise ConfigError(f"'output' must be a file name, got {name!r}")
    out_dir = Path(args.output_dir) if args.output_dir else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / name


def _print_summary(rho: np.ndarray, m: int, records) -> None:
    report = consensus_report(rho, m)
    last = records[-1]
    print(f"steps executed:       {len(records)}")
    print(f"final purity:         {last.purity:.6g}")
    print(f"final s_expectation:  {last.s_expectation:.6g}")
    print(f"final v_total:        {last.v_total:.6g}")
    print(f"final v_smc:          {last.v_smc:.6g}")
    print(f"ssc residual:         {report.ssc_residual:.3e}")
    print(f"smc population:       {report.smc_population:.6g} "
          f"(pairwise residual {report.smc_pairwise_residual:.3e})")


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    seed = _master_seed(cfg, args.seed)
    topology = _build_topology(cfg)
    family = _build_family(cfg)
    schedule = _build_schedule(cfg, seed)
    steps = _steps(cfg)
    rho0 = _build_initial_state(cfg, topology.m, seed)
    result = run(rho0, topology, family, schedule, steps, early_stop=args.early_stop)
    out = _output_path(cfg, args, f"{family.kind}_trajectory.csv")
    write_trajectory_csv(result.records, topology.m, out)
    print(f"wrote {out}")
    _print_summary(result.final_state, topology.m, result.records)
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args.config)
    seed = _master_seed(cfg, args.seed)
    topology = _build_topology(cfg)
    schedule = _build_schedule(cfg, seed)
    steps = _steps(cfg)
    rho0 = _build_initial_state(cfg, topology.m, seed)
    alpha = _section(cfg, "family", required=False).get("alpha", 0.5)
    families = [
        ChannelFamily.gossip(float(alpha)),
        ChannelFamily.ssc(),
        ChannelFamily.smc(),
    ]
    stem = cfg.get("output")
    if stem is not None and (not isinstance(stem, str) or not stem):
        raise ConfigError(f"'output' must be a file name, got {stem!r}")
    finals = {}
    for family in families:
        if stem is None:
            name = f"compare_{family.kind}.csv"
        else:
            base = Path(stem)
            name = f"{base.stem}_{family.kind}{base.suffix or '.csv'}"
        result = run(rho0, topology, family, schedule, steps, early_stop=args.early_stop)
        out = _output_path({}, args, name)
        write_trajectory_csv(result.records, topology.m, out)
        finals[family.kind] = result
        print(f"wrote {out}")
    print(f"initial purity: {purity(rho0):.6g}")
    print("family   final_purity  final_v_total  final_v_smc")
    for kind, result in finals.items():
        last = result.records[-1]
        print(f"{kind:<8} {last.purity:<13.6g} {last.v_total:<14.6g} {last.v_smc:.6g}")
    return 0


def cmd_prepare(args) -> int:
    cfg = _load_config(args.config)
    seed = _master_seed(cfg, args.seed)
    topology = _build_topology(cfg)
    section = _section(cfg, "prepare")
    target_k = _int_value(section, "target_k", "prepare")
    if not 0 <= target_k <= topology.m:
        raise ConfigError(f"'prepare.target_k' must lie in 0..{topology.m}, got {target_k}")
    use_s = bool(section.get("use_s_measurement", False))
    steps = _int_value(section, "steps", "prepare", required=False, default=300)
    if steps < 1:
        raise ConfigError(f"'prepare.steps' must be >= 1, got {steps}")
    rho0 = _build_initial_state(cfg, topology.m, seed)
    rng = np.random.default_rng(seed)
    result = prepare_dicke(
        rho0, target_k, topology, rng, use_s_measurement=use_s, steps=steps
    )
    out = _output_path(cfg, args, f"prepare_k{target_k}.csv")
    write_trajectory_csv(result.records, topology.m, out)
    print(f"wrote {out}")
    print("measurement log:")
    for event in result.measurement_log:
        where = "network" if event.site is None else f"site {event.site}"
        print(f"  {event.kind:<6} {where:<8} -> {event.value:+d}")
    print(f"final fidelity with target Dicke state (k={target_k}): {result.fidelity:.12g}")
    return 0


def cmd_convergence(args) -> int:
    cfg = _load_config(args.config)
    seed = _master_seed(cfg, args.seed)
    topology = _build_topology(cfg)
    family = _build_family(cfg)
    section = _section(cfg, "convergence")
    gamma = section.get("gamma")
    if not isinstance(gamma, (int, float)) or isinstance(gamma, bool) or gamma <= 0:
        raise ConfigError(f"'convergence.gamma' must be a positive number, got {gamma!r}")
    horizon = _int_value(section, "horizon", "convergence")
    trials = _int_value(section, "trials", "convergence")
    if horizon < 0:
        raise ConfigError(f"'convergence.horizon' must be >= 0, got {horizon}")
    if trials < 1:
        raise ConfigError(f"'convergence.trials' must be >= 1, got {trials}")
    rho0 = _build_initial_state(cfg, topology.m, seed)
    estimate = convergence_probability(rho0, topology, family, float(gamma), horizon, trials, seed)
    print(f"P[lyapunov gap < {gamma:g} at horizon {horizon}] ~= {estimate:.4f} "
          f"({trials} trials, family {family.kind})")
    return 0


def _verify_checks(family: ChannelFamily, m: int, seed: int):
    """Yield (name, passed, detail) rows for the verify table."""
    topology = NetworkTopology(m=m, neighborhoods=tuple(combinations(range(1, m + 1), 2)))
    channels = build_channels(family, topology)
    rng = np.random.default_rng(seed)
    s = global_observable(m)

    resid = max(check_cptp(ch).completeness_residual for ch in channels)
    yield (f"cptp completeness ({len(channels)} channels)", resid <= 1e-10, f"max residual {resid:.2e}")

    if family.kind == "gossip":
        unital = all(check_cptp(ch).is_unital for ch in channels)
        yield ("unitality", unital, "all channels unital" if unital else "non-unital channel found")
    else:
        dual_unital = max(
            float(np.max(np.abs(dual_apply(ch, np.eye(ch.dim)) - np.eye(ch.dim))))
            for ch in channels
        )
        yield ("dual unitality (identity fixed)", dual_unital <= 1e-10, f"max residual {dual_unital:.2e}")

    dual_resid = 0.0
    for _ in range(VERIFY_STATES):
        ch = channels[rng.integers(len(channels))]
        x = rng.standard_normal((ch.dim, ch.dim)) + 1j * rng.standard_normal((ch.dim, ch.dim))
        x = x + x.conj().T
        rho = random_density(int(rng.integers(2**31)), ch.dim)
        lhs = expectation(apply_channel(ch, rho), x)
        rhs = expectation(rho, dual_apply(ch, x), hermiticity_atol=1e-8)
        dual_resid = max(dual_resid, abs(lhs - rhs))
    yield (f"duality residual ({VERIFY_STATES} random X,rho)", dual_resid <= 1e-10, f"max {dual_resid:.2e}")

    conserve = 0.0
    monotone_violation = 0.0
    purity_violation = 0.0
    pop_drift = 0.0
    for i in range(VERIFY_STATES):
        ch = channels[i % len(channels)]
        rho = random_density(seed + 1000 + i, 1 << m)
        out = apply_channel(ch, rho)
        conserve = max(conserve, abs(expectation(out, s) - expectation(rho, s)))
        if family.kind == "gossip":
            purity_violation = max(purity_violation, purity(out) - purity(rho))
            for k in range(m + 1):
                d = dicke_ket(m, k)
                pop_drift = max(pop_drift, abs(
                    float(np.real(d.conj() @ out @ d)) - float(np.real(d.conj() @ rho @ d))
                ))
        elif family.kind == "ssc":
            monotone_violation = max(monotone_violation, v_total(out, m) - v_total(rho, m))
        else:
            monotone_violation = max(monotone_violation, v_smc(out, m) - v_smc(rho, m))
    yield (f"s-expectation conservation ({VERIFY_STATES} states)", conserve <= 1e-9, f"max drift {conserve:.2e}")
    if family.kind == "gossip":
        yield ("purity non-increasing", purity_violation <= 1e-12, f"max increase {purity_violation:.2e}")
        yield ("dicke populations invariant", pop_drift <= 1e-10, f"max drift {pop_drift:.2e}")
    elif family.kind == "ssc":
        yield ("v_total non-increasing", monotone_violation <= 1e-12, f"max increase {monotone_violation:.2e}")
    else:
        yield ("v_smc non-increasing", monotone_violation <= 1e-12, f"max increase {monotone_violation:.2e}")


def cmd_verify(args) -> int:
    if args.m < 2 or args.m > 6:
        raise ConfigError(f"verify supports 2 <= m <= 6, got {args.m}")
    try:
        family = (
            ChannelFamily.gossip(args.alpha) if args.family == "gossip" else ChannelFamily(args.family)
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"verify: family={family.kind} m={args.m} (complete graph)")
    failed = False
    for name, ok, detail in _verify_checks(family, args.m, args.seed or 0):
        status = "PASS" if ok else "FAIL"
        print(f"{name:<45} {status}  ({detail})")
        failed = failed or not ok
    print(f"overall: {'FAIL' if failed else 'PASS'}")
    return 2 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qconsensus",
        description="Symmetrizing consensus dynamics on qubit networks.",
    )
    parser.add_argument("--print-schema", action="store_true", help="print the config file schema and exit")
    sub = parser.add_subparsers(dest="command")

    def add_config_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the YAML experiment config")
        p.add_argument("--seed", type=int, default=None, help="override the config master seed")
        p.add_argument("--output-dir", default=None, help="directory for output files")
        p.add_argument("--early-stop", action="store_true", help="stop once the Lyapunov gap stays tiny")
        p.set_defaults(func=func)
        return p

    add_config_command("run", cmd_run, "run one trajectory and write its CSV")
    add_config_command("compare", cmd_compare, "run gossip, ssc, and smc from the same start")
    add_config_command("prepare", cmd_prepare, "measurement-assisted Dicke state preparation")
    add_config_command("convergence", cmd_convergence, "Monte-Carlo convergence probability")

    v = sub.add_parser("verify", help="self-test one channel family on a complete graph")
    v.add_argument("--family", required=True, choices=["gossip", "ssc", "smc"])
    v.add_argument("--m", required=True, type=int, help="number of qubits (2..6)")
    v.add_argument("--alpha", type=float, default=0.5, help="gossip mixing weight")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map onto the documented code 1
        # (2 is reserved for numeric invariant violations).
        return 0 if exc.code == 0 else 1
    if args.print_schema:
        print(CONFIG_SCHEMA, end="")
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numeric invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
