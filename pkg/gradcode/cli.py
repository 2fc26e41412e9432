"""
gradcode command line.

Subcommands print JSON or CSV on stdout; logs go to stderr. Library errors
map to exit codes: 2 construction/parameter/design, 3 oracle size,
4 configuration, 1 anything else.
"""
import argparse
import json
import logging
import sys
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

try:
    from gradcode.config import configure_logging, get_output_dir, get_seed
except ImportError:
    # Support running directly
    ROOT = Path(__file__).resolve().parents[1]
    if str(ROOT) not in sys.path:
        sys.path.insert(0, str(ROOT))
    from gradcode.config import configure_logging, get_output_dir, get_seed  # type: ignore

from gradcode.constructions import (
    IntermediateParams,
    build_balanced,
    build_cgc_full,
    build_combinatorial,
    build_cyclic1,
    build_cyclic2,
    build_frc,
    build_from_tdesign,
    build_intermediate,
    build_uncoded_forget_s,
    default_gammas,
    delta_star,
    intermediate_loads,
    load_design,
)
from gradcode.core import GcScheme, load_report, render_table, scheme_from_json, scheme_to_json
from gradcode.decoding import certificate_to_dict, decode, verify_certificate
from gradcode.delay_models import (
    DelayModel,
    expected_iteration_delay,
    load_delay_model,
    monte_carlo_iteration_delay,
    scheme1_vs_scheme2,
)
from gradcode.errors import ConfigError, DecodingError, GradCodeError, ParameterError
from gradcode.feasibility import (
    impossibility_predicates,
    lower_bound,
    oracle_feasible,
    scheme_bound_report,
)
from gradcode.sgd_sim import (
    DatasetSpec,
    SimConfig,
    StragglerPattern,
    run_comparison,
    run_sim,
    write_bundle,
    write_trace_csv,
)
from gradcode.utils import RationalUtils

logger = logging.getLogger(__name__)

FAMILIES = [
    "cyclic1", "cyclic2", "combinatorial", "balanced", "tdesign",
    "intermediate", "uncoded", "frc", "cgc",
]

FAMILY_ALIASES = {"forget-s": "uncoded", "fastest-k": "uncoded"}

DEFAULT_DELAY_MODEL = {
    "family": "pareto",
    "lambda": 0.001,
    "rho": 1.1,
    "scaling": {"type": "data", "delta": 5e-7},
}


# ============================================================================
# Helpers
# ============================================================================

def _emit(payload: Any) -> None:
    print(json.dumps(payload, indent=2))


def _int_list(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise ParameterError(f"expected a comma separated list of integers, got {text!r}") from exc


def build_scheme(
    family: str,
    n: Optional[int] = None,
    alpha: Optional[str] = None,
    s: Optional[int] = None,
    y: Optional[int] = None,
    delta: Optional[int] = None,
    gammas: Optional[Sequence[int]] = None,
    design: Optional[str] = None,
    d: Optional[int] = None,
) -> GcScheme:
    """Dispatch to the builder for a family name."""
    family = FAMILY_ALIASES.get(family, family)
    if family == "tdesign":
        return build_from_tdesign(load_design(design or "hadamard-3-8-4-1"))
    if n is None or s is None:
        raise ParameterError(f"{family} needs --n and --s")
    if family == "uncoded":
        return build_uncoded_forget_s(n, s)
    if family == "frc":
        return build_frc(n, s, d)
    if family == "cgc":
        return build_cgc_full(n, s)
    if alpha is None:
        raise ParameterError(f"{family} needs --alpha")
    alpha = RationalUtils.parse(alpha)
    if family == "cyclic1":
        return build_cyclic1(n, alpha, s)
    if family == "cyclic2":
        return build_cyclic2(n, alpha, s)
    if family in ("combinatorial", "balanced", "intermediate") and y is None:
        raise ParameterError(f"{family} needs --y")
    if family == "combinatorial":
        return build_combinatorial(n, alpha, s, y)
    if family == "balanced":
        return build_balanced(n, alpha, s, y)
    if family == "intermediate":
        if delta is None:
            delta = delta_star(n, s, alpha, y)
            if delta is None:
                raise ParameterError(f"no delta in [{y}, {s}] makes the intermediate scheme feasible")
        ip = IntermediateParams(y=y, delta=delta, gammas=tuple(gammas) if gammas else default_gammas(delta, y))
        return build_intermediate(n, alpha, s, ip)
    raise ParameterError(f"unknown family {family!r}")


def parse_scheme_token(token: str, n: int, s: int, alpha: Optional[str]) -> GcScheme:
    """
    Build a scheme from a compact token such as "cyclic1:.82", "frc:d=4" or
    "intermediate:4/5:y=2:delta=6".
    """
    family, *parts = token.strip().split(":")
    options: Dict[str, str] = {}
    token_alpha = alpha
    for part in parts:
        if "=" in part:
            key, value = part.split("=", 1)
            options[key.strip()] = value.strip()
        elif family == "tdesign":
            options["design"] = part
        else:
            token_alpha = part
    return build_scheme(
        family,
        n=n,
        alpha=token_alpha,
        s=int(options["s"]) if "s" in options else s,
        y=int(options["y"]) if "y" in options else None,
        delta=int(options["delta"]) if "delta" in options else None,
        gammas=_int_list(options.get("gammas", "").replace("/", ",")) or None,
        design=options.get("design"),
        d=int(options["d"]) if "d" in options else None,
    )


def _add_scheme_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scheme", default=None, help="Scheme JSON file (otherwise built from the flags below)")
    parser.add_argument("--family", choices=FAMILIES + list(FAMILY_ALIASES), default=None, help="Scheme family")
    parser.add_argument("--n", type=int, default=None, help="Number of workers")
    parser.add_argument("--alpha", default=None, help="Recovery fraction as p/q")
    parser.add_argument("--s", type=int, default=None, help="Number of stragglers tolerated")
    parser.add_argument("--y", type=int, default=None, help="Replication / list length (combinatorial, balanced, intermediate)")
    parser.add_argument("--delta", type=int, default=None, help="Total gap (intermediate; default delta*)")
    parser.add_argument("--gammas", default=None, help="Comma separated gaps (intermediate)")
    parser.add_argument("--design", default=None, help="Design file or built-in name (tdesign)")
    parser.add_argument("--d", type=int, default=None, help="Replica groups (frc; default from n and s)")


def _scheme_from_args(args: argparse.Namespace) -> GcScheme:
    if args.scheme:
        return scheme_from_json(Path(args.scheme).read_text())
    if not args.family:
        raise ParameterError("give --scheme FILE or --family with its parameters")
    return build_scheme(
        args.family,
        n=args.n,
        alpha=args.alpha,
        s=args.s,
        y=args.y,
        delta=args.delta,
        gammas=_int_list(args.gammas) or None,
        design=args.design,
        d=args.d,
    )


def _add_delay_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delay-family", choices=["pareto", "sexp"], default=None, help="Delay distribution")
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="Pareto minimum time")
    parser.add_argument("--rho", type=float, default=None, help="Pareto tail index")
    parser.add_argument("--gamma", type=float, default=None, help="Shifted-exponential minimum time")
    parser.add_argument("--w", type=float, default=None, help="Shifted-exponential scale")
    parser.add_argument("--scaling", choices=["data", "server", "server-shifted"], default=None, help="Scaling law")
    parser.add_argument("--delta-per-point", dest="delta_point", type=float, default=None, help="Deterministic time per gradient (data) or additive constant (server-shifted)")


def _delay_model_from_args(args: argparse.Namespace, base: Optional[dict] = None) -> DelayModel:
    payload = json.loads(json.dumps(base or DEFAULT_DELAY_MODEL))
    if args.delay_family and args.delay_family != payload.get("family"):
        payload = {"family": args.delay_family, "scaling": payload.get("scaling", {})}
    for key, value in (("lambda", args.lam), ("rho", args.rho), ("gamma", args.gamma), ("w", args.w)):
        if value is not None:
            payload[key] = value
    scaling = dict(payload.get("scaling", {}))
    if args.scaling:
        scaling["type"] = args.scaling
    if args.delta_point is not None:
        scaling["delta"] = args.delta_point
    payload["scaling"] = scaling
    return load_delay_model(payload)


def _add_sim_args(parser: argparse.ArgumentParser) -> None:
    _add_delay_args(parser)
    parser.add_argument("--config", default=None, help="JSON config file; flags override its values")
    parser.add_argument("--iterations", type=int, default=None, help="Iterations (default 300)")
    parser.add_argument("--block", type=int, default=None, help="Iterations per delay redraw (default 300)")
    parser.add_argument("--step", type=float, default=None, help="Step size (default 1/L)")
    parser.add_argument("--task", choices=["logistic", "least_squares"], default=None, help="Synthetic task")
    parser.add_argument("--points", type=int, default=None, help="Training points (multiple of k)")
    parser.add_argument("--dim", type=int, default=None, help="Feature dimension")
    parser.add_argument("--pattern", choices=["random", "consecutive", "custom"], default=None, help="Straggler pattern")
    parser.add_argument("--pattern-start", type=int, default=None, help="First worker of a consecutive pattern")
    parser.add_argument("--pattern-prob", type=float, default=None, help="Probability a consecutive pattern applies")
    parser.add_argument("--stragglers", default=None, help="Comma separated workers for a custom pattern")


def _load_config(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"could not read config {path}: {exc}") from exc


def _sim_settings(args: argparse.Namespace) -> Dict[str, Any]:
    config = _load_config(args.config)
    dataset = dict(config.get("dataset", {}))
    if args.task:
        dataset["task"] = args.task
    if args.points:
        dataset["n_points"] = args.points
    if args.dim:
        dataset["dim"] = args.dim
    pattern = dict(config.get("pattern", {}))
    if args.pattern:
        pattern["kind"] = args.pattern
    if args.pattern_start is not None:
        pattern["start"] = args.pattern_start
    if args.pattern_prob is not None:
        pattern["probability"] = args.pattern_prob
    if args.stragglers:
        pattern["kind"] = pattern.get("kind", "custom")
        pattern["workers"] = _int_list(args.stragglers)
    try:
        return {
            "model": _delay_model_from_args(args, config.get("model")),
            "dataset": DatasetSpec(**dataset),
            "pattern": StragglerPattern(**pattern),
            "iterations": args.iterations or config.get("iterations", 300),
            "persistence_block": args.block or config.get("persistence_block", 300),
            "step_size": args.step if args.step is not None else config.get("step_size"),
            "seed": get_seed(args.seed if args.seed is not None else config.get("seed")),
        }
    except ValueError as exc:
        raise ConfigError(f"invalid simulation settings: {exc}") from exc


# ============================================================================
# Commands
# ============================================================================

def cmd_construct(args: argparse.Namespace) -> int:
    scheme = _scheme_from_args(args)
    report = load_report(scheme)
    logger.info("Built %s scheme: n=%d k=%d m=%d l=%s", scheme.label, scheme.n, scheme.k, report.m, report.l)
    text = scheme_to_json(scheme)
    if args.output:
        Path(args.output).write_text(text)
        logger.info("Saved scheme to %s", args.output)
    else:
        print(text)
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    scheme = _scheme_from_args(args)
    report = load_report(scheme)
    print(render_table(scheme))
    logger.info("m=%d l=%s", report.m, RationalUtils.format(report.l))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    scheme = _scheme_from_args(args)
    verdict = oracle_feasible(
        scheme,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    payload = verdict.to_dict()
    if args.certificates:
        unsound, fallbacks = [], []
        for stragglers in combinations(range(scheme.n), scheme.params.s):
            try:
                cert = decode(scheme, stragglers)
                problems = verify_certificate(scheme, stragglers, cert)
                if cert.fallback:
                    fallbacks.append([i + 1 for i in stragglers])
            except DecodingError as exc:
                problems = [str(exc)]
            if problems:
                unsound.append({"stragglers": [i + 1 for i in stragglers], "problems": problems})
        payload["decoder_failures"] = unsound
        payload["decoder_fallbacks"] = fallbacks
    _emit(payload)
    return 0 if verdict.feasible else 2


def cmd_decode(args: argparse.Namespace) -> int:
    scheme = _scheme_from_args(args)
    stragglers = [w - 1 for w in _int_list(args.stragglers_list)]
    certificate = decode(scheme, stragglers)
    payload = certificate_to_dict(certificate)
    payload["problems"] = verify_certificate(scheme, stragglers, certificate, check_required=False)
    _emit(payload)
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    if args.scheme or args.family:
        report = scheme_bound_report(_scheme_from_args(args))
    else:
        if None in (args.n, args.s, args.alpha):
            raise ParameterError("bound needs --n, --s and --alpha (or a scheme)")
        report = lower_bound(args.n, args.k or args.n, args.s, args.alpha)
    _emit(report.to_dict())
    return 0


def cmd_impossibility(args: argparse.Namespace) -> int:
    verdict = impossibility_predicates(args.n, args.alpha, args.s, args.m, args.l, cyclic=args.cyclic)
    _emit(verdict.model_dump())
    return 0


def cmd_sweep_delta(args: argparse.Namespace) -> int:
    rows = []
    for y in range(1, args.ymax + 1):
        best = delta_star(args.n, args.s, args.alpha, y)
        row: Dict[str, Any] = {"y": y, "delta_star": best, "k": None, "m": None, "l": None}
        if best is not None:
            loads = intermediate_loads(args.n, best, y)
            row.update(k=loads["k"], m=loads["m"], l=RationalUtils.format(loads["l"]))
        rows.append(row)
    print(pd.DataFrame(rows).to_csv(index=False), end="")
    return 0


def cmd_delay(args: argparse.Namespace) -> int:
    model = _delay_model_from_args(args, _load_config(args.config).get("model"))
    if args.compare:
        if args.alpha is None or args.d is None:
            raise ParameterError("--compare needs --alpha and --d")
        comparison = scheme1_vs_scheme2(model, args.n, float(RationalUtils.parse(args.alpha)), args.d)
        _emit({**comparison.model_dump(), "exact_favors": comparison.exact_favors})
        return 0
    if args.s is None:
        raise ParameterError("delay needs --s")
    payload: Dict[str, Any] = {
        "model": model.to_dict(),
        "n": args.n,
        "s": args.s,
        "points": args.points,
        "closed_form": expected_iteration_delay(model, args.n, args.s, args.points),
    }
    if args.mc:
        estimate = monte_carlo_iteration_delay(model, args.n, args.s, args.points, trials=args.mc, seed=args.seed)
        payload["monte_carlo"] = estimate
        payload["relative_error"] = abs(estimate - payload["closed_form"]) / payload["closed_form"]
    _emit(payload)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    scheme = _scheme_from_args(args)
    settings = _sim_settings(args)
    try:
        config = SimConfig(scheme=scheme, name=args.name, **settings)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    trace = run_sim(config)
    if args.output:
        write_trace_csv(trace, Path(args.output))
    else:
        print(trace.records.to_csv(index=False), end="")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    if args.n is None or args.s is None:
        raise ParameterError("compare needs --n and --s")
    tokens = [t for t in args.schemes.split(",") if t.strip()]
    schemes = [parse_scheme_token(t, args.n, args.s, args.alpha) for t in tokens]
    settings = _sim_settings(args)
    traces = run_comparison(
        schemes,
        settings["model"],
        dataset=settings["dataset"],
        seed=settings["seed"],
        iterations=settings["iterations"],
        persistence_block=settings["persistence_block"],
        pattern=settings["pattern"],
        mode=args.mode,
        step_size=settings["step_size"],
        names=[t.strip() for t in tokens],
    )
    directory = get_output_dir(args.output)
    manifest = write_bundle(
        traces,
        directory,
        extra={"mode": args.mode, "seed": settings["seed"], "model": settings["model"].to_dict()},
    )
    print(manifest)
    return 0


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradcode",
        description="Gradient codes with partial recovery: build, decode, verify and simulate",
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", action="store_true", help="Warnings and errors only")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (default: GRADCODE_SEED or 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="Build a scheme and print its JSON")
    _add_scheme_args(p)
    p.add_argument("--output", default=None, help="Write JSON here instead of stdout")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("render", help="Print a scheme's assignment table")
    _add_scheme_args(p)
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser("verify", help="Check (alpha, s)-feasibility with the exact oracle")
    _add_scheme_args(p)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=10_000, help="Straggler sets in sampled mode")
    p.add_argument("--workers", type=int, default=1, help="Worker processes")
    p.add_argument("--certificates", action="store_true", help="Also check the family decoder on every straggler set")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("decode", help="Print the recovery certificate for one straggler set")
    _add_scheme_args(p)
    p.add_argument("--stragglers", dest="stragglers_list", required=True, help="Comma separated 1-based workers")
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser("bound", help="Computation-load lower bound")
    _add_scheme_args(p)
    p.add_argument("--k", type=int, default=None, help="Number of partitions (reported only)")
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser("impossibility", help="Check (n, n, m, l) against the impossibility results")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", required=True, help="Computation load as p/q")
    p.add_argument("--cyclic", action="store_true", help="Restrict to cyclic assignments")
    p.set_defaults(handler=cmd_impossibility)

    p = sub.add_parser("sweep-delta", help="Smallest feasible delta per list length y")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--ymax", type=int, default=3)
    p.set_defaults(handler=cmd_sweep_delta)

    p = sub.add_parser("delay", help="Expected iteration delay (closed form, optional Monte Carlo)")
    _add_delay_args(p)
    p.add_argument("--family", dest="delay_family", choices=["pareto", "sexp"], help=argparse.SUPPRESS)
    p.add_argument("--config", default=None, help="JSON file with a \"model\" entry")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--points", type=float, default=0.0, help="Gradients per worker")
    p.add_argument("--mc", type=int, default=0, help="Monte Carlo trials")
    p.add_argument("--compare", action="store_true", help="Compare the two scheme designs instead")
    p.add_argument("--alpha", default=None)
    p.add_argument("--d", type=int, default=None, help="Total data points (comparison)")
    p.set_defaults(handler=cmd_delay)

    p = sub.add_parser("simulate", help="Simulate gradient descent for one scheme")
    _add_scheme_args(p)
    _add_sim_args(p)
    p.add_argument("--name", default=None)
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("compare", help="Simulate several schemes with common random delays")
    p.add_argument("--mode", choices=["fixed-s", "fixed-alpha"], default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", default=None, help="Default alpha for tokens without one")
    p.add_argument("--schemes", required=True, help="Comma separated tokens, e.g. forget-s,cyclic1:.82,frc,cgc")
    _add_sim_args(p)
    p.add_argument("--output", default=None, help="Bundle directory (default GRADCODE_OUTPUT_DIR)")
    p.set_defaults(handler=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "delay" and args.s is not None and float(args.s).is_integer():
        args.s = int(args.s)
    try:
        configure_logging("DEBUG" if args.verbose else "WARNING" if args.quiet else None)
        return args.handler(args)
    except GradCodeError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        # Malformed numeric flags such as --alpha 3/0
        logger.error("Invalid parameter: %s", exc)
        return ParameterError.exit_code


if __name__ == "__main__":
    sys.exit(main())
