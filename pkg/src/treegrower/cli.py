"""Command-line interface: ``treegrower {generate,predict,analyze,walk,scaling}``.

Exit codes: 0 ok, 2 configuration error, 3 vertex budget exceeded,
4 measured exact metric disagrees with its closed form, 5 truncated walks.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from .exceptions import CapacityExceeded, TreeError
from .growth import GrowthModel, Operator, grow
from .metrics import analyze, exact_hitting_time, mean_hitting_exact
from .tables import PREDICT_COLUMNS, format_decimal, format_rational, predict_rows, scaling_sweep
from .tree import SeedSpec, load_tree, serialize
from .walks import DEFAULT_STEP_CAP, estimate_hitting, estimate_mean_hitting

log = logging.getLogger("treegrower")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_SELF_CHECK = 4
EXIT_TRUNCATED = 5


class ConfigError(Exception):
    pass


def _model_args(p: argparse.ArgumentParser, steps_required: bool = False) -> None:
    p.add_argument("--model", type=Operator.parse, default=Operator.PHI, help="phi or phi-star (default phi)")
    p.add_argument("--steps", type=int, default=None if steps_required else 0, help="growth steps t")
    p.add_argument("--seed", type=SeedSpec.parse, default=SeedSpec(), help="edge | path:M | star:M | file:PATH")


def _tree_source_args(p: argparse.ArgumentParser) -> None:
    _model_args(p)
    p.add_argument("--input", help="analyse an existing tree file instead of growing one")


def _output_args(p: argparse.ArgumentParser, formats, default) -> None:
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treegrower",
        description="Grow deterministic scale-free trees and check their closed-form structure.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="grow a tree and write it out")
    _model_args(p)
    _output_args(p, ["edgelist", "dot", "json"], "edgelist")

    p = sub.add_parser("predict", help="closed-form table for t = 0..steps (no graph is built)")
    _model_args(p)
    _output_args(p, ["csv", "json"], "csv")

    p = sub.add_parser("analyze", help="measure a tree and compare with closed forms")
    _tree_source_args(p)
    p.add_argument("--fit-kmin", type=int)
    p.add_argument("--fit-kmax", type=int)
    p.add_argument("--no-fit", action="store_true", help="skip the power-law fit")
    _output_args(p, ["json"], "json")

    p = sub.add_parser("walk", help="Monte Carlo hitting times")
    _tree_source_args(p)
    p.add_argument("--pairs", type=int, default=100_000, help="ordered pairs sampled (mean mode)")
    p.add_argument("--walks", type=int, default=1, help="walks per pair, or total walks with --source/--target")
    p.add_argument("--source", type=int)
    p.add_argument("--target", type=int)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
    _output_args(p, ["json"], "json")

    p = sub.add_parser("scaling", help="sweep t and report closed-form vs measured growth")
    p.add_argument("--model", type=Operator.parse, default=Operator.PHI)
    p.add_argument("--seed", type=SeedSpec.parse, default=SeedSpec())
    p.add_argument("--t-min", type=int, default=0)
    p.add_argument("--t-max", type=int, default=8)
    p.add_argument("--empirical-tmax", type=int, help="largest t to build and measure (default: n <= 10^6)")
    p.add_argument("--mc", action="store_true", help="add Monte Carlo mean hitting times")
    p.add_argument("--mc-tmax", type=int, default=3, help="largest t for Monte Carlo (default 3)")
    p.add_argument("--pairs", type=int, default=100_000)
    p.add_argument("--walks", type=int, default=1)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--slope-tmin", type=int)
    p.add_argument("--slope-tmax", type=int)
    _output_args(p, ["csv"], "csv")
    return parser


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_or_grow(args):
    """Return ``(tree, model)``; ``model`` is None for trees read from a file."""
    if getattr(args, "input", None):
        return load_tree(args.input), None
    model = GrowthModel(args.model, args.steps, args.seed)
    return grow(model), model


def cmd_generate(args) -> int:
    model = GrowthModel(args.model, args.steps, args.seed)
    tree = grow(model)
    data = serialize(tree, args.format)
    summary = f"n={tree.n} edges={tree.edge_count}\n"
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        sys.stdout.write(summary)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_predict(args) -> int:
    rows = predict_rows(args.model, args.seed, args.steps)
    if args.format == "json":
        doc = [
            {
                "t": r["t"],
                "n": str(r["n"]),
                "diameter": str(r["diameter"]),
                "wiener": None if r["wiener"] is None else str(r["wiener"]),
                "mean_hitting": None if r["mean_hitting"] is None else format_rational(r["mean_hitting"]),
                "mean_hitting_decimal": r["mean_hitting_decimal"] or None,
            }
            for r in rows
        ]
        _emit(args, json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(PREDICT_COLUMNS)
    for r in rows:
        writer.writerow(
            [r["t"], r["n"], r["diameter"], "" if r["wiener"] is None else r["wiener"],
             format_rational(r["mean_hitting"]), r["mean_hitting_decimal"]]
        )
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_analyze(args) -> int:
    tree, model = _load_or_grow(args)
    report = analyze(tree, model, fit=not args.no_fit, k_min=args.fit_kmin, k_max=args.fit_kmax)
    _emit(args, report.to_json())
    if not report.self_check_ok:
        log.error("closed-form self-check failed: %s", report.closed_form_deltas)
        return EXIT_SELF_CHECK
    return EXIT_OK


def cmd_walk(args) -> int:
    tree, model = _load_or_grow(args)
    if (args.source is None) != (args.target is None):
        raise ConfigError("--source and --target must be given together")
    if args.source is not None:
        est = estimate_hitting(tree, args.source, args.target, args.walks, args.rng_seed, args.workers, args.step_cap)
        exact = Fraction(exact_hitting_time(tree, args.source, args.target))
        mode = {"mode": "pair", "source": args.source, "target": args.target}
    else:
        est = estimate_mean_hitting(tree, args.pairs, args.walks, args.rng_seed, args.workers, args.step_cap)
        exact = mean_hitting_exact(tree)
        mode = {"mode": "mean", "pairs": args.pairs, "walks_per_pair": args.walks}
    doc = {
        **mode,
        "n": tree.n,
        "estimate": est.to_dict(),
        "exact": {"num": str(exact.numerator), "den": str(exact.denominator)},
        "exact_decimal": format_decimal(exact),
        "z_score": est.z_score(exact) if est.valid else None,
        "relative_error": (est.mean - float(exact)) / float(exact) if est.valid and exact else None,
    }
    if model is not None:
        doc["model"] = {"operator": model.operator.value, "steps": model.steps, "seed": str(model.seed)}
    _emit(args, json.dumps(doc, indent=2) + "\n")
    if not est.valid:
        log.error("%d walks hit the step cap; estimate is invalid", est.truncated_count)
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_scaling(args) -> int:
    window = None
    if args.slope_tmin is not None or args.slope_tmax is not None:
        window = (
            args.t_min if args.slope_tmin is None else args.slope_tmin,
            args.t_max if args.slope_tmax is None else args.slope_tmax,
        )
    result = scaling_sweep(
        args.model,
        args.seed,
        args.t_min,
        args.t_max,
        empirical_tmax=args.empirical_tmax,
        mc_tmax=args.mc_tmax if args.mc else None,
        pairs=args.pairs,
        walks=args.walks,
        rng_seed=args.rng_seed,
        workers=args.workers,
        slope_window=window,
    )
    _emit(args, result.to_csv())
    if result.mismatches:
        log.error("closed-form self-check failed: %s", "; ".join(result.mismatches))
        return EXIT_SELF_CHECK
    if result.truncated:
        log.error("%d walks hit the step cap", result.truncated)
        return EXIT_TRUNCATED
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "predict": cmd_predict,
    "analyze": cmd_analyze,
    "walk": cmd_walk,
    "scaling": cmd_scaling,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "steps", 0) is None or getattr(args, "steps", 0) < 0:
        parser.error("--steps must be a nonnegative integer")
    try:
        return COMMANDS[args.command](args)
    except CapacityExceeded as exc:
        log.error("%s", exc)
        return EXIT_CAPACITY
    except (ConfigError, TreeError, FileNotFoundError, IndexError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
