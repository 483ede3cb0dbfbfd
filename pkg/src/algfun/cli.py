"""Command-line front end: singular, expand, radius, accuracy and genus reports."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import reports
from .accuracy import ModelError, by_radius_rows, order_for_accuracy, profile_rows, sample_rows
from .analysis import analyze_genus, analyze_radius, expand_center, fit_class_model, prepare
from .config import METHODS, ConfigError, RunConfig, from_env
from .convergence import AmbiguousMatch, ContinuationError, UnresolvedError
from .fixtures import FIXTURES
from .geometry import CycleError, format_cycles
from .numerics import short, working_precision
from .polynomial import ParseError, PrecisionFloorError, parse_poly
from .puiseux import ChecksumError, derivative_limit, series_order, to_lines
from .singular import singular_list, to_rows
from .singular import to_csv as singular_csv, to_json as singular_json

log = logging.getLogger("algfun")

EXIT_OK, EXIT_PARSE, EXIT_FLOOR, EXIT_CHECKSUM, EXIT_UNRESOLVED = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_PARSE)


def _common(p: argparse.ArgumentParser, center: bool = False) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("poly", nargs="?", help="polynomial text, e.g. 'w^2 - z'")
    src.add_argument("-f", "--file", type=Path, help="file holding the polynomial text")
    src.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in reference function")
    if center:
        p.add_argument("-c", "--center", default=None,
                       help="singular index (1-based), 'origin' or 'infinity' (default: fixture center or origin)")
    p.add_argument("-p", "--precision", type=int, help="working precision in digits")
    p.add_argument("--floor", type=int, dest="precision_floor", help="precision floor in digits")
    p.add_argument("--guard", type=int, dest="guard_digits", help="guard digits above the working precision")
    p.add_argument("--terms", type=int, dest="base_terms", help="terms per base-expansion generator")
    p.add_argument("--comparison-terms", type=int, help="terms per comparison expansion")
    p.add_argument("--nzm", type=int, help="consecutive zero increments that end an iteration")
    p.add_argument("--perimeter-factor", type=Fraction, help="singular perimeter factor")
    p.add_argument("--separation-factor", type=Fraction, help="separation factor for root matching")
    p.add_argument("--margin", type=int, dest="comparison_margin", help="comparison-sequence margin")
    p.add_argument("--method", choices=METHODS, help="CLSP method")
    p.add_argument("--seed", type=int, help="random seed for accuracy sampling")
    p.add_argument("--threads", type=int, help="worker processes (default: available cores)")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table", help="report format")
    p.add_argument("-o", "--output", type=Path, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="algfun", description="Multiprecision analysis of algebraic functions f(z, w) = 0.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("singular", help="finite singular points")
    _common(p)
    p = sub.add_parser("expand", help="Puiseux expansions about a center")
    _common(p, center=True)
    p.add_argument("--series", action="store_true", help="also dump every generator series")
    p = sub.add_parser("radius", help="radius of convergence and CLSP of every class")
    _common(p, center=True)
    p.add_argument("--accuracy", action="store_true", help="fill the accuracy-model columns")
    p = sub.add_parser("accuracy", help="fit accuracy models and write plot data")
    _common(p, center=True)
    p.add_argument("--r-f", type=Fraction, default=Fraction(1, 3), help="radius fraction for the order query")
    p.add_argument("--digits", type=float, default=20.0, help="target digits for the order query")
    p.add_argument("--plot-dir", type=Path, help="directory for CSV plot data")
    p = sub.add_parser("genus", help="ramification profile and genus")
    _common(p)
    sub.add_parser("fixtures", help="list built-in reference functions")
    return ap


def _config(args) -> RunConfig:
    cfg = from_env()
    names = ("precision_floor", "guard_digits", "base_terms", "comparison_terms", "nzm", "perimeter_factor",
             "separation_factor", "comparison_margin", "method", "seed", "threads")
    values = {k: getattr(args, k, None) for k in names}
    values["working_precision"] = args.precision
    return cfg.with_overrides(**values)


def _input(args):
    if args.fixture:
        fx = FIXTURES[args.fixture]
        return fx.poly(), fx.center
    text = args.file.read_text() if args.file else args.poly
    return parse_poly(text), "origin"


def _emit(args, text: str) -> None:
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        return
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def cmd_singular(args, f, cfg) -> int:
    with working_precision(cfg.internal_digits):
        sl = singular_list(f, cfg.internal_digits, cfg.perimeter_factor)
        rows = to_rows(sl)
    if args.format == "json":
        _emit(args, singular_json(sl) + "\n")
        return EXIT_OK
    if args.format == "csv":
        _emit(args, singular_csv(sl))
        return EXIT_OK
    columns = ["index", "re", "im", "modulus", "pole", "qset", "perimeter"]
    _emit(args, reports.render(rows, "table", columns, title=f"{len(sl)} finite singular points"))
    return EXIT_OK


def cmd_expand(args, f, cfg, center) -> int:
    problem = prepare(f, center, cfg)
    ex = expand_center(problem, cfg)
    rows = []
    with working_precision(problem.digits):
        for k, c in enumerate(ex.classes, start=1):
            lim = derivative_limit(c.generator) if c.cycle == 1 else None
            rows.append({"Class": k, "Type": str(c.branch_type), "Cycle": c.cycle,
                         "Generator": c.generator.index, "Terms": len(c.generator),
                         "Order": c.order_reached, "Finite": c.finite,
                         "Digits": c.generator.min_precision(),
                         "dw/dz": short(lim) if lim is not None else ""})
        series = {c.generator.index: to_lines(c.generator) for c in ex.classes}
    title = f"expansion about {center}: {len(ex.classes)} classes, cycles {format_cycles(ex.cycles)}"
    if args.format == "json":
        _emit(args, reports.to_json({"center": str(center), "classes": rows,
                                     "series": series if args.series else None}) + "\n")
        return EXIT_OK
    text = reports.render(rows, args.format, title=title)
    if args.series and args.format == "table":
        for idx, lines in series.items():
            text += f"\ngenerator {idx} (exponent, re, im, log10 radius)\n" + "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_radius(args, f, cfg, center) -> int:
    report = analyze_radius(f, center, cfg, with_accuracy=args.accuracy)
    rows = report.rows()
    title = f"radius report about {center}"
    if report.methods_agree is not None:
        title += f"; comparison and integration agree: {report.methods_agree}"
    _emit(args, reports.render(rows, args.format, title=title))
    if report.methods_agree is False:
        log.error("comparison and integration disagree on the CLSP")
        return EXIT_UNRESOLVED
    return EXIT_OK


def cmd_accuracy(args, f, cfg, center) -> int:
    report = analyze_radius(f, center, cfg)
    rows = []
    all_samples = {}
    for r in report.results:
        if not math.isfinite(r.radius):
            continue
        try:
            model, samples = fit_class_model(report.problem, report.expansion, r, cfg)
        except ModelError as exc:
            log.warning("class %d: %s", r.class_index, exc)
            continue
        report.models[r.class_index] = model
        all_samples[r.class_index] = samples
        try:
            order = order_for_accuracy(model, float(args.r_f), args.digits)
        except ModelError:
            order = None
        gen = report.expansion.classes[r.class_index - 1].generator
        rows.append({"Class": r.class_index, "Type": r.branch_type, "R": r.radius, "a": model.a, "b": model.b,
                     "c": model.c, "d": model.d, "Var": model.variance, "Samples": model.samples,
                     "MaxOrder": series_order(gen, len(gen)), "Order": order})
    _emit(args, reports.render(rows, args.format,
                               title=f"accuracy models; Order reaches {args.digits:g} digits at r_f={args.r_f}"))
    if args.plot_dir:
        args.plot_dir.mkdir(parents=True, exist_ok=True)
        for k, samples in all_samples.items():
            _write_csv(args.plot_dir / f"class{k}_samples.csv", sample_rows(samples))
            _write_csv(args.plot_dir / f"class{k}_by_radius.csv", by_radius_rows(samples))
        for k, c in enumerate(report.expansion.classes, start=1):
            _write_csv(args.plot_dir / f"class{k}_precision.csv", profile_rows(c.generator))
    return EXIT_OK


def cmd_genus(args, f, cfg) -> int:
    profile, g = analyze_genus(f, cfg)
    rows = [{"points": len(keys), "cycles": format_cycles(sizes), "first": ",".join(map(str, keys[:6])),
             "K": sum(c - 1 for c in sizes) * len(keys)} for keys, sizes in profile.grouped()]
    if args.format == "json":
        _emit(args, reports.to_json({"K": g.K, "D": g.D, "G": g.G, "points": profile.rows()}) + "\n")
    else:
        _emit(args, reports.render(rows, args.format, title=f"K={g.K} D={g.D} G={g.G}"))
    return EXIT_OK


def cmd_fixtures() -> int:
    rows = [{"name": fx.name, "center": fx.center, "degree": fx.poly().w_degree,
             "singular": fx.singular_count, "gated": fx.gated} for fx in FIXTURES.values()]
    sys.stdout.write(reports.table(rows))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    if args.command == "fixtures":
        return cmd_fixtures()
    try:
        cfg = _config(args)
        f, default_center = _input(args)
        if args.command == "singular":
            return cmd_singular(args, f, cfg)
        if args.command == "genus":
            return cmd_genus(args, f, cfg)
        center = args.center or default_center
        handler = {"expand": cmd_expand, "radius": cmd_radius, "accuracy": cmd_accuracy}[args.command]
        return handler(args, f, cfg, center)
    except (UnresolvedError, AmbiguousMatch, ContinuationError) as exc:
        log.error("convergence unresolved: %s", exc)
        return EXIT_UNRESOLVED
    except PrecisionFloorError as exc:
        log.error("precision floor reached: %s (raise --guard or lower --floor)", exc)
        return EXIT_FLOOR
    except (ChecksumError, CycleError) as exc:
        log.error("cycle checksum failed: %s", exc)
        if isinstance(exc, CycleError) and exc.suspects:
            log.error("suspect points: %s", ", ".join(map(str, exc.suspects)))
        return EXIT_CHECKSUM
    except (ParseError, ConfigError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_PARSE

if __name__ == "__main__":
    sys.exit(main())
