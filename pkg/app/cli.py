# app/cli.py
# ------------------------------------------------------------
# Command-line harness:
#
#   python -m app bracket pants aab aB --undirected
#   python -m app bracket torus1 abAb aB --engine both
#   python -m app intersect pants aab aB --engine geom --crossings
#   python -m app simple pants aab
#   python -m app enumerate torus1 --max-len 3
#   python -m app scan --kind counting --surface pants --max-len 6 --jobs 4
#   python -m app verify-goldenset --seed 7
#
# Exit codes: 0 ok, 1 violations or engine disagreement,
# 2 configuration / input / numeric-guard errors.
# ------------------------------------------------------------

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.errors import BracketError
from app.services import hyperbolic_engine as geo
from app.services.bracket_algebra import goldman_bracket, linked_pairs_tsv, twg_bracket
from app.services.cyclic_order import intersection_number_comb, is_simple, self_intersection_comb
from app.services.goldenset import GOLDEN, verify_goldenset
from app.services.scans import CHECKS, format_report, run_scan, write_report
from app.services.surface_words import DirectedClass, UndirectedClass, format_word, is_peripheral, surface_classes
from app.utils.config_loader import has_holonomy, load_holonomy, load_surface
from app.utils.settings import DEFAULT_JOBS, DEFAULT_MAX_LEN, RESULTS_DIR, configure_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2


def cmd_bracket(args: argparse.Namespace) -> int:
    s = load_surface(args.surface)
    if args.directed:
        x, y = DirectedClass.parse(args.x, s.n), DirectedClass.parse(args.y, s.n)
    else:
        x, y = UndirectedClass.parse(args.x, s.n), UndirectedClass.parse(args.y, s.n)

    if args.dump_linked:
        sys.stdout.write(linked_pairs_tsv(x, y, s))

    comb = geom = None
    if args.engine in ("comb", "both"):
        comb = goldman_bracket(x, y, s) if args.directed else twg_bracket(x, y, s)
    if args.engine in ("geom", "both"):
        rho = load_holonomy(s, args.holonomy)
        geom = geo.geometric_goldman(rho, x, y) if args.directed else geo.geometric_twg(rho, x, y)

    if args.engine != "both":
        result = comb if comb is not None else geom
        print(json.dumps(result.to_json()) if args.json else str(result))
        return EXIT_OK

    print(f"comb  {comb}")
    print(f"geom  {geom}")
    if comb == geom:
        print("ENGINES AGREE")
        return EXIT_OK
    print("ENGINES DISAGREE")
    return EXIT_VIOLATIONS


def cmd_intersect(args: argparse.Namespace) -> int:
    s = load_surface(args.surface)
    x, y = UndirectedClass.parse(args.x, s.n), UndirectedClass.parse(args.y, s.n)
    if args.engine == "geom":
        rho = load_holonomy(s, args.holonomy)
        print(geo.intersection_number_geom(rho, x, y))
        if args.crossings:
            for c in geo.crossings(rho, x.word, y.word):
                print(f"  g={format_word(c.witness) or '1'}"
                      f"\ts={c.s:.12g}\tt={c.t:.12g}\tphi={c.phi:.12g}\teps={c.eps:+d}\tweight={c.weight}")
    else:
        print(intersection_number_comb(x, y, s))
    return EXIT_OK


def cmd_simple(args: argparse.Namespace) -> int:
    s = load_surface(args.surface)
    x = UndirectedClass.parse(args.x, s.n)
    simple = is_simple(x, s)
    parts = ["simple" if simple else "not simple"]
    if is_peripheral(x, s):
        parts.append("peripheral")
    if not x.is_trivial() and x.root()[1] == 1:
        parts.append(f"self-intersection {self_intersection_comb(x, s)}")
    print(", ".join(parts))
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    s = load_surface(args.surface)
    classes = surface_classes(s, args.max_len, undirected=not args.directed)
    for c in classes:
        print(str(c) or "1")
    logger.info(f"{len(classes)} classes")
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    s = load_surface(args.surface)
    max_len = args.max_len or DEFAULT_MAX_LEN.get(s.name, 4)
    rho = None
    if args.kind in ("numerics", "agreement"):
        rho = load_holonomy(s, args.holonomy)
    report = run_scan(args.kind, s, max_len, rho=rho, jobs=args.jobs, seed=args.seed)
    path = write_report(report, Path(args.out))
    sys.stdout.write(format_report(report))
    print(f"report       {path}")
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_verify_goldenset(args: argparse.Namespace) -> int:
    names = sorted({g.surface for g in GOLDEN})
    surfaces = {name: load_surface(name) for name in names}
    holonomies = {name: load_holonomy(s) for name, s in surfaces.items() if has_holonomy(s)}
    report = verify_goldenset(surfaces, holonomies, seed=args.seed)
    if args.out:
        write_report(report, Path(args.out))
    sys.stdout.write(format_report(report))
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m app", description="Brackets of curves on surfaces.")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default: BRACKETS_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_flags(p: argparse.ArgumentParser, choices: Sequence[str]) -> None:
        p.add_argument("--engine", choices=list(choices), default="comb")
        p.add_argument("--holonomy", default=None, help="holonomy JSON file (default: the surface's shipped one)")

    p = sub.add_parser("bracket", help="bracket of two classes")
    p.add_argument("surface")
    p.add_argument("x")
    p.add_argument("y")
    direction = p.add_mutually_exclusive_group()
    direction.add_argument("--directed", action="store_true", help="Goldman bracket of directed classes")
    direction.add_argument("--undirected", action="store_true", help="bracket of undirected classes (default)")
    engine_flags(p, ("comb", "geom", "both"))
    p.add_argument("--dump-linked", action="store_true", help="print the linked position pairs as TSV first")
    p.add_argument("--json", action="store_true", help="print the terms as JSON")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("intersect", help="geometric intersection number")
    p.add_argument("surface")
    p.add_argument("x")
    p.add_argument("y")
    engine_flags(p, ("comb", "geom"))
    p.add_argument("--crossings", action="store_true", help="with --engine geom, list every crossing")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("simple", help="simplicity and self-intersection of a class")
    p.add_argument("surface")
    p.add_argument("x")
    p.set_defaults(func=cmd_simple)

    p = sub.add_parser("enumerate", help="list classes up to a length")
    p.add_argument("surface")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--directed", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("scan", help="run a scan and write its report")
    p.add_argument("--kind", required=True, choices=sorted(CHECKS))
    p.add_argument("--surface", required=True)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--holonomy", default=None)
    p.add_argument("--out", default=str(RESULTS_DIR))
    p.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-goldenset", help="check the golden brackets and random properties")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify_goldenset)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper() if args.log_level else None)
    try:
        return args.func(args)
    except (BracketError, FileNotFoundError) as e:
        print(f"[error] {e}", file=sys.stderr)
        return EXIT_ERROR
