# app/services/scans.py
# -------------------------------------------------------------------
# Purpose:
#   Desk-scale scans over all classes up to a length bound. Each scan
#   kind is a per-item check (a pair or a single class) run over a
#   deterministic item list, optionally across worker processes, and
#   collected into a ScanReport in canonical item order.
#
#   Kinds:
#     conjecture     bracket zero => intersection number zero
#     counting       x simple => |terms| of [x, y] = 2 i(x, y)
#     center         classes with zero bracket against everything are peripheral
#     decomposition  brackets of non-peripheral classes have no peripheral terms
#     numerics       cosh identities, twist angle monotonicity, no cancellation
#     agreement      combinatorial and geometric brackets coincide
#     selfbracket    |terms| of [x, x reversed] = 2 SI(x); [x, x^m] recorded
# -------------------------------------------------------------------

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.errors import BracketError, UnsupportedError
from app.models.brackets import Term
from app.models.reports import ScanKind, ScanReport, Violation
from app.services import hyperbolic_engine as geo
from app.services.bracket_algebra import (
    LinComb,
    chas_self_bracket,
    goldman_bracket,
    power_bracket,
    twg_bracket,
)
from app.services.cyclic_order import intersection_number_comb, is_simple, self_intersection_comb
from app.services.surface_words import SurfacePresentation, UndirectedClass, format_word, is_peripheral, surface_classes
from app.utils.settings import HALO_ROUNDS, HALO_START, HALO_STEP, TOLERANCES

logger = logging.getLogger(__name__)

TWISTED_TIMES = (-1.0, 0.5, 2.0)
ANGLE_GRID = (-2.0, -1.0, 0.0, 1.0, 2.0)
POWER_EXPONENTS = (2, 3)

SCAN_NOTES = [
    "classes are undirected conjugacy classes up to inversion, deduplicated before lengths are counted",
    "lengths are cyclically reduced word lengths",
]

GEOMETRIC_KINDS = {"numerics", "agreement"}


@dataclass(frozen=True)
class ScanContext:
    """Everything a worker needs; picklable."""
    kind: str
    surface: SurfacePresentation
    max_len: int
    classes: Tuple[UndirectedClass, ...]
    rho: Optional[geo.Holonomy] = None


Item = Tuple[UndirectedClass, ...]
Outcome = Tuple[bool, List[Violation], dict]  # (applied, violations, extra)


def _terms(lc: LinComb) -> List[Term]:
    return [Term(**t) for t in lc.to_json()]


# -----------------------------
# Per-item checks
# -----------------------------
def _check_conjecture(ctx: ScanContext, item: Item) -> Outcome:
    x, y = item
    br = twg_bracket(x, y, ctx.surface)
    if not br.is_zero():
        return True, [], {}
    try:
        i = intersection_number_comb(x, y, ctx.surface)
    except UnsupportedError:
        return False, [], {}
    if i == 0:
        return True, [], {}
    return True, [
        Violation(check="zero_bracket_implies_disjoint", x=str(x), y=str(y), bracket=[], intersection=i,
                  detail=f"[{x}, {y}] = 0 but i = {i}")
    ], {}


def _check_counting(ctx: ScanContext, item: Item) -> Outcome:
    x, y = item
    i = intersection_number_comb(x, y, ctx.surface)
    br = twg_bracket(x, y, ctx.surface)
    if br.total_multiplicity() == 2 * i:
        return True, [], {}
    return True, [
        Violation(check="terms_equal_twice_intersection", x=str(x), y=str(y), bracket=_terms(br), intersection=i,
                  detail=f"{br.total_multiplicity()} terms, 2i = {2 * i}")
    ], {}


def _check_center(ctx: ScanContext, item: Item) -> Outcome:
    (c,) = item
    central = all(twg_bracket(c, y, ctx.surface).is_zero() for y in ctx.classes)
    expected = is_peripheral(c, ctx.surface)
    extra = {"central": [str(c) or "1"]} if central else {}
    if central == expected:
        return True, [], extra
    what = "central but not peripheral" if central else "peripheral but not central"
    return True, [Violation(check="center_is_peripheral", x=str(c), detail=what)], extra


def _check_decomposition(ctx: ScanContext, item: Item) -> Outcome:
    x, y = item
    s = ctx.surface
    alpha, beta = x.directed(), y.directed()
    found: List[Violation] = []
    brackets = (
        ("twg", twg_bracket(x, y, s), lambda c: c),
        ("goldman", goldman_bracket(alpha, beta, s), lambda c: c.undirected()),
        ("goldman_reversed", goldman_bracket(alpha, beta.inverse(), s), lambda c: c.undirected()),
    )
    for name, br, to_undirected in brackets:
        for c, _ in br.items():
            if is_peripheral(to_undirected(c), s):
                found.append(
                    Violation(check=f"{name}_term_not_peripheral", x=str(x), y=str(y), bracket=_terms(br),
                              detail=f"term {c or '1'} is peripheral or trivial")
                )
    return True, found, {}


def _metrics(ctx: ScanContext) -> List[geo.Holonomy]:
    rho = ctx.rho
    if rho.twist_curve:
        return [rho] + [geo.twist(rho, t) for t in TWISTED_TIMES]
    return [rho]


def _check_numerics(ctx: ScanContext, item: Item) -> Outcome:
    x, y = item
    found: List[Violation] = []
    worst = 0.0
    for rho in _metrics(ctx):
        for c in geo.crossings(rho, x.word, y.word):
            r0, rinf = geo.cosh_residuals(rho, x.word, y.word, c)
            worst = max(worst, r0, rinf)
            if max(r0, rinf) >= TOLERANCES["cosh_residual"]:
                found.append(Violation(check="cosh_identity", x=str(x), y=str(y),
                                       detail=f"{rho.name} witness {format_word(c.witness)}: residuals {r0:.3e}, {rinf:.3e}"))

    rho = ctx.rho
    if is_simple(x, ctx.surface) and not is_peripheral(x, ctx.surface):
        raw = geo.geometric_twg_raw(rho, x, y)
        before = sum(abs(v) for v, _ in raw)
        after = geo.geometric_twg(rho, x, y).total_multiplicity()
        if before != after:
            found.append(Violation(check="no_cancellation_for_simple_x", x=str(x), y=str(y),
                                   detail=f"{before} smoothing terms cancel down to {after}"))

    if rho.twist_curve and x.word == UndirectedClass.of(rho.twist_curve).word and x != y:
        for c in geo.crossings(rho, x.word, y.word):
            angles = geo.angle_along_twist(rho, x.word, y.word, c, ANGLE_GRID)
            steps = [b - a for a, b in zip(angles, angles[1:])]
            if any(d >= -TOLERANCES["angle_margin"] for d in steps):
                found.append(Violation(check="angle_decreasing_along_twist", x=str(x), y=str(y),
                                       detail=f"witness {format_word(c.witness)}: angles {[round(a, 12) for a in angles]}"))
    return True, found, {"max_residual": worst}


def _check_agreement(ctx: ScanContext, item: Item) -> Outcome:
    x, y = item
    s, rho = ctx.surface, ctx.rho
    alpha, beta = x.directed(), y.directed()
    found: List[Violation] = []
    pairs = (
        ("twg", twg_bracket(x, y, s), lambda: geo.geometric_twg(rho, x, y)),
        ("goldman", goldman_bracket(alpha, beta, s), lambda: geo.geometric_goldman(rho, alpha, beta)),
        ("goldman_reversed", goldman_bracket(alpha, beta.inverse(), s),
         lambda: geo.geometric_goldman(rho, alpha, beta.inverse())),
    )
    for name, comb, geom in pairs:
        try:
            other = geom()
        except BracketError as e:
            found.append(Violation(check=f"{name}_geometric_error", x=str(x), y=str(y), bracket=_terms(comb), detail=str(e)))
            continue
        if other != comb:
            found.append(Violation(check=f"{name}_engines_agree", x=str(x), y=str(y), bracket=_terms(comb),
                                   other=_terms(other), detail="combinatorial and geometric brackets differ"))
    return True, found, {}


def _check_selfbracket(ctx: ScanContext, item: Item) -> Outcome:
    (x,) = item
    if x.root()[1] > 1:
        return False, [], {}
    si = self_intersection_comb(x, ctx.surface)
    chas = chas_self_bracket(x.directed(), ctx.surface)
    found: List[Violation] = []
    if chas.total_multiplicity() != 2 * si:
        found.append(Violation(check="self_bracket_terms_twice_self_intersection", x=str(x), bracket=_terms(chas),
                               intersection=si, detail=f"{chas.total_multiplicity()} terms, 2 SI = {2 * si}"))
    powers = {
        str(m): power_bracket(x.directed(), m, ctx.surface).total_multiplicity() for m in POWER_EXPONENTS
    }
    return True, found, {"power_terms": {str(x): {"self_intersection": si, **powers}}}


CHECKS: Dict[str, Callable[[ScanContext, Item], Outcome]] = {
    "conjecture": _check_conjecture,
    "counting": _check_counting,
    "center": _check_center,
    "decomposition": _check_decomposition,
    "numerics": _check_numerics,
    "agreement": _check_agreement,
    "selfbracket": _check_selfbracket,
}


# -----------------------------
# Item lists
# -----------------------------
def scan_items(ctx: ScanContext) -> List[Item]:
    s = ctx.surface
    nontrivial = [c for c in ctx.classes if not c.is_trivial()]
    kind = ctx.kind
    if kind == "conjecture":
        return [(x, y) for i, x in enumerate(nontrivial) for y in nontrivial[i + 1:]]
    if kind == "counting":
        return [(x, y) for x in nontrivial if is_simple(x, s) for y in nontrivial]
    if kind == "center":
        return [(c,) for c in ctx.classes]
    if kind == "decomposition":
        core = [c for c in nontrivial if not is_peripheral(c, s)]
        return [(x, y) for i, x in enumerate(core) for y in core[i:]]
    if kind == "numerics":
        return [(x, y) for i, x in enumerate(nontrivial) for y in nontrivial[i:]]
    if kind == "agreement":
        return [(x, y) for x in nontrivial for y in nontrivial]
    if kind == "selfbracket":
        return [(x,) for x in nontrivial if not is_peripheral(x, s)]
    raise ValueError(f"unknown scan kind {kind!r}")


def _run_chunk(args: Tuple[ScanContext, Sequence[Item]]) -> List[Outcome]:
    ctx, items = args
    check = CHECKS[ctx.kind]
    out = []
    for item in items:
        logger.debug(f"{ctx.kind}: {' '.join(str(c) or '1' for c in item)}")
        out.append(check(ctx, item))
    return out


def _chunks(items: Sequence[Item], size: int) -> List[Sequence[Item]]:
    return [items[i:i + size] for i in range(0, len(items), size)]


def fingerprint(ctx: ScanContext, seed: int = 0) -> str:
    payload = {
        "kind": ctx.kind,
        "surface": ctx.surface.name,
        "ribbon": list(ctx.surface.ribbon),
        "max_len": ctx.max_len,
        "seed": seed,
        "holonomy": list(ctx.rho.generators) if ctx.rho else None,
        "halo": [HALO_START, HALO_STEP, HALO_ROUNDS],
        "tolerances": dict(TOLERANCES),
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:12]


def _merge_extra(extra: dict, part: dict) -> None:
    for k, v in part.items():
        if k == "max_residual":
            extra[k] = max(extra.get(k, 0.0), v)
        elif isinstance(v, list):
            extra.setdefault(k, []).extend(v)
        elif isinstance(v, dict):
            extra.setdefault(k, {}).update(v)
        else:
            extra[k] = v


def run_scan(
    kind: ScanKind,
    surface: SurfacePresentation,
    max_len: int,
    rho: Optional[geo.Holonomy] = None,
    jobs: int = 1,
    seed: int = 0,
) -> ScanReport:
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if kind in GEOMETRIC_KINDS and rho is None:
        raise UnsupportedError(f"scan {kind} needs a holonomy for surface {surface.name}")
    started = time.perf_counter()
    classes = tuple(surface_classes(surface, max_len, undirected=True))
    ctx = ScanContext(kind=kind, surface=surface, max_len=max_len, classes=classes, rho=rho)
    items = scan_items(ctx)
    logger.info(f"scan {kind} on {surface.name}: L={max_len}, {len(classes)} classes, {len(items)} items, jobs={jobs}")

    if jobs > 1 and len(items) > 1:
        size = max(1, len(items) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = [o for part in pool.map(_run_chunk, [(ctx, ch) for ch in _chunks(items, size)]) for o in part]
    else:
        outcomes = _run_chunk((ctx, items))

    report = ScanReport(kind=kind, surface=surface.name, max_len=max_len, notes=list(SCAN_NOTES),
                        fingerprint=fingerprint(ctx, seed))
    for applied, violations, extra in outcomes:
        report.examined += 1
        if not applied:
            report.skipped += 1
        report.violations.extend(violations)
        _merge_extra(report.extra, extra)
    if kind == "center":
        expected = [str(c) or "1" for c in classes if is_peripheral(c, surface)]
        report.extra["expected_central"] = expected
    if kind == "numerics" and rho is not None and rho.twist_curve:
        report.extra["twist_direction"] = geo.twist_direction(rho)
    report.wall_time = round(time.perf_counter() - started, 3)
    logger.info(
        f"scan {kind} on {surface.name} finished: {report.examined} examined, "
        f"{len(report.violations)} violations, {report.wall_time}s"
    )
    return report


# -----------------------------
# Output
# -----------------------------
def write_report(report: ScanReport, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{report.kind}-{report.surface}-L{report.max_len}-{report.fingerprint}.json"
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"report written to {path}")
    return path


def format_report(report: ScanReport, limit: int = 20) -> str:
    lines = [
        f"scan         {report.kind}",
        f"surface      {report.surface}",
        f"max length   {report.max_len}",
        f"examined     {report.examined}",
        f"skipped      {report.skipped}",
        f"violations   {len(report.violations)}",
        f"fingerprint  {report.fingerprint}",
    ]
    if "central" in report.extra:
        lines.append(f"central      {' '.join(report.extra['central'])}")
    if "max_residual" in report.extra:
        lines.append(f"max residual {report.extra['max_residual']:.3e}")
    for v in report.violations[:limit]:
        pair = f"{v.x} {v.y}".strip()
        lines.append(f"  {v.check:<44} {pair:<24} {v.detail}")
    if len(report.violations) > limit:
        lines.append(f"  ... {len(report.violations) - limit} more")
    lines.append("OK" if report.ok else "VIOLATIONS FOUND")
    return "\n".join(lines) + "\n"
