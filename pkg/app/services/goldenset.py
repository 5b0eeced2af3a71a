# app/services/goldenset.py
# -------------------------------------------------------------------
# Purpose:
#   Golden bracket values and a seeded property spot-check, run by
#   `verify-goldenset`. Each golden value is checked through every
#   available route: direct smoothings, the forget-direction map, and
#   the geometric engine when the surface ships a holonomy.
# -------------------------------------------------------------------

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.errors import BracketError
from app.models.brackets import Term
from app.models.reports import ScanReport, Violation
from app.services import hyperbolic_engine as geo
from app.services.bracket_algebra import (
    LinComb,
    bracket,
    goldman_bracket,
    jacobi_sum,
    single,
    twg_bracket,
    twg_from_goldman,
)
from app.services.surface_words import (
    DirectedClass,
    SurfacePresentation,
    UndirectedClass,
    random_word,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoldenBracket:
    """
    Fields:
    - surface:   surface key
    - x, y:      the pair, as typed
    - terms:     (coefficient, word) pairs of the expected bracket
    - directed:  Goldman bracket of directed classes when True
    - note:      provenance remark carried into the report
    """
    surface: str
    x: str
    y: str
    terms: Tuple[Tuple[int, str], ...]
    directed: bool = False
    note: str = ""

    def expected(self, n: int) -> LinComb:
        cls = DirectedClass if self.directed else UndirectedClass
        return LinComb.accumulate(((c, cls.parse(w, n)) for c, w in self.terms), directed=self.directed)


GOLDEN: Tuple[GoldenBracket, ...] = (
    GoldenBracket("pants", "aab", "aB", ((1, "baaBa"), (-1, "Baaba"))),
    # printed beside the torus example in the source text; read as pair of pants data
    GoldenBracket("pants", "aaB", "aB", ((1, "aaBAb"), (-1, "aabAB")), note="pants reading of an ambiguous example"),
    GoldenBracket(
        "torus1",
        "abAb",
        "aB",
        ((1, "aBBB"), (-1, "ABaBAb"), (-1, "AB"), (1, "aBABaB")),
        note="signs of AB and aBABaB follow the algebraic intersection number, see DESIGN.md",
    ),
    GoldenBracket("pants", "a", "b", ()),
    GoldenBracket("pants", "aaB", "aB", (), directed=True),
    GoldenBracket("pants", "aB", "bA", ((1, "aBAb"), (-1, "abAB")), directed=True),
)

PROPERTY_SURFACES = ("pants", "torus1")
PROPERTY_CASES = 20
PROPERTY_MAX_LEN = 5


def _terms(lc: LinComb) -> List[Term]:
    return [Term(**t) for t in lc.to_json()]


def _routes(g: GoldenBracket, s: SurfacePresentation, rho: Optional[geo.Holonomy]) -> Dict[str, Callable[[], LinComb]]:
    if g.directed:
        x, y = DirectedClass.parse(g.x, s.n), DirectedClass.parse(g.y, s.n)
        routes = {"goldman": lambda: goldman_bracket(x, y, s)}
        if rho is not None:
            routes["geometric_goldman"] = lambda: geo.geometric_goldman(rho, x, y)
        return routes
    x, y = UndirectedClass.parse(g.x, s.n), UndirectedClass.parse(g.y, s.n)
    routes = {
        "twg": lambda: twg_bracket(x, y, s),
        "twg_from_goldman": lambda: twg_from_goldman(x, y, s),
    }
    if rho is not None:
        routes["geometric_twg"] = lambda: geo.geometric_twg(rho, x, y)
    return routes


def check_golden(
    g: GoldenBracket, s: SurfacePresentation, rho: Optional[geo.Holonomy] = None
) -> List[Violation]:
    expected = g.expected(s.n)
    found: List[Violation] = []
    for route, compute in _routes(g, s, rho).items():
        try:
            got = compute()
        except BracketError as e:
            found.append(Violation(check=f"golden_{route}", x=g.x, y=g.y, bracket=_terms(expected), detail=str(e)))
            continue
        if got != expected:
            found.append(
                Violation(check=f"golden_{route}", x=g.x, y=g.y, bracket=_terms(expected), other=_terms(got),
                          detail=f"expected {expected}, got {got}")
            )
    return found


def check_properties(s: SurfacePresentation, rng: random.Random, cases: int = PROPERTY_CASES) -> List[Violation]:
    """Antisymmetry and Jacobi on random triples of classes."""
    found: List[Violation] = []
    for _ in range(cases):
        x, y, z = (UndirectedClass.of(random_word(rng, s.n, PROPERTY_MAX_LEN)) for _ in range(3))
        xy, yx = twg_bracket(x, y, s), twg_bracket(y, x, s)
        if xy != -yx:
            found.append(Violation(check="antisymmetry", x=str(x), y=str(y), bracket=_terms(xy), other=_terms(yx)))
        jac = jacobi_sum(x, y, z, s)
        if not jac.is_zero():
            found.append(Violation(check="jacobi", x=str(x), y=f"{y} {z}", bracket=_terms(jac)))
        if bracket(single(x), single(y), s) != xy:
            found.append(Violation(check="bilinear_extension", x=str(x), y=str(y)))
    return found


def verify_goldenset(
    surfaces: Dict[str, SurfacePresentation],
    holonomies: Dict[str, geo.Holonomy],
    seed: int = 0,
    golden: Sequence[GoldenBracket] = GOLDEN,
) -> ScanReport:
    started = time.perf_counter()
    report = ScanReport(kind="goldenset", surface=",".join(sorted(surfaces)), max_len=PROPERTY_MAX_LEN,
                        fingerprint=f"seed{seed}")
    for g in golden:
        s = surfaces[g.surface]
        report.examined += 1
        report.violations.extend(check_golden(g, s, holonomies.get(g.surface)))
        if g.note:
            report.notes.append(f"{g.surface} [{g.x}, {g.y}]: {g.note}")
    rng = random.Random(seed)
    for name in PROPERTY_SURFACES:
        if name in surfaces:
            report.examined += PROPERTY_CASES
            report.violations.extend(check_properties(surfaces[name], rng))
    report.wall_time = round(time.perf_counter() - started, 3)
    logger.info(f"golden set: {report.examined} checks, {len(report.violations)} violations")
    return report
