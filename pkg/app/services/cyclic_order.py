# app/services/cyclic_order.py
# -------------------------------------------------------------------
# Purpose:
#   Exact combinatorics of the circle at infinity of a ribbon-structured
#   free group: infinite rays, their circular order, linked position pairs
#   of two cyclic words, and the resulting intersection numbers.
#
#   The universal cover of the spine is the Cayley tree; every vertex
#   carries the ribbon's cyclic order of half-edges. A half-edge is named
#   by the letter read when leaving through it.
# -------------------------------------------------------------------

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from app.errors import CoincidentRaysError, UnsupportedError
from app.services.surface_words import (
    CyclicWord,
    Letter,
    SurfacePresentation,
    UndirectedClass,
    Word,
    inverse,
    is_peripheral,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ray:
    """
    Eventually periodic infinite reduced word: prefix, then period repeated
    starting at offset `phase`.

    Fields:
    - period:     cyclically reduced repeating part
    - phase:      index of the first period letter read
    - prefix:     optional finite head read before the period
    """
    period: Word
    phase: int = 0
    prefix: Word = ()

    def letter_at(self, k: int) -> Letter:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(self.phase + k - len(self.prefix)) % len(self.period)]

    def head(self, count: int) -> Word:
        return tuple(self.letter_at(k) for k in range(count))

    def depth_bound(self) -> int:
        return len(self.prefix) + len(self.period)


class RibbonAtInfinity:
    """Ribbon cyclic order with O(1) orientation queries on half-edges."""

    def __init__(self, ribbon: Sequence[Letter]):
        self.ribbon = tuple(ribbon)
        self.size = len(self.ribbon)
        self.pos: Dict[Letter, int] = {letter: i for i, letter in enumerate(self.ribbon)}

    def orient(self, h1: Letter, h2: Letter, h3: Letter) -> int:
        """+1 when h1, h2, h3 occur in this counterclockwise order."""
        p1 = self.pos[h1]
        d2 = (self.pos[h2] - p1) % self.size
        d3 = (self.pos[h3] - p1) % self.size
        return 1 if d2 < d3 else -1


@lru_cache(maxsize=64)
def ribbon_order(ribbon: Tuple[Letter, ...]) -> RibbonAtInfinity:
    return RibbonAtInfinity(ribbon)


def ribbon_at_infinity(s: SurfacePresentation) -> RibbonAtInfinity:
    return ribbon_order(s.ribbon)


# -----------------------------
# Rays
# -----------------------------
def _common_prefix(r1: Ray, r2: Ray) -> int:
    """Length of the common prefix, or -1 when the rays are equal."""
    cap = r1.depth_bound() + r2.depth_bound()
    for k in range(cap):
        if r1.letter_at(k) != r2.letter_at(k):
            return k
    return -1


def ray_equal(r1: Ray, r2: Ray) -> bool:
    # agreement on |p1| + |p2| letters past the prefixes forces equality (Fine-Wilf)
    return _common_prefix(r1, r2) < 0


def cyclic_order3(r1: Ray, r2: Ray, r3: Ray, rib: RibbonAtInfinity) -> int:
    """
    Orientation of three distinct boundary points. The three rays leave
    their median vertex through three distinct half-edges; a ray that split
    off earlier leaves through the half-edge pointing back to the base.
    """
    l12 = _common_prefix(r1, r2)
    l13 = _common_prefix(r1, r3)
    l23 = _common_prefix(r2, r3)
    if min(l12, l13, l23) < 0:
        raise CoincidentRaysError("coincident endpoints")
    m = max(l12, l13, l23)
    rays = (r1, r2, r3)
    reach = (max(l12, l13), max(l12, l23), max(l13, l23))
    carrier = rays[reach.index(m)]
    back = -carrier.letter_at(m - 1) if m > 0 else None
    half_edges = [r.letter_at(m) if reach[i] == m else back for i, r in enumerate(rays)]
    return rib.orient(*half_edges)


def rays_at(x: CyclicWord, i: int) -> Tuple[Ray, Ray]:
    """Forward and backward rays of the lift of x through the base vertex at position i."""
    n = len(x)
    if n == 0:
        raise ValueError("rays_at needs a nontrivial cyclic word")
    forward = Ray(period=tuple(x), phase=i % n)
    backward = Ray(period=inverse(x), phase=(n - i) % n)
    return forward, backward


# -----------------------------
# Linked pairs
# -----------------------------
def linked(x: CyclicWord, i: int, y: CyclicWord, j: int, rib: RibbonAtInfinity) -> int:
    """
    0 when unlinked, otherwise the sign of the crossing (+1 for circular
    order A-, B-, A+, B+).

    A crossing of two lifts is read at one vertex only: where the lift of x
    enters the path it shares with the lift of y. Lifts that coincide
    (common power structure) never qualify.
    """
    a_plus, a_minus = rays_at(x, i)
    b_plus, b_minus = rays_at(y, j)
    first = a_minus.letter_at(0)
    if first == b_minus.letter_at(0) or first == b_plus.letter_at(0):
        return 0
    if ray_equal(a_plus, b_plus) or ray_equal(a_plus, b_minus):
        return 0
    s_minus = cyclic_order3(a_minus, b_minus, a_plus, rib)
    s_plus = cyclic_order3(a_minus, b_plus, a_plus, rib)
    if s_minus == s_plus:
        return 0
    return s_minus


def linked_pairs(x: CyclicWord, y: CyclicWord, rib: RibbonAtInfinity) -> List[Tuple[int, int, int]]:
    """All (i, j, sign) with a crossing read at positions i of x and j of y."""
    if not x or not y:
        return []
    out: List[Tuple[int, int, int]] = []
    for i in range(len(x)):
        for j in range(len(y)):
            sign = linked(x, i, y, j, rib)
            if sign:
                out.append((i, j, sign))
    return out


# -----------------------------
# Intersection numbers
# -----------------------------
def self_intersection_comb(x: UndirectedClass, s: SurfacePresentation) -> int:
    if x.is_trivial():
        return 0
    _, m = x.root()
    if m > 1:
        raise UnsupportedError(f"self intersection of the proper power {x} is not computed")
    pairs = linked_pairs(x.word, x.word, ribbon_at_infinity(s))
    # each crossing of two distinct lifts is seen once from either lift
    return len(pairs) // 2


def is_simple(x: UndirectedClass, s: SurfacePresentation) -> bool:
    if is_peripheral(x, s):
        return True
    _, m = x.root()
    if m > 1:
        return False
    return self_intersection_comb(x, s) == 0


def intersection_number_comb(x: UndirectedClass, y: UndirectedClass, s: SurfacePresentation) -> int:
    if x.is_trivial() or y.is_trivial():
        return 0
    rx, m = x.root()
    ry, n = y.root()
    if rx == ry:
        if is_simple(rx, s):
            return 0
        raise UnsupportedError(f"i({x}, {y}) for powers of the non-simple class {rx} is unsupported")
    count = len(linked_pairs(rx.word, ry.word, ribbon_at_infinity(s)))
    return m * n * count
