# app/services/hyperbolic_engine.py
# -------------------------------------------------------------------
# Purpose:
#   Numeric ground truth for the combinatorial engine. A holonomy sends
#   each generator to a real 2x2 matrix of determinant 1 (a Mobius map of
#   the upper half-plane). Closed geodesics are axes of hyperbolic
#   elements; their crossings are found as crossings of Axis(x) with
#   translates g.Axis(y), one translate per double coset <x> g <y>.
#
#   Provides:
#     - evaluate / translation_length / axis / axes_cross
#     - crossings with angle and sign, geometric brackets
#     - cosh length identities for the two smoothings
#     - twist deformations along a fixed simple curve and angle tracking
# -------------------------------------------------------------------

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.errors import (
    HolonomyError,
    IndeterminateError,
    RadiusInsufficientError,
    UnsupportedError,
    WordParseError,
)
from app.services.bracket_algebra import LinComb
from app.services.surface_words import (
    DirectedClass,
    SurfacePresentation,
    UndirectedClass,
    Word,
    class_key,
    format_word,
    inverse,
    is_peripheral,
    power,
    reduce,
    undirected_canonical,
)
from app.utils.settings import HALO_ROUNDS, HALO_START, HALO_STEP, TOLERANCES

logger = logging.getLogger(__name__)

Mobius = np.ndarray  # shape (2, 2), determinant 1

IDENTITY = np.eye(2)


# -----------------------------
# Mobius helpers
# -----------------------------
def mobius(a: float, b: float, c: float, d: float) -> Mobius:
    return np.array([[a, b], [c, d]], dtype=float)


def sl2_inverse(m: Mobius) -> Mobius:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def classify(m: Mobius) -> str:
    """'hyperbolic', 'parabolic' or 'elliptic' by |trace|."""
    tr = abs(float(np.trace(m)))
    if abs(tr - 2.0) <= TOLERANCES["parabolic"]:
        return "parabolic"
    return "hyperbolic" if tr > 2.0 else "elliptic"


def translation_length(m: Mobius) -> float:
    kind = classify(m)
    if kind != "hyperbolic":
        raise UnsupportedError(f"translation length of a {kind} element (|trace| = {abs(np.trace(m)):.12g})")
    return 2.0 * math.acosh(abs(float(np.trace(m))) / 2.0)


def _homogeneous(z: float) -> Tuple[float, float]:
    return (1.0, 0.0) if math.isinf(z) else (z, 1.0)


def _point(v: np.ndarray) -> float:
    return math.inf if v[1] == 0.0 else float(v[0] / v[1])


def disk_angle(z: float) -> float:
    """Position of an extended real on the boundary circle, in (-pi, pi]."""
    return math.pi if math.isinf(z) else 2.0 * math.atan(z)


@dataclass(frozen=True)
class Axis:
    """
    Invariant geodesic of a hyperbolic element.

    Fields:
    - repelling:  backward endpoint (extended real)
    - attracting: forward endpoint (extended real)
    - length:     translation length
    """
    repelling: float
    attracting: float
    length: float


def axis(m: Mobius) -> Axis:
    """Fixed points are the eigenvectors; the larger |eigenvalue| is attracting."""
    length = translation_length(m)
    vals, vecs = np.linalg.eig(m)
    order = np.argsort(np.abs(vals.real))
    return Axis(
        repelling=_point(vecs[:, order[0]].real),
        attracting=_point(vecs[:, order[1]].real),
        length=length,
    )


def axes_cross(a1: Axis, a2: Axis) -> bool:
    """True when the endpoint pairs interleave on the boundary circle."""
    p, q = sorted((disk_angle(a1.repelling), disk_angle(a1.attracting)))
    others = (disk_angle(a2.repelling), disk_angle(a2.attracting))
    tol = TOLERANCES["endpoint"]
    for e in others:
        for f in (p, q):
            gap = abs(e - f)
            if min(gap, 2 * math.pi - gap) < tol:
                raise IndeterminateError("axes share an endpoint within tolerance")
    inside = [p < e < q for e in others]
    return inside[0] != inside[1]


def _normalizer(ax: Axis) -> Mobius:
    """SL2 map sending the repelling end to 0 and the attracting end to infinity."""
    p0, p1 = _homogeneous(ax.repelling)
    q0, q1 = _homogeneous(ax.attracting)
    t = np.array([[p1, -p0], [q1, -q0]], dtype=float)
    det = p0 * q1 - p1 * q0
    if det < 0:
        t[0] *= -1.0
        det = -det
    return t / math.sqrt(det)


# -----------------------------
# Holonomy
# -----------------------------
@dataclass(frozen=True)
class PeripheralCheck:
    """
    Trace condition verified whenever a holonomy is built.

    Fields:
    - word:  word whose image is checked
    - kind:  expected type ('hyperbolic' or 'parabolic')
    - trace: expected trace, or None for type-only checks
    """
    word: Word
    kind: str
    trace: Optional[float] = None


@dataclass(frozen=True)
class Holonomy:
    """
    Representation of the surface group into SL(2, R), one matrix per
    generator, stored as flat (a, b, c, d) tuples so the value is hashable.

    Fields:
    - name:         holonomy key, e.g. 'torus1'
    - surface:      the surface presentation it realizes
    - generators:   matrix entries for a, b, c, ...
    - checks:       trace conditions verified at build time
    - twist_curve:  word of the twist curve ('' when twists are unsupported)
    - twist_moves:  (generator, 'left' | 'conjugate') pairs applied by a twist
    """
    name: str
    surface: SurfacePresentation
    generators: Tuple[Tuple[float, float, float, float], ...]
    checks: Tuple[PeripheralCheck, ...] = ()
    twist_curve: Word = ()
    twist_moves: Tuple[Tuple[int, str], ...] = ()
    description: str = field(default="", compare=False)

    @classmethod
    def build(cls, **kwargs) -> "Holonomy":
        h = cls(**kwargs)
        validate_holonomy(h)
        return h

    @classmethod
    def from_trace_coordinates(
        cls, name: str, surface: SurfacePresentation, x: float, y: float, z: float, **kwargs
    ) -> "Holonomy":
        """
        Three-holed sphere with trace(a) = x, trace(b) = y, trace(ab) = z:
        a = [[x, 1], [-1, 0]], b = [[0, -w], [1/w, y]] with w + 1/w = z.
        """
        disc = z * z - 4.0
        if disc <= 0:
            raise HolonomyError(f"trace coordinate z = {z} does not give a hyperbolic boundary")
        w = (z + math.sqrt(disc)) / 2.0
        gens = ((x, 1.0, -1.0, 0.0), (0.0, -w, 1.0 / w, y))
        return cls.build(name=name, surface=surface, generators=gens, **kwargs)

    @cached_property
    def matrices(self) -> Dict[int, Mobius]:
        out: Dict[int, Mobius] = {}
        for k, entries in enumerate(self.generators, start=1):
            m = mobius(*entries)
            out[k] = m
            out[-k] = sl2_inverse(m)
        return out

    @cached_property
    def orientation(self) -> int:
        """
        +1 when the attracting fixed points of the 2n letters run around the
        boundary circle in the ribbon's cyclic order, -1 in the mirror order.
        """
        letters = list(self.surface.ribbon)
        angles = {l: disk_angle(axis(self.matrices[l]).attracting) for l in letters}
        seen = sorted(letters, key=lambda l: angles[l])
        start = seen.index(letters[0])
        seen = seen[start:] + seen[:start]
        if seen == letters:
            return 1
        mirrored = [letters[0]] + letters[:0:-1]
        if seen == mirrored:
            return -1
        raise HolonomyError(
            f"holonomy {self.name}: generator fixed points run {format_word(seen)}, "
            f"which is neither the ribbon order {self.surface.ribbon_str()} nor its mirror"
        )

    def matrix(self, letter: int) -> Mobius:
        return self.matrices[letter]

    def summary(self) -> dict:
        return {
            "name": self.name,
            "surface": self.surface.name,
            "orientation": self.orientation,
            "traces": {format_word((k,)): float(np.trace(self.matrices[k])) for k in range(1, self.surface.n + 1)},
            "twist_curve": format_word(self.twist_curve) or None,
        }


def evaluate(rho: Holonomy, w: Sequence[int]) -> Mobius:
    m = IDENTITY
    for letter in w:
        if letter == 0 or abs(letter) > rho.surface.n:
            raise WordParseError(f"letter {letter} outside the generators of {rho.surface.name}")
        m = m @ rho.matrices[letter]
    return m


def validate_holonomy(rho: Holonomy) -> None:
    if len(rho.generators) != rho.surface.n:
        raise HolonomyError(f"holonomy {rho.name}: {len(rho.generators)} matrices for {rho.surface.n} generators")
    for k in range(1, rho.surface.n + 1):
        m = rho.matrices[k]
        det = float(np.linalg.det(m))
        if abs(det - 1.0) > TOLERANCES["determinant"]:
            raise HolonomyError(f"holonomy {rho.name}: det of generator {k} is {det:.15g}")
        if classify(m) != "hyperbolic":
            raise HolonomyError(f"holonomy {rho.name}: generator {k} is {classify(m)}")
    for check in rho.checks:
        m = evaluate(rho, check.word)
        kind = classify(m)
        if kind != check.kind:
            raise HolonomyError(f"holonomy {rho.name}: {format_word(check.word)} is {kind}, expected {check.kind}")
        if check.trace is not None and abs(float(np.trace(m)) - check.trace) > TOLERANCES["trace_target"]:
            raise HolonomyError(
                f"holonomy {rho.name}: trace of {format_word(check.word)} is "
                f"{float(np.trace(m)):.12g}, expected {check.trace}"
            )
    _ = rho.orientation
    logger.debug(f"holonomy {rho.name} validated (orientation {rho.orientation:+d})")


# -----------------------------
# Crossings
# -----------------------------
@dataclass(frozen=True)
class Crossing:
    """
    One transversal intersection point of the closed geodesics x and y.

    Fields:
    - witness:   g with Axis(x) crossing g.Axis(y); reduced word
    - s:         position along Axis(x), in [0, length of x)
    - t:         position along the translate of Axis(y), in [0, length of the root of y)
    - phi:       undirected angle from y to x, in (0, pi)
    - eps:       crossing sign (+1 / -1) in the ribbon orientation
    - weight:    exponent of y (a y = s^n passes n times through the point)
    """
    witness: Word
    s: float
    t: float
    phi: float
    eps: int
    weight: int = 1


def _ball(n: int, radius: int) -> List[Word]:
    letters = [k for k in range(1, n + 1)] + [-k for k in range(1, n + 1)]
    out: List[Word] = [()]
    frontier: List[Word] = [()]
    for _ in range(radius):
        nxt = [w + (l,) for w in frontier for l in letters if not w or l != -w[-1]]
        out.extend(nxt)
        frontier = nxt
    return out


@lru_cache(maxsize=64)
def _halo(rho: Holonomy, radius: int) -> Tuple[Tuple[Word, ...], np.ndarray]:
    words = _ball(rho.surface.n, radius)
    return tuple(words), np.stack([evaluate(rho, w) for w in words])


def _prefix_matrices(rho: Holonomy, w: Word, inverted: bool = False) -> np.ndarray:
    out = []
    m = IDENTITY
    for letter in w:
        out.append(sl2_inverse(m) if inverted else m)
        m = m @ rho.matrices[letter]
    return np.stack(out)


def _window(pos: float, length: float) -> Tuple[int, float]:
    """Shift k and remainder of pos in the half-open window [0, length)."""
    k = math.floor(pos / length)
    pos -= k * length
    if length - pos < TOLERANCES["window_snap"]:
        pos, k = 0.0, k + 1
    return k, pos


def _crossing_angle(u1: float, u2: float, orientation: int) -> Tuple[float, int]:
    """
    Angle and sign of the geodesic (u1 -> u2) crossing the imaginary axis,
    which is the normalized Axis(x) pointing up. u1 * u2 < 0.
    """
    v = math.sqrt(-u1 * u2)
    c = (u1 + u2) / 2.0
    ty = (v, c) if u1 < 0 else (-v, -c)
    theta = orientation * math.atan2(-ty[0], ty[1])
    phi = (math.pi - theta) % math.pi
    if abs(math.cos(phi)) > 1.0 - TOLERANCES["tangency"]:
        raise IndeterminateError(f"near-tangent crossing (phi = {phi:.3e})")
    return phi, (1 if theta > 0 else -1)


def _root_element(w: Word) -> Tuple[Word, int]:
    """Shortest prefix r with w = r^m as words (w cyclically reduced)."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == tuple(w):
            return tuple(w[:d]), n // d
    return tuple(w), 1


@dataclass(frozen=True)
class _Frame:
    """Normalizers of Axis(x) and Axis(y) plus the data the window shifts need."""
    x: Word
    root_y: Word
    to_x: Mobius
    to_y: Mobius
    ends: np.ndarray  # homogeneous endpoints of Axis(y), repelling then attracting
    length_x: float
    length_y: float
    coaxial: Optional[Tuple[Word, Word]]  # root of x and its inverse when roots are conjugate


def _make_frame(rho: Holonomy, x: Word, y: Word) -> _Frame:
    root_x, _ = _root_element(x)
    root_y, _ = _root_element(y)
    ax_x = axis(evaluate(rho, x))
    ax_y = axis(evaluate(rho, root_y))
    same_root = undirected_canonical(root_x) == undirected_canonical(root_y)
    return _Frame(
        x=x,
        root_y=root_y,
        to_x=_normalizer(ax_x),
        to_y=_normalizer(ax_y),
        ends=np.array([_homogeneous(ax_y.repelling), _homogeneous(ax_y.attracting)]),
        length_x=ax_x.length,
        length_y=ax_y.length,
        coaxial=(root_x, inverse(root_x)) if same_root else None,
    )


def _translate_ends(m: Mobius, ends: np.ndarray) -> Optional[Tuple[float, float]]:
    """Endpoints u1, u2 of m.Axis(y) in the frame of x, or None when they do not straddle 0."""
    p = ends @ m.T
    side = np.sign(p[:, 0]) * np.sign(p[:, 1])
    if side[0] * side[1] >= 0:
        return None
    return float(p[0, 0] / p[0, 1]), float(p[1, 0] / p[1, 1])


def _place(rho: Holonomy, f: _Frame, g: Word) -> Optional[Tuple[float, float, float, float]]:
    """(u1, u2, s, t) of the crossing of Axis(x) with g.Axis(y); t is measured along Axis(y)."""
    m = f.to_x @ evaluate(rho, g)
    ends = _translate_ends(m, f.ends)
    if ends is None:
        return None
    u1, u2 = ends
    s = 0.5 * (math.log(abs(u1)) + math.log(abs(u2)))
    back = f.to_y @ sl2_inverse(m)
    t = s - math.log(back[1, 1] ** 2 + back[1, 0] ** 2 * math.exp(2.0 * s))
    return u1, u2, s, t


def _settle(rho: Holonomy, f: _Frame, g: Word) -> Optional[Crossing]:
    """
    Canonical witness of the double coset <x> g <root y>: the one whose
    crossing lies in [0, l_x) along x and in [0, l_root) along y.
    """
    if f.coaxial and reduce(g + f.root_y + inverse(g)) in f.coaxial:
        return None
    for _ in range(4):
        placed = _place(rho, f, g)
        if placed is None:
            return None
        u1, u2, s, t = placed
        kx, s = _window(s, f.length_x)
        ky, t = _window(t, f.length_y)
        if kx == 0 and ky == 0:
            phi, eps = _crossing_angle(u1, u2, rho.orientation)
            return Crossing(witness=g, s=s, t=t, phi=phi, eps=eps)
        g = reduce(power(f.x, -kx) + g + power(f.root_y, ky))
    raise IndeterminateError(f"crossing witness {format_word(g)} does not settle in the fundamental window")


def _search(rho: Holonomy, x: Word, y: Word, radius: int) -> List[Crossing]:
    """
    Crossings from candidates prefix(x) . w . prefix(root y)^-1 with w in
    the halo ball. Candidates are bucketed by their window position, and
    one per bucket is settled to its canonical witness.
    """
    f = _make_frame(rho, x, y)
    weight = len(y) // len(f.root_y)
    halo_words, halo = _halo(rho, radius)
    left = np.einsum("ab,ibc->iac", f.to_x, _prefix_matrices(rho, x))
    right = _prefix_matrices(rho, f.root_y, inverted=True)
    full = np.einsum("iab,kbc,jcd->ikjad", left, halo, right)  # (|x|, B, |r|, 2, 2)
    pts = np.einsum("ikjab,eb->ikjea", full, f.ends)  # (..., endpoint, component)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        side = np.sign(pts[..., 0]) * np.sign(pts[..., 1])
        straddle = side[..., 0] * side[..., 1] < 0
        log_u = np.log(np.abs(pts[..., 0])) - np.log(np.abs(pts[..., 1]))
        s = log_u.sum(axis=-1) / 2.0
        # inverse of full, then into the frame of y; t = log Im of the crossing point there
        back_c = f.to_y[1, 0] * full[..., 1, 1] - f.to_y[1, 1] * full[..., 1, 0]
        back_d = f.to_y[1, 1] * full[..., 0, 0] - f.to_y[1, 0] * full[..., 0, 1]
        t = s - np.logaddexp(2.0 * np.log(np.abs(back_d)), 2.0 * np.log(np.abs(back_c)) + 2.0 * s)
    usable = straddle & np.isfinite(s) & np.isfinite(t)

    width = TOLERANCES["bucket"]
    buckets: Dict[Tuple[int, int], Tuple[int, Word]] = {}
    for i, k, j in np.argwhere(usable):
        kx, sx = _window(float(s[i, k, j]), f.length_x)
        ky, ty = _window(float(t[i, k, j]), f.length_y)
        key = (round(sx / width), round(ty / width))
        cost = abs(kx) + abs(ky) + len(halo_words[k])
        if key in buckets and buckets[key][0] <= cost:
            continue
        g = power(x, -kx) + x[:i] + halo_words[k] + inverse(f.root_y[:j]) + power(f.root_y, ky)
        buckets[key] = (cost, reduce(g))

    found: Dict[Word, Crossing] = {}
    for _, g in buckets.values():
        settled = _settle(rho, f, g)
        if settled is not None and settled.witness not in found:
            found[settled.witness] = replace(settled, weight=weight)

    out = sorted(found.values(), key=lambda c: (c.s, class_key(c.witness)))
    for a, b in zip(out, out[1:]):
        if b.s - a.s < TOLERANCES["triple_point"]:
            logger.warning(
                f"crossings of {format_word(x)} and {format_word(y)} at witnesses "
                f"{format_word(a.witness)}, {format_word(b.witness)} coincide (multiple point)"
            )
    return out


def _same_set(a: List[Crossing], b: List[Crossing]) -> bool:
    return {c.witness for c in a} == {c.witness for c in b}


def _geodesic_free(rho: Holonomy, w: Word) -> bool:
    """Trivial and puncture classes have no closed geodesic to cross."""
    if not w:
        return True
    m = evaluate(rho, w)
    if classify(m) == "hyperbolic":
        return False
    if is_peripheral(UndirectedClass.of(w), rho.surface):
        return True
    raise HolonomyError(f"{format_word(w)} is {classify(m)} under {rho.name} but not peripheral")


@lru_cache(maxsize=100_000)
def _crossings(rho: Holonomy, x: Word, y: Word) -> Tuple[Crossing, ...]:
    if _geodesic_free(rho, x) or _geodesic_free(rho, y):
        return ()
    radius = HALO_START
    current = _search(rho, x, y, radius)
    for round_ in range(HALO_ROUNDS):
        grown = _search(rho, x, y, radius + HALO_STEP)
        if _same_set(current, grown):
            if round_:
                logger.warning(f"crossing search for ({format_word(x)}, {format_word(y)}) needed halo radius {radius}")
            return tuple(current)
        radius += HALO_STEP
        current = grown
    raise RadiusInsufficientError(
        f"crossings of {format_word(x)} and {format_word(y)} did not stabilize by halo radius {radius}"
    )


def crossings(rho: Holonomy, x: Sequence[int], y: Sequence[int]) -> List[Crossing]:
    """
    Crossings of the geodesics of x and y (cyclically reduced words), one
    per double coset <x> g <y>, sorted by position along Axis(x). When
    x = y every self-intersection point appears twice, once per branch order.
    """
    return list(_crossings(rho, tuple(x), tuple(y)))


def _crossing_count(cs: Sequence[Crossing]) -> int:
    return sum(c.weight for c in cs)


def geometric_goldman(rho: Holonomy, x: DirectedClass, y: DirectedClass) -> LinComb:
    terms = []
    for c in crossings(rho, x.word, y.word):
        g = c.witness
        terms.append((c.eps * c.weight, DirectedClass.of(x.word + g + y.word + inverse(g))))
    return LinComb.accumulate(terms, directed=True)


def smoothings(x: Word, y: Word, c: Crossing) -> Tuple[Word, Word]:
    """(0-smoothing, infinity-smoothing) words at a crossing."""
    g = c.witness
    product = x + g + y + inverse(g)
    reversed_ = x + g + inverse(y) + inverse(g)
    return (product, reversed_) if c.eps > 0 else (reversed_, product)


def geometric_twg_raw(rho: Holonomy, x: UndirectedClass, y: UndirectedClass) -> List[Tuple[int, UndirectedClass]]:
    out: List[Tuple[int, UndirectedClass]] = []
    for c in crossings(rho, x.word, y.word):
        zero, infinity = smoothings(x.word, y.word, c)
        out.append((c.weight, UndirectedClass.of(zero)))
        out.append((-c.weight, UndirectedClass.of(infinity)))
    return out


def geometric_twg(rho: Holonomy, x: UndirectedClass, y: UndirectedClass) -> LinComb:
    return LinComb.accumulate(geometric_twg_raw(rho, x, y), directed=False)


def cosh_residuals(rho: Holonomy, x: Word, y: Word, c: Crossing) -> Tuple[float, float]:
    """
    Relative residuals of
      cosh(l0/2)   = cosh(lx/2) cosh(ly/2) - sinh(lx/2) sinh(ly/2) cos(phi)
      cosh(linf/2) = cosh(lx/2) cosh(ly/2) + sinh(lx/2) sinh(ly/2) cos(phi)
    """
    cx = abs(float(np.trace(evaluate(rho, x)))) / 2.0
    cy = abs(float(np.trace(evaluate(rho, y)))) / 2.0
    sx, sy = math.sqrt(cx * cx - 1.0), math.sqrt(cy * cy - 1.0)
    zero, infinity = smoothings(tuple(x), tuple(y), c)
    rhs0 = cx * cy - sx * sy * math.cos(c.phi)
    rhs_inf = cx * cy + sx * sy * math.cos(c.phi)
    lhs0 = abs(float(np.trace(evaluate(rho, zero)))) / 2.0
    lhs_inf = abs(float(np.trace(evaluate(rho, infinity)))) / 2.0
    return abs(lhs0 - rhs0) / max(1.0, rhs0), abs(lhs_inf - rhs_inf) / max(1.0, rhs_inf)


def self_crossings(rho: Holonomy, x: UndirectedClass) -> int:
    if x.is_trivial():
        return 0
    _, m = x.root()
    if m > 1:
        raise UnsupportedError(f"self crossings of the proper power {x} are not computed")
    return _crossing_count(crossings(rho, x.word, x.word)) // 2


def intersection_number_geom(rho: Holonomy, x: UndirectedClass, y: UndirectedClass) -> int:
    if x.is_trivial() or y.is_trivial():
        return 0
    rx, _ = x.root()
    ry, _ = y.root()
    if rx == ry:
        if is_peripheral(rx, rho.surface) or self_crossings(rho, rx) == 0:
            return 0
        raise UnsupportedError(f"i({x}, {y}) for powers of the non-simple class {rx} is unsupported")
    return _crossing_count(crossings(rho, x.word, y.word))


# -----------------------------
# Twists
# -----------------------------
TWIST_REFERENCE = {"torus1": ("a", "b"), "sphere4": ("ab", "bc")}


def shear(a: Mobius, t: float) -> Mobius:
    """Element with the axis and direction of a, translation length |t| (t < 0 reverses)."""
    lift = a if np.trace(a) >= 0 else -a
    half = float(np.trace(lift)) / 2.0
    n = (lift - half * IDENTITY) / math.sqrt(half * half - 1.0)
    return math.cosh(t / 2.0) * IDENTITY + math.sinh(t / 2.0) * n


def _moved(rho: Holonomy, t: float) -> Holonomy:
    e = shear(evaluate(rho, rho.twist_curve), t)
    e_inv = sl2_inverse(e)
    gens = list(rho.generators)
    for k, move in rho.twist_moves:
        m = mobius(*gens[k - 1])
        m = e @ m if move == "left" else e @ m @ e_inv
        gens[k - 1] = tuple(float(v) for v in m.ravel())
    checks = tuple(ch for ch in rho.checks if is_peripheral(UndirectedClass.of(ch.word), rho.surface))
    return Holonomy.build(
        name=f"{rho.name}@t={t:.6g}",
        surface=rho.surface,
        generators=tuple(gens),
        checks=checks,
        twist_curve=rho.twist_curve,
        twist_moves=rho.twist_moves,
        description=rho.description,
    )


def _angle_at(rho: Holonomy, x: Word, y: Word, g: Word) -> float:
    placed = _place(rho, _make_frame(rho, x, y), g)
    if placed is None:
        raise IndeterminateError(f"crossing at witness {format_word(g)} lost under {rho.name}")
    u1, u2, _, _ = placed
    phi, _ = _crossing_angle(u1, u2, rho.orientation)
    return phi


@lru_cache(maxsize=256)
def twist_direction(rho: Holonomy) -> int:
    """
    Sign s so that twist(rho, t) shears by s * t and crossing angles with
    the twist curve decrease in t. Calibrated on one reference crossing.
    """
    if rho.surface.name not in TWIST_REFERENCE:
        raise UnsupportedError(f"no twist reference pair for surface {rho.surface.name}")
    cx, cy = (rho.surface.parse(w) for w in TWIST_REFERENCE[rho.surface.name])
    ref = crossings(rho, cx, cy)
    if not ref:
        raise HolonomyError(f"reference curves {TWIST_REFERENCE[rho.surface.name]} do not cross under {rho.name}")
    g = ref[0].witness
    step = 0.25
    before = _angle_at(_moved(rho, -step), cx, cy, g)
    after = _angle_at(_moved(rho, step), cx, cy, g)
    direction = 1 if after < before else -1
    logger.info(f"twist direction for {rho.name} calibrated to {direction:+d}")
    return direction


def twist(rho: Holonomy, t: float, direction: Optional[int] = None) -> Holonomy:
    """Left twist of length t along the holonomy's twist curve."""
    if not rho.twist_curve or not rho.twist_moves:
        raise UnsupportedError(f"holonomy {rho.name} has no twist curve")
    if t == 0:
        return rho
    sign = twist_direction(rho) if direction is None else direction
    return _moved(rho, sign * t)


def angle_along_twist(
    rho: Holonomy, x: Word, y: Word, c: Crossing, t_grid: Sequence[float], direction: Optional[int] = None
) -> List[float]:
    """Angle of the crossing with witness c.witness under twist(rho, t), for each t."""
    if undirected_canonical(x) != undirected_canonical(rho.twist_curve):
        raise UnsupportedError(
            f"angle tracking needs x = the twist curve {format_word(rho.twist_curve)}, got {format_word(x)}"
        )
    return [_angle_at(twist(rho, t, direction), tuple(x), tuple(y), c.witness) for t in t_grid]

