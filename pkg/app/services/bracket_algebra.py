# app/services/bracket_algebra.py
# -------------------------------------------------------------------
# Purpose:
#   Integer linear combinations of curve classes and the brackets on them:
#   the Goldman bracket of directed classes, the TWG bracket of undirected
#   classes (directly through smoothings and through the forget-direction
#   map), the Jacobi sum, and the Leibniz extension to the symmetric
#   algebra.
# -------------------------------------------------------------------

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

from app.services.cyclic_order import linked_pairs, ribbon_at_infinity, ribbon_order
from app.services.surface_words import (
    DirectedClass,
    SurfacePresentation,
    UndirectedClass,
    class_key,
    format_word,
    inverse,
    power,
    rotate,
)

logger = logging.getLogger(__name__)

CurveClass = Union[DirectedClass, UndirectedClass]


class LinComb:
    """
    Sparse Z-linear combination of classes of one kind.

    Terms are kept in a plain dict with no zero coefficients; iteration is
    always in length-lex class order so printed output is stable.
    """

    __slots__ = ("_terms", "directed")

    def __init__(self, terms: Mapping[CurveClass, int] | None = None, directed: bool = False):
        self._terms: Dict[CurveClass, int] = {k: v for k, v in (terms or {}).items() if v}
        self.directed = directed

    @classmethod
    def accumulate(cls, pairs: Iterable[Tuple[int, CurveClass]], directed: bool = False) -> "LinComb":
        acc: Dict[CurveClass, int] = {}
        for coeff, c in pairs:
            acc[c] = acc.get(c, 0) + coeff
        return cls(acc, directed=directed)

    @classmethod
    def zero(cls, directed: bool = False) -> "LinComb":
        return cls({}, directed=directed)

    def items(self) -> List[Tuple[CurveClass, int]]:
        return sorted(self._terms.items(), key=lambda kv: class_key(kv[0].word))

    def __iter__(self) -> Iterator[Tuple[CurveClass, int]]:
        return iter(self.items())

    def __getitem__(self, c: CurveClass) -> int:
        return self._terms.get(c, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_multiplicity(self) -> int:
        return sum(abs(v) for v in self._terms.values())

    def __add__(self, other: "LinComb") -> "LinComb":
        acc = dict(self._terms)
        for c, v in other._terms.items():
            acc[c] = acc.get(c, 0) + v
        return LinComb(acc, directed=self.directed)

    def __neg__(self) -> "LinComb":
        return LinComb({c: -v for c, v in self._terms.items()}, directed=self.directed)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __rmul__(self, k: int) -> "LinComb":
        return LinComb({c: k * v for c, v in self._terms.items()}, directed=self.directed)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def to_json(self) -> List[dict]:
        return [{"word": str(c), "coeff": v} for c, v in self.items()]

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for c, v in self.items():
            sign = "+" if v > 0 else "−"
            mag = "" if abs(v) == 1 else str(abs(v))
            parts.append(f"{sign}{mag}⟨{c}⟩")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LinComb({self})"


def forget_direction(lc: LinComb) -> LinComb:
    """The u-map: send each directed class to its undirected class."""
    return LinComb.accumulate(((v, c.undirected()) for c, v in lc.items()), directed=False)


# -----------------------------
# Brackets of single classes
# -----------------------------
@lru_cache(maxsize=200_000)
def _goldman_terms(x: Tuple[int, ...], y: Tuple[int, ...], ribbon: Tuple[int, ...]) -> Tuple[Tuple[int, DirectedClass], ...]:
    rib = ribbon_order(ribbon)
    return tuple(
        (sign, DirectedClass.of(rotate(x, i) + rotate(y, j)))
        for i, j, sign in linked_pairs(x, y, rib)
    )


@lru_cache(maxsize=200_000)
def _twg_terms(x: Tuple[int, ...], y: Tuple[int, ...], ribbon: Tuple[int, ...]) -> Tuple[Tuple[int, UndirectedClass], ...]:
    rib = ribbon_order(ribbon)
    out: List[Tuple[int, UndirectedClass]] = []
    for i, j, sign in linked_pairs(x, y, rib):
        xi, yj = rotate(x, i), rotate(y, j)
        out.append((sign, UndirectedClass.of(xi + yj)))
        out.append((-sign, UndirectedClass.of(xi + inverse(yj))))
    return tuple(out)


def goldman_bracket(x: DirectedClass, y: DirectedClass, s: SurfacePresentation) -> LinComb:
    """Sum over crossings of sign * <x_i y_j> (loop product at the crossing)."""
    return LinComb.accumulate(_goldman_terms(x.word, y.word, s.ribbon), directed=True)


def twg_raw_terms(x: UndirectedClass, y: UndirectedClass, s: SurfacePresentation) -> List[Tuple[int, UndirectedClass]]:
    """Signed smoothing terms before cancellation, two per crossing."""
    return list(_twg_terms(x.word, y.word, s.ribbon))


def twg_bracket(x: UndirectedClass, y: UndirectedClass, s: SurfacePresentation) -> LinComb:
    """
    Sum over crossings of (0-smoothing) - (infinity-smoothing). For a
    positive crossing the 0-smoothing is the loop product x_i y_j, for a
    negative one it is x_i y_j^-1.
    """
    return LinComb.accumulate(_twg_terms(x.word, y.word, s.ribbon), directed=False)


def twg_from_goldman(x: UndirectedClass, y: UndirectedClass, s: SurfacePresentation) -> LinComb:
    alpha, beta = x.directed(), y.directed()
    return forget_direction(goldman_bracket(alpha, beta, s)) + forget_direction(
        goldman_bracket(alpha, beta.inverse(), s)
    )


def chas_self_bracket(x: DirectedClass, s: SurfacePresentation) -> LinComb:
    """[x, x reversed] as directed classes."""
    return goldman_bracket(x, x.inverse(), s)


def power_bracket(x: DirectedClass, m: int, s: SurfacePresentation) -> LinComb:
    """[x, x^m] as directed classes."""
    return goldman_bracket(x, DirectedClass.of(power(x.word, m)), s)


def linked_pairs_tsv(x: CurveClass, y: CurveClass, s: SurfacePresentation) -> str:
    """Debug dump: one row per crossing with both smoothings."""
    rows = ["i\tj\tsign\tzero_smoothing\tinfinity_smoothing"]
    for i, j, sign in linked_pairs(x.word, y.word, ribbon_at_infinity(s)):
        xi, yj = rotate(x.word, i), rotate(y.word, j)
        product_ = UndirectedClass.of(xi + yj)
        reversed_ = UndirectedClass.of(xi + inverse(yj))
        zero, infinity = (product_, reversed_) if sign > 0 else (reversed_, product_)
        rows.append(f"{i}\t{j}\t{sign:+d}\t{format_word(zero.word)}\t{format_word(infinity.word)}")
    return "\n".join(rows) + "\n"


# -----------------------------
# Bilinear extension
# -----------------------------
def bracket(p: LinComb, q: LinComb, s: SurfacePresentation) -> LinComb:
    """Bilinear extension over LinComb of either kind (both must match)."""
    if p.directed != q.directed:
        raise ValueError("cannot bracket directed with undirected combinations")
    fn = goldman_bracket if p.directed else twg_bracket
    out = LinComb.zero(directed=p.directed)
    for (x, a), (y, b) in product(p.items(), q.items()):
        out = out + (a * b) * fn(x, y, s)
    return out


def single(c: CurveClass) -> LinComb:
    return LinComb({c: 1}, directed=isinstance(c, DirectedClass))


def jacobi_sum(x: UndirectedClass, y: UndirectedClass, z: UndirectedClass, s: SurfacePresentation) -> LinComb:
    X, Y, Z = single(x), single(y), single(z)
    return bracket(bracket(X, Y, s), Z, s) + bracket(bracket(Y, Z, s), X, s) + bracket(bracket(Z, X, s), Y, s)


# -----------------------------
# Symmetric algebra
# -----------------------------
Monomial = Tuple[UndirectedClass, ...]


def _monomial(classes: Iterable[UndirectedClass]) -> Monomial:
    return tuple(sorted(classes, key=lambda c: class_key(c.word)))


class SymPoly:
    """
    Element of the symmetric algebra on undirected classes, written in the
    monomial basis (sorted multisets of classes).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self._terms: Dict[Monomial, int] = {}
        for mono, v in (terms or {}).items():
            if v:
                key = _monomial(mono)
                self._terms[key] = self._terms.get(key, 0) + v
        self._terms = {k: v for k, v in self._terms.items() if v}

    @classmethod
    def monomial(cls, *classes: UndirectedClass, coeff: int = 1) -> "SymPoly":
        return cls({_monomial(classes): coeff})

    @classmethod
    def from_lincomb(cls, lc: LinComb) -> "SymPoly":
        return cls({(c,): v for c, v in lc.items()})

    def items(self) -> List[Tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), [class_key(c.word) for c in kv[0]]))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "SymPoly") -> "SymPoly":
        acc = dict(self._terms)
        for m, v in other._terms.items():
            acc[m] = acc.get(m, 0) + v
        return SymPoly(acc)

    def __neg__(self) -> "SymPoly":
        return SymPoly({m: -v for m, v in self._terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __rmul__(self, k: int) -> "SymPoly":
        return SymPoly({m: k * v for m, v in self._terms.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        acc: Dict[Monomial, int] = {}
        for (m1, v1), (m2, v2) in product(self._terms.items(), other._terms.items()):
            key = _monomial(m1 + m2)
            acc[key] = acc.get(key, 0) + v1 * v2
        return SymPoly(acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, v in self.items():
            body = "·".join(f"⟨{c}⟩" for c in mono) or "1"
            parts.append(f"{v:+d} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"SymPoly({self})"


def poisson_bracket_sym(p: SymPoly, q: SymPoly, s: SurfacePresentation) -> SymPoly:
    """Leibniz extension of the TWG bracket to the symmetric algebra."""
    acc: Dict[Monomial, int] = {}
    for (m1, v1), (m2, v2) in product(p.items(), q.items()):
        for i, xi in enumerate(m1):
            rest_x = m1[:i] + m1[i + 1:]
            for j, yj in enumerate(m2):
                rest_y = m2[:j] + m2[j + 1:]
                for term, c in twg_bracket(xi, yj, s).items():
                    key = _monomial((term,) + rest_x + rest_y)
                    acc[key] = acc.get(key, 0) + v1 * v2 * c
    return SymPoly(acc)
