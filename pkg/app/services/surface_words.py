# app/services/surface_words.py
# -------------------------------------------------------------------
# Purpose:
#   Free-group word mechanics for surfaces with free fundamental group:
#   reduction, canonical conjugacy-class names (directed and undirected),
#   ribbon-structured surface presentations with their boundary cycles,
#   and exhaustive class enumeration.
#
# Letters are signed ints: +k is the k-th generator (1-based), -k its
# inverse. On the wire they are written a, b, c, ... / A, B, C, ...
# -------------------------------------------------------------------

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.errors import RibbonError, WordParseError

logger = logging.getLogger(__name__)

Letter = int
Word = Tuple[Letter, ...]
CyclicWord = Tuple[Letter, ...]

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


# -----------------------------
# Letters and words
# -----------------------------
def word_key(w: Sequence[Letter]) -> Tuple[int, ...]:
    """Letter order a < b < c < ... < A < B < C < ..."""
    return tuple(letter if letter > 0 else 100 - letter for letter in w)


def class_key(w: Sequence[Letter]) -> Tuple[int, Tuple[int, ...]]:
    """Length-lexicographic total order used for terms and PBW monomials."""
    return (len(w), word_key(w))


def letter_char(letter: Letter) -> str:
    ch = ALPHABET[abs(letter) - 1]
    return ch if letter > 0 else ch.upper()


def format_word(w: Sequence[Letter]) -> str:
    return "".join(letter_char(letter) for letter in w)


def parse_word(text: str, n: Optional[int] = None) -> Word:
    """
    Parse 'aaBAb' style input. Whitespace is ignored and a bare '1' is the
    empty word. With n given, letters beyond the n-th generator are rejected.
    """
    if text.strip() == "1":
        return ()
    out: List[Letter] = []
    for ch in text.strip():
        if ch.isspace():
            continue
        idx = ALPHABET.find(ch.lower())
        if idx < 0:
            raise WordParseError(f"invalid letter {ch!r} in word {text!r}")
        if n is not None and idx >= n:
            raise WordParseError(f"letter {ch!r} outside the {n} generators of this surface")
        out.append(idx + 1 if ch.islower() else -(idx + 1))
    return tuple(out)


def reduce(w: Iterable[Letter]) -> Word:
    """Free reduction."""
    stack: List[Letter] = []
    for letter in w:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def inverse(w: Sequence[Letter]) -> Word:
    return tuple(-letter for letter in reversed(w))


def cyclic_reduce(w: Iterable[Letter]) -> Word:
    r = reduce(w)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == -r[j - 1]:
        i += 1
        j -= 1
    return r[i:j]


def rotate(w: Sequence[Letter], i: int) -> Word:
    if not w:
        return ()
    i %= len(w)
    return tuple(w[i:]) + tuple(w[:i])


def canonical_cyclic(w: Iterable[Letter]) -> CyclicWord:
    """Cyclically reduce, then pick the minimal rotation under the letter order."""
    r = cyclic_reduce(w)
    if not r:
        return ()
    keys = word_key(r)
    n = len(r)
    best = 0
    best_key = keys
    for i in range(1, n):
        cand = keys[i:] + keys[:i]
        if cand < best_key:
            best, best_key = i, cand
    return r[best:] + r[:best]


def undirected_canonical(w: Iterable[Letter]) -> CyclicWord:
    fwd = canonical_cyclic(w)
    bwd = canonical_cyclic(inverse(fwd))
    return fwd if word_key(fwd) <= word_key(bwd) else bwd


def primitive_root(w: Sequence[Letter]) -> Tuple[CyclicWord, int]:
    """Shortest r and m >= 1 with w = r^m as cyclic words."""
    c = canonical_cyclic(w)
    n = len(c)
    if n == 0:
        raise ValueError("the trivial class has no primitive root")
    for d in range(1, n + 1):
        if n % d == 0 and all(c[i] == c[(i + d) % n] for i in range(n)):
            return canonical_cyclic(c[:d]), n // d
    raise AssertionError("unreachable")


def power(w: Sequence[Letter], m: int) -> Word:
    if m < 0:
        return tuple(inverse(w)) * (-m)
    return tuple(w) * m


def random_word(rng: random.Random, n: int, max_len: int, min_len: int = 1) -> Word:
    """Random cyclically reduced word of length in [min_len, max_len]."""
    length = rng.randint(min_len, max_len)
    letters = [k for k in range(1, n + 1)] + [-k for k in range(1, n + 1)]
    while True:
        w: List[Letter] = []
        for _ in range(length):
            choices = [x for x in letters if not w or x != -w[-1]]
            w.append(rng.choice(choices))
        if length < 2 or w[0] != -w[-1]:
            return tuple(w)


# -----------------------------
# Conjugacy classes
# -----------------------------
@dataclass(frozen=True, order=False)
class DirectedClass:
    """
    Conjugacy class of the free group, i.e. free homotopy class of a
    directed closed curve.

    Fields:
    - word: canonical cyclic word (minimal rotation); () is the trivial class
    """
    word: CyclicWord

    @classmethod
    def of(cls, w: Iterable[Letter]) -> "DirectedClass":
        return cls(canonical_cyclic(w))

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "DirectedClass":
        return cls.of(parse_word(text, n))

    def inverse(self) -> "DirectedClass":
        return DirectedClass.of(inverse(self.word))

    def undirected(self) -> "UndirectedClass":
        return UndirectedClass.of(self.word)

    def __lt__(self, other: "DirectedClass") -> bool:
        return class_key(self.word) < class_key(other.word)

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return format_word(self.word)


@dataclass(frozen=True, order=False)
class UndirectedClass:
    """
    Free homotopy class of an undirected closed curve: a conjugacy class
    up to inversion.

    Fields:
    - word: min of the canonical forms of w and w^-1
    """
    word: CyclicWord

    @classmethod
    def of(cls, w: Iterable[Letter]) -> "UndirectedClass":
        return cls(undirected_canonical(w))

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "UndirectedClass":
        return cls.of(parse_word(text, n))

    def directed(self) -> DirectedClass:
        return DirectedClass(self.word)

    def root(self) -> Tuple["UndirectedClass", int]:
        r, m = primitive_root(self.word)
        return UndirectedClass.of(r), m

    def is_trivial(self) -> bool:
        return not self.word

    def __lt__(self, other: "UndirectedClass") -> bool:
        return class_key(self.word) < class_key(other.word)

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return format_word(self.word)


# -----------------------------
# Surfaces
# -----------------------------
def _boundary_orbits(n: int, ribbon: Sequence[Letter]) -> List[Word]:
    """
    Fatgraph boundary walk: leave along half-edge h, arrive at the opposite
    end -h, turn to the next half-edge in the cyclic order.
    """
    pos = {letter: i for i, letter in enumerate(ribbon)}
    size = len(ribbon)
    seen: set = set()
    orbits: List[Word] = []
    for start in ribbon:
        if start in seen:
            continue
        orbit: List[Letter] = []
        h = start
        while h not in seen:
            seen.add(h)
            orbit.append(h)
            h = ribbon[(pos[-h] + 1) % size]
        orbits.append(tuple(orbit))
    return orbits


@dataclass(frozen=True)
class SurfacePresentation:
    """
    A surface with free fundamental group, given by the ribbon structure
    of its one-vertex spine.

    Fields:
    - name:        short surface key ('pants', 'torus1', ...)
    - n:           number of free generators
    - ribbon:      cyclic order of the 2n half-edges at the spine vertex
    - peripheral:  boundary classes derived from the ribbon
    """
    name: str
    n: int
    ribbon: Tuple[Letter, ...]
    peripheral: Tuple[UndirectedClass, ...] = field(default=())
    description: str = ""

    @classmethod
    def build(
        cls,
        name: str,
        n: int,
        ribbon: Sequence[Letter],
        expected_boundaries: Optional[int] = None,
        description: str = "",
    ) -> "SurfacePresentation":
        wanted = {k for k in range(1, n + 1)} | {-k for k in range(1, n + 1)}
        if len(ribbon) != 2 * n or set(ribbon) != wanted:
            raise RibbonError(
                f"ribbon {format_word(ribbon)} must contain each of the {2 * n} letters exactly once"
            )
        orbits = _boundary_orbits(n, ribbon)
        if expected_boundaries is not None and len(orbits) != expected_boundaries:
            raise RibbonError(
                f"surface {name}: ribbon gives {len(orbits)} boundary cycles, expected {expected_boundaries}"
            )
        peripheral = tuple(sorted({UndirectedClass.of(o) for o in orbits}))
        return cls(name=name, n=n, ribbon=tuple(ribbon), peripheral=peripheral, description=description)

    @property
    def genus(self) -> int:
        # 1 - n = 2 - 2g - b
        return (1 + self.n - len(self.boundary_words())) // 2

    def boundary_words(self) -> List[Word]:
        return _boundary_orbits(self.n, self.ribbon)

    def parse(self, text: str) -> Word:
        return parse_word(text, self.n)

    def ribbon_str(self) -> str:
        return format_word(self.ribbon)


def boundary_cycles(s: SurfacePresentation) -> List[UndirectedClass]:
    """Boundary walks of the ribbon graph, one class per walk."""
    return [UndirectedClass.of(o) for o in s.boundary_words()]


def is_peripheral(c: UndirectedClass, s: SurfacePresentation) -> bool:
    """Trivial, or a positive power of a boundary class."""
    if c.is_trivial():
        return True
    root, _ = c.root()
    return root in s.peripheral


# -----------------------------
# Enumeration
# -----------------------------
def _cyclically_reduced_words(n: int, length: int) -> Iterable[Word]:
    letters = [k for k in range(1, n + 1)] + [-k for k in range(1, n + 1)]
    if length == 0:
        yield ()
        return

    def extend(prefix: List[Letter]):
        if len(prefix) == length:
            if length < 2 or prefix[0] != -prefix[-1]:
                yield tuple(prefix)
            return
        for letter in letters:
            if prefix and letter == -prefix[-1]:
                continue
            prefix.append(letter)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def enumerate_classes(n: int, max_len: int, undirected: bool = True) -> List:
    """
    All distinct classes of cyclic length <= max_len over F_n, length-lex
    ordered. Dedup is by canonical form over every cyclically reduced string.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    canon = undirected_canonical if undirected else canonical_cyclic
    found: Dict[CyclicWord, None] = {}
    for length in range(max_len + 1):
        for w in _cyclically_reduced_words(n, length):
            found.setdefault(canon(w), None)
    words = sorted(found, key=class_key)
    cls = UndirectedClass if undirected else DirectedClass
    logger.debug(f"enumerated {len(words)} classes (n={n}, L={max_len}, undirected={undirected})")
    return [cls(w) for w in words]


def surface_classes(s: SurfacePresentation, max_len: int, undirected: bool = True) -> List:
    return enumerate_classes(s.n, max_len, undirected)
