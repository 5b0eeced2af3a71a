import itertools

import pytest

from app.errors import RibbonError, WordParseError
from app.services.surface_words import (
    DirectedClass,
    SurfacePresentation,
    UndirectedClass,
    boundary_cycles,
    canonical_cyclic,
    cyclic_reduce,
    enumerate_classes,
    format_word,
    inverse,
    is_peripheral,
    parse_word,
    power,
    primitive_root,
    random_word,
    reduce,
    rotate,
    undirected_canonical,
)


def w(text):
    return parse_word(text)


def test_parse_and_format():
    assert parse_word("aB") == (1, -2)
    assert parse_word(" a b ") == (1, 2)
    assert parse_word("1") == ()
    assert parse_word(" 1 ") == ()
    assert format_word((1, -2, 3)) == "aBc"
    assert parse_word("") == ()


@pytest.mark.parametrize("text,n", [("x?", None), ("c", 2), ("aC", 2), ("a1", None), ("1a", 2), ("11", None)])
def test_parse_rejects_bad_letters(text, n):
    with pytest.raises(WordParseError):
        parse_word(text, n)


def test_reduction():
    assert reduce(w("aAb")) == w("b")
    assert reduce(w("abBA")) == ()
    assert cyclic_reduce(w("Aaba")) == w("ba")
    assert cyclic_reduce(w("abA")) == w("b")
    assert inverse(w("aB")) == w("bA")
    assert power(w("ab"), -2) == w("BABA")


def test_canonical_forms():
    assert canonical_cyclic(w("ba")) == w("ab")
    assert canonical_cyclic(w("Ba")) == w("aB")
    assert undirected_canonical(w("bA")) == w("aB")
    assert UndirectedClass.parse("bA") == UndirectedClass.parse("aB")
    assert DirectedClass.parse("bA") != DirectedClass.parse("aB")
    assert DirectedClass.parse("bA") == DirectedClass.parse("aB").inverse()
    assert str(UndirectedClass.parse("Baaba")) == "aabaB"
    assert str(UndirectedClass.parse("baaBa")) == "aaBab"


def test_primitive_root():
    assert primitive_root(w("abab")) == (w("ab"), 2)
    assert primitive_root(w("baba")) == (w("ab"), 2)
    assert primitive_root(w("aab")) == (w("aab"), 1)
    root, m = UndirectedClass.parse("BABA").root()
    assert (str(root), m) == ("ab", 2)
    with pytest.raises(ValueError):
        primitive_root(())


def test_enumeration_counts_and_order():
    undirected = enumerate_classes(2, 2)
    assert [str(c) for c in undirected] == ["", "a", "b", "aa", "ab", "aB", "bb"]
    assert len(enumerate_classes(2, 1, undirected=False)) == 5
    assert len(enumerate_classes(2, 2, undirected=False)) == 13


def reduced_words(n, max_len):
    letters = [k for k in range(1, n + 1)] + [-k for k in range(1, n + 1)]
    out, frontier = [()], [()]
    for _ in range(max_len):
        frontier = [w + (l,) for w in frontier for l in letters if not w or l != -w[-1]]
        out.extend(frontier)
    return out


def test_canonical_forms_are_idempotent_and_rotation_invariant():
    for word in reduced_words(2, 8):
        c = canonical_cyclic(word)
        assert canonical_cyclic(c) == c
        for i in range(1, len(word)):
            assert canonical_cyclic(rotate(word, i)) == c, format_word(word)
        assert undirected_canonical(word) == undirected_canonical(inverse(word)), format_word(word)
        assert undirected_canonical(undirected_canonical(word)) == undirected_canonical(word)


def test_undirected_enumeration_matches_brute_force():
    letters = (1, 2, -1, -2)
    brute = {undirected_canonical(s) for k in range(4) for s in itertools.product(letters, repeat=k)}
    found = [c.word for c in enumerate_classes(2, 3)]
    assert set(found) == brute
    assert len(found) == len(brute) == 13


def test_enumeration_has_no_duplicates():
    classes = enumerate_classes(2, 5)
    words = [c.word for c in classes]
    assert len(words) == len(set(words))
    assert all(UndirectedClass.of(c.word) == c for c in classes)


def test_boundary_cycles(pants, torus, sphere4, genus2):
    assert {str(c) for c in boundary_cycles(pants)} == {"a", "b", "ab"}
    assert [str(c) for c in boundary_cycles(torus)] == ["abAB"]
    assert {str(c) for c in boundary_cycles(sphere4)} == {"a", "b", "c", "abc"}
    assert [str(c) for c in boundary_cycles(genus2)] == ["abABcdCD"]
    assert (pants.genus, torus.genus, sphere4.genus, genus2.genus) == (0, 1, 0, 2)


def test_boundary_walk_uses_every_half_edge_once(pants, torus, sphere4, genus2):
    for s in (pants, torus, sphere4, genus2):
        orbits = s.boundary_words()
        assert sum(len(o) for o in orbits) == 2 * s.n
        assert sorted(h for o in orbits for h in o) == sorted(s.ribbon)


def test_ribbon_validation():
    with pytest.raises(RibbonError):
        SurfacePresentation.build("bad", 2, w("aAb"))
    with pytest.raises(RibbonError):
        SurfacePresentation.build("bad", 2, w("aAbB"), expected_boundaries=1)


def test_peripheral(pants, torus, u):
    assert is_peripheral(u(pants, "aa"), pants)
    assert is_peripheral(u(pants, "BABA"), pants)
    assert not is_peripheral(u(pants, "aab"), pants)
    assert is_peripheral(u(torus, "BAba"), torus)
    assert is_peripheral(u(torus, ""), torus)
    assert not is_peripheral(u(torus, "a"), torus)


def test_random_words_are_cyclically_reduced(rng):
    for _ in range(200):
        word = random_word(rng, 3, 7)
        assert 1 <= len(word) <= 7
        assert cyclic_reduce(word) == word
