import itertools

import pytest

from app.services.bracket_algebra import (
    LinComb,
    SymPoly,
    bracket,
    chas_self_bracket,
    forget_direction,
    goldman_bracket,
    jacobi_sum,
    linked_pairs_tsv,
    poisson_bracket_sym,
    power_bracket,
    single,
    twg_bracket,
    twg_from_goldman,
    twg_raw_terms,
)
from app.services.cyclic_order import intersection_number_comb, is_simple
from app.services.surface_words import DirectedClass, UndirectedClass, enumerate_classes, power, random_word


def lc(s, *terms, directed=False):
    cls = DirectedClass if directed else UndirectedClass
    return LinComb.accumulate(((c, cls.parse(w, s.n)) for c, w in terms), directed=directed)


def nontrivial(s, max_len, undirected=True):
    return [c for c in enumerate_classes(s.n, max_len, undirected) if len(c)]


# -----------------------------
# LinComb
# -----------------------------
def test_lincomb_drops_zeros_and_sorts(pants):
    x = lc(pants, (1, "ab"), (2, "a"), (-1, "ab"))
    assert len(x) == 1
    assert x.to_json() == [{"word": "a", "coeff": 2}]
    assert str(x) == "+2⟨a⟩"
    assert str(LinComb.zero()) == "0"


def test_lincomb_arithmetic(pants):
    x = lc(pants, (1, "a"), (-1, "b"))
    y = lc(pants, (1, "b"), (3, "aB"))
    assert (x + y) == lc(pants, (1, "a"), (3, "aB"))
    assert (x - x).is_zero()
    assert (2 * x).total_multiplicity() == 4
    assert -x == lc(pants, (-1, "a"), (1, "b"))
    assert [t["word"] for t in (x + y + lc(pants, (1, "aab"))).to_json()] == ["a", "aB", "aab"]


# -----------------------------
# Golden brackets
# -----------------------------
def test_pants_aab_aB(pants, u):
    expected = lc(pants, (1, "baaBa"), (-1, "Baaba"))
    assert twg_bracket(u(pants, "aab"), u(pants, "aB"), pants) == expected
    assert twg_from_goldman(u(pants, "aab"), u(pants, "aB"), pants) == expected


def test_pants_aaB_aB(pants, u):
    # printed beside the torus example in the source; read as pair of pants data
    expected = lc(pants, (1, "aaBAb"), (-1, "aabAB"))
    assert twg_bracket(u(pants, "aaB"), u(pants, "aB"), pants) == expected


def test_torus_abAb_aB(torus, u):
    x, y = u(torus, "abAb"), u(torus, "aB")
    expected = lc(torus, (1, "aBBB"), (-1, "ABaBAb"), (-1, "AB"), (1, "aBABaB"))
    assert twg_bracket(x, y, torus) == expected
    assert twg_bracket(x, y, torus).total_multiplicity() == 2 * intersection_number_comb(x, y, torus)


def test_disjoint_classes_commute(pants, u):
    assert twg_bracket(u(pants, "a"), u(pants, "b"), pants).is_zero()
    assert goldman_bracket(DirectedClass.parse("a"), DirectedClass.parse("b"), pants).is_zero()


def test_directed_brackets(pants):
    d = lambda w: DirectedClass.parse(w, pants.n)  # noqa: E731
    assert goldman_bracket(d("aaB"), d("aB"), pants).is_zero()
    figure_eight = chas_self_bracket(d("aB"), pants)
    assert figure_eight == lc(pants, (1, "aBAb"), (-1, "abAB"), directed=True)
    assert goldman_bracket(d("aB"), d("aB"), pants).is_zero()


def test_self_bracket_counts_twice_the_self_intersection(pants):
    assert chas_self_bracket(DirectedClass.parse("aB"), pants).total_multiplicity() == 2
    assert power_bracket(DirectedClass.parse("a"), 3, pants).is_zero()


def test_negative_control_non_simple_x(pants, u):
    x, y = u(pants, "aab"), u(pants, "aB")
    assert not is_simple(x, pants)
    assert twg_bracket(x, y, pants).total_multiplicity() == 2
    assert intersection_number_comb(x, y, pants) == 2


def test_linked_dump(pants, u):
    rows = linked_pairs_tsv(u(pants, "aab"), u(pants, "aB"), pants).splitlines()
    assert rows[0].split("\t") == ["i", "j", "sign", "zero_smoothing", "infinity_smoothing"]
    assert len(rows) == 3
    assert rows[1].split("\t")[:3] == ["0", "0", "-1"]


# -----------------------------
# Properties
# -----------------------------
@pytest.mark.parametrize("surface_name", ["pants", "torus"])
def test_antisymmetry_and_forget_direction(surface_name, request):
    s = request.getfixturevalue(surface_name)
    classes = nontrivial(s, 3)
    for x, y in itertools.product(classes, repeat=2):
        xy = twg_bracket(x, y, s)
        assert xy == -twg_bracket(y, x, s), (str(x), str(y))
        assert twg_from_goldman(x, y, s) == xy, (str(x), str(y))


@pytest.mark.parametrize("surface_name", ["pants", "torus"])
def test_goldman_antisymmetry(surface_name, request):
    s = request.getfixturevalue(surface_name)
    classes = nontrivial(s, 3, undirected=False)
    for x, y in itertools.product(classes, repeat=2):
        assert goldman_bracket(x, y, s) == -goldman_bracket(y, x, s), (str(x), str(y))


def test_forget_direction_ignores_the_choice_of_lifts(torus, u):
    x, y = u(torus, "abAb"), u(torus, "aB")
    via_inverse = (
        goldman_bracket(x.directed().inverse(), y.directed(), torus)
        + goldman_bracket(x.directed().inverse(), y.directed().inverse(), torus)
    )
    assert forget_direction(via_inverse) == twg_bracket(x, y, torus)


def test_jacobi_examples(pants, torus, u):
    assert jacobi_sum(u(pants, "aab"), u(pants, "aB"), u(pants, "ab"), pants).is_zero()
    assert jacobi_sum(u(torus, "a"), u(torus, "b"), u(torus, "aB"), torus).is_zero()


@pytest.mark.parametrize("surface_name", ["pants", "torus"])
def test_jacobi_random(surface_name, request, rng):
    s = request.getfixturevalue(surface_name)
    for _ in range(30):
        x, y, z = (UndirectedClass.of(random_word(rng, s.n, 4)) for _ in range(3))
        assert jacobi_sum(x, y, z, s).is_zero(), (str(x), str(y), str(z))


def test_bilinear_extension(pants, u):
    x, y, z = u(pants, "aab"), u(pants, "aB"), u(pants, "ab")
    lhs = bracket(single(x) + 2 * single(z), single(y), pants)
    assert lhs == twg_bracket(x, y, pants) + 2 * twg_bracket(z, y, pants)


@pytest.mark.parametrize("surface_name", ["pants", "torus"])
def test_counting_theorem(surface_name, request):
    s = request.getfixturevalue(surface_name)
    classes = nontrivial(s, 4)
    for x in classes:
        if not is_simple(x, s):
            continue
        for y in classes:
            assert twg_bracket(x, y, s).total_multiplicity() == 2 * intersection_number_comb(x, y, s), (str(x), str(y))


def test_power_rule(torus, u):
    for x_word in ("a", "ab", "aB"):
        x = u(torus, x_word)
        for y in nontrivial(torus, 3):
            base = len(twg_raw_terms(x, y, torus))
            for m in range(2, 5):
                xm = UndirectedClass.of(power(x.word, m))
                assert len(twg_raw_terms(xm, y, torus)) == m * base


def test_peripheral_classes_are_central(pants, u):
    for c in ("a", "b", "ab", "aa", "abab"):
        for y in nontrivial(pants, 4):
            assert twg_bracket(u(pants, c), y, pants).is_zero(), (c, str(y))


# -----------------------------
# Symmetric algebra
# -----------------------------
def test_sympoly_base_case(pants, u):
    x, y = u(pants, "aab"), u(pants, "aB")
    got = poisson_bracket_sym(SymPoly.monomial(x), SymPoly.monomial(y), pants)
    assert got == SymPoly.from_lincomb(twg_bracket(x, y, pants))


def test_sympoly_square(pants, u):
    x, y = u(pants, "aab"), u(pants, "aB")
    got = poisson_bracket_sym(SymPoly.monomial(x, x), SymPoly.monomial(y), pants)
    expected = 2 * (SymPoly.monomial(x) * SymPoly.from_lincomb(twg_bracket(x, y, pants)))
    assert got == expected


def test_sympoly_leibniz_and_jacobi(torus, rng):
    def rand_mono():
        k = rng.randint(1, 2)
        return SymPoly.monomial(*(UndirectedClass.of(random_word(rng, 2, 3)) for _ in range(k)))

    for _ in range(20):
        p, q, r = rand_mono(), rand_mono(), rand_mono()
        assert poisson_bracket_sym(p, q * r, torus) == (
            poisson_bracket_sym(p, q, torus) * r + q * poisson_bracket_sym(p, r, torus)
        )
        jac = (
            poisson_bracket_sym(poisson_bracket_sym(p, q, torus), r, torus)
            + poisson_bracket_sym(poisson_bracket_sym(q, r, torus), p, torus)
            + poisson_bracket_sym(poisson_bracket_sym(r, p, torus), q, torus)
        )
        assert jac.is_zero()


def test_boundary_product_is_poisson_central(pants):
    ab = SymPoly.monomial(UndirectedClass.parse("a"), UndirectedClass.parse("b"))
    classes = nontrivial(pants, 4)
    checked = 0
    for length in range(1, 5):
        for mono in itertools.combinations_with_replacement(classes, length):
            if sum(len(c) for c in mono) <= 4:
                assert poisson_bracket_sym(ab, SymPoly.monomial(*mono), pants).is_zero(), [str(c) for c in mono]
                checked += 1
    assert checked > len(classes)


# -----------------------------
# Exhaustive
# -----------------------------
@pytest.mark.slow
@pytest.mark.parametrize("surface_name", ["pants", "torus"])
def test_exhaustive_identities_to_length_five(surface_name, request, rng):
    s = request.getfixturevalue(surface_name)
    classes = nontrivial(s, 5)
    for x, y in itertools.product(classes, repeat=2):
        xy = twg_bracket(x, y, s)
        assert xy == -twg_bracket(y, x, s)
        assert twg_from_goldman(x, y, s) == xy
    for _ in range(500):
        x, y, z = (UndirectedClass.of(random_word(rng, s.n, 5)) for _ in range(3))
        assert jacobi_sum(x, y, z, s).is_zero()
