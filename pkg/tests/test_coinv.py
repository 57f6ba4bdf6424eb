import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catoshadow.coinv import (
    HilbertSeries,
    MultiPoly,
    build_coinvariants,
    cached_coinvariants,
    demazure,
    demazure_word,
    invariant_subalgebra,
    monomials,
    product_formula,
    root_poly,
    structure_algebra_hilbert_series,
    truncated_coeffs,
    w_act,
)
from catoshadow import linalg
from catoshadow.weyl import all_subsets, weyl_group
from oracles import molien_coeffs, product_formula_oracle, structure_algebra_oracle

TYPES = ["A1", "A2", "B2", "A3"]


def random_poly(rng, n, degree, terms=4):
    mons = [m for d in range(degree + 1) for m in monomials(n, d)]
    return MultiPoly(n, {rng.choice(mons): Fraction(rng.randint(-3, 3)) for _ in range(terms)})


# ---- W-action and Demazure operators --------------------------------

def test_w_act_examples():
    G = weyl_group("A1")
    x = MultiPoly.var(1, 0)
    assert w_act(G, G.identity, x) == x
    assert w_act(G, G.simple(0), x) == -x


def test_demazure_examples():
    G = weyl_group("A1")
    x = MultiPoly.var(1, 0)
    assert demazure(G, 0, x * x).is_zero()
    assert demazure(G, 0, x) == MultiPoly.const(1, 1)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_w_action_is_a_group_action(name):
    G = weyl_group(name)
    rng = random.Random(3)
    f = random_poly(rng, G.rank, 3)
    for x, y in itertools.islice(itertools.product(G.elements, repeat=2), 150):
        assert w_act(G, G.mul(x, y), f) == w_act(G, x, w_act(G, y, f))


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_demazure_identities(name):
    G = weyl_group(name)
    rng = random.Random(7)
    for _ in range(5):
        f = random_poly(rng, G.rank, 4)
        g = random_poly(rng, G.rank, 3)
        for i in range(G.rank):
            s = G.simple(i)
            assert demazure(G, i, demazure(G, i, f)).is_zero()
            # twisted Leibniz rule
            lhs = demazure(G, i, f * g)
            rhs = demazure(G, i, f) * g + w_act(G, s, f) * demazure(G, i, g)
            assert lhs == rhs
            # the image is s_i-invariant
            d = demazure(G, i, f)
            assert w_act(G, s, d) == d
            # definition
            assert d * root_poly(G, i) == f - w_act(G, s, f)


@pytest.mark.parametrize("name,m", [("A2", 3), ("B2", 4), ("G2", 6)])
def test_demazure_braid_relations(name, m):
    G = weyl_group(name)
    rng = random.Random(5)
    f = random_poly(rng, 2, m + 1, terms=6)
    w1 = [k % 2 for k in range(m)]
    w2 = [(k + 1) % 2 for k in range(m)]
    assert demazure_word(G, w1, f) == demazure_word(G, w2, f)


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_two_reduced_words_of_longest_element(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    m = G.longest.length
    top = C.schubert_polys[G.index(G.longest)]
    for start in (0, 1):
        word = [(start + k) % 2 for k in range(m)]
        assert G.from_word(word) == G.longest
        assert demazure_word(G, word, top) == MultiPoly.const(2, 1)


# ---- coinvariant algebra ----------------------------------------------

@pytest.mark.parametrize("name,series", [("A1", [1, 1]), ("A2", [1, 2, 2, 1]), ("B2", [1, 2, 2, 2, 1])])
def test_hilbert_series_examples(name, series):
    C = cached_coinvariants(weyl_group(name))
    assert list(C.hilbert_series().coeffs) == series


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "A3", "G2", "B3"])
def test_dimension_and_hilbert_series(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    assert C.dimension == len(G)
    assert list(C.hilbert_series().coeffs) == product_formula_oracle(G.datum.degrees)
    assert C.hilbert_series() == product_formula(G.datum.degrees)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_invariant_ring_matches_molien_series(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    expected = molien_coeffs(G, 6)
    assert expected[0] == 1
    for k in range(1, 7):
        mons = monomials(G.rank, k)
        rows = [[f.terms.get(m, 0) for m in mons] for f in C._invariants(k)]
        assert (linalg.rank(rows, len(mons)) if rows else 0) == expected[k], k


@pytest.mark.parametrize("name", TYPES + ["B3"])
def test_schubert_normalization_and_positivity(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    assert C.schubert_polys[0] == MultiPoly.const(G.rank, 1)
    for k, f in enumerate(C.schubert_polys):
        assert f.is_homogeneous() and f.degree() == G.lengths[k]
    for (u, v), entry in C.mult_table.items():
        for w, c in entry.items():
            assert c > 0 and c.denominator == 1
            assert G.lengths[w] == G.lengths[u] + G.lengths[v]


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_schubert_vectors_round_trip(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    for k, f in enumerate(C.schubert_polys):
        vec = C.to_vector(f)
        assert vec == [Fraction(int(j == k)) for j in range(len(G))]
        assert C.to_vector(C.from_vector(vec)) == vec
    for f in C.invariant_generators:
        assert C.reduces_to_zero(f)


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_multiplication_is_associative_and_commutative(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    rng = random.Random(1)
    for _ in range(5):
        a, b, c = ([Fraction(rng.randint(-2, 2)) for _ in G.elements] for _ in range(3))
        assert C.multiply(a, b) == C.multiply(b, a)
        assert C.multiply(C.multiply(a, b), c) == C.multiply(a, C.multiply(b, c))


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "A3", "B3"])
def test_regular_character(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    for w in G.elements:
        assert C.trace(w) == (len(G) if w.length == 0 else 0)


def test_tampered_normalization_is_detected():
    G = weyl_group("A2")
    C = build_coinvariants(G, schubert_scale=Fraction(6))
    assert C.schubert_polys[0] == MultiPoly.const(2, 6)


# ---- invariant subalgebras -------------------------------------------

@pytest.mark.parametrize("name", TYPES)
def test_invariant_subalgebras_for_all_standard_parabolics(name):
    G = weyl_group(name)
    C = cached_coinvariants(G)
    for gens in all_subsets(G.rank):
        par = G.standard_parabolic(gens)
        sub = invariant_subalgebra(C, par)
        assert sub.dimension == len(G) // len(par)
        counts = [0] * (C.top + 1)
        for u in G.coset_reps(par, "left", "min"):
            counts[u.length] += 1
        assert sub.hilbert == HilbertSeries(counts)


def test_invariant_subalgebra_examples():
    G = weyl_group("A2")
    C = cached_coinvariants(G)
    assert invariant_subalgebra(C, G.standard_parabolic([])).dimension == 6
    full = invariant_subalgebra(C, G.standard_parabolic([0, 1]))
    assert full.dimension == 1 and full.degrees == (0,)
    half = invariant_subalgebra(C, G.standard_parabolic([0]))
    assert half.dimension == 3
    assert list(half.hilbert.coeffs) == [1, 1, 1]


# ---- structure algebra series ----------------------------------------

def test_structure_algebra_examples():
    A1 = weyl_group("A1")
    assert truncated_coeffs(structure_algebra_hilbert_series(A1.datum, 2), 2) == [1, 2, 2]
    A2 = weyl_group("A2")
    assert truncated_coeffs(structure_algebra_hilbert_series(A2.datum, 1), 1) == [1, 4]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["A1", "A2", "B2", "G2", "A3", "B3"]), st.integers(0, 8))
def test_structure_algebra_matches_series_oracle(name, n):
    datum = weyl_group(name).datum
    assert truncated_coeffs(structure_algebra_hilbert_series(datum, n), n) == structure_algebra_oracle(datum.degrees, n)
