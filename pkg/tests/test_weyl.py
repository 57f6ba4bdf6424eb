import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catoshadow.weyl import (
    ConfigurationError,
    UsageError,
    Weight,
    all_subsets,
    build_root_system,
    classify_weight,
    coset_reps,
    datum_from_dict,
    datum_to_dict,
    enumerate_weyl,
    group_from_dict,
    group_to_dict,
    parse_type,
    weyl_group,
)
from oracles import bruhat_subword, inversions, permutation_of_word, symmetric_group_poincare

ALL_TYPES = ["A1", "A2", "A3", "B2", "B3", "C3", "G2"]


@pytest.mark.parametrize("name,n_pos,degrees", [("A1", 1, (2,)), ("A2", 3, (2, 3)), ("B2", 4, (2, 4)),
                                                  ("A3", 6, (2, 3, 4)), ("G2", 6, (2, 6)), ("B3", 9, (2, 4, 6))])
def test_root_system_examples(name, n_pos, degrees):
    datum = build_root_system(*parse_type(name))
    assert len(datum.positive_roots) == n_pos
    assert tuple(datum.degrees) == degrees
    # sum of (d_i - 1) counts the positive roots
    assert sum(d - 1 for d in degrees) == n_pos
    assert datum.rho == Weight([1] * datum.rank)


def test_a1_rho_is_fundamental_weight():
    datum = build_root_system("A", 1)
    assert datum.rho.coords == (Fraction(1),)
    assert datum.simple_roots[0].coords == (Fraction(2),)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_cartan_matrix_pairs_roots_with_coroots(name):
    datum = build_root_system(*parse_type(name))
    for i in range(datum.rank):
        assert datum.cartan_matrix[i][i] == 2
        for j in range(datum.rank):
            assert datum.simple_roots[j].coords[i] == datum.cartan_matrix[i][j]
            if i != j:
                assert datum.cartan_matrix[i][j] <= 0
                assert (datum.cartan_matrix[i][j] == 0) == (datum.cartan_matrix[j][i] == 0)


@pytest.mark.parametrize("name,order,l0", [("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("B2", 8, 4),
                                           ("G2", 12, 6), ("B3", 48, 9), ("C3", 48, 9)])
def test_group_order_and_longest(name, order, l0):
    G = weyl_group(name)
    assert len(G) == order
    assert G.longest.length == l0
    assert all(w.length <= l0 for w in G.elements)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_type_a_matches_symmetric_group(n):
    G = weyl_group(f"A{n}")
    perms = {permutation_of_word(w.word, n) for w in G.elements}
    assert len(perms) == len(G)
    for w in G.elements:
        assert inversions(permutation_of_word(w.word, n)) == w.length
    assert G.poincare_polynomial() == symmetric_group_poincare(n)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "A3", "G2"])
def test_bruhat_equals_subword_oracle(name):
    G = weyl_group(name)
    below = bruhat_subword(G)
    for x in G.elements:
        for y in G.elements:
            assert G.bruhat_leq(x, y) == (x in below[y]), (x, y)


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_bruhat_two_algorithms(name):
    G = weyl_group(name)
    assert np.array_equal(G.bruhat_matrix, G.bruhat_by_reflections())


@pytest.mark.parametrize("name", ALL_TYPES)
def test_normal_forms_are_unique_and_reduced(name):
    G = weyl_group(name)
    words = [w.word for w in G.elements]
    assert len(set(words)) == len(words)
    for w in G.elements:
        assert len(w.word) == w.length
        # shortlex minimality: no other reduced word for w is smaller
        assert G.from_word(w.word) == w
    # breadth-first order
    assert [w.length for w in G.elements] == sorted(w.length for w in G.elements)


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_length_properties(name):
    G = weyl_group(name)
    for w in G.elements:
        assert G.length(G.inverse(w)) == w.length
        assert G.length(G.mul(w, G.longest)) == G.longest.length - w.length
        for i in range(G.rank):
            ws = G.mul(w, G.simple(i))
            assert abs(ws.length - w.length) == 1
            assert (i in G.descents(w, "right")) == (ws.length < w.length)
            sw = G.mul(G.simple(i), w)
            assert (i in G.descents(w, "left")) == (sw.length < w.length)


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_reflection_matrices_form_a_representation(name):
    G = weyl_group(name)
    for x, y in itertools.product(G.elements, repeat=2):
        assert np.array_equal(G.matrix(G.mul(x, y)), G.matrix(x).dot(G.matrix(y)))


def test_dot_action_examples():
    G = weyl_group("A1")
    zero = Weight.zero(1)
    s = G.simple(0)
    assert G.dot_action(G.identity, zero) == zero
    assert G.dot_action(s, zero) == Weight([-2])
    for name in ALL_TYPES:
        H = weyl_group(name)
        for w in H.elements:
            assert H.dot_action(w, -H.datum.rho) == -H.datum.rho


weights = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=2, max_size=2)


@settings(max_examples=60, deadline=None)
@given(weights, st.integers(0, 5), st.integers(0, 5))
def test_dot_action_is_a_group_action(coords, i, j):
    G = weyl_group("A2")
    lam = Weight(coords)
    x, y = G.elements[i], G.elements[j]
    assert G.dot_action(G.mul(x, y), lam) == G.dot_action(x, G.dot_action(y, lam))


def test_stabilizer_examples():
    G = weyl_group("A2")
    assert len(G.stabilizer_dot(Weight([0, 0]))) == 1
    assert len(G.stabilizer_dot(-G.datum.rho)) == 6
    # <lam+rho, coroot_1> = 0, <lam+rho, coroot_2> = 1
    stab = G.stabilizer_dot(Weight([-1, 0]))
    assert set(stab.subgroup_elements) == {G.identity, G.simple(0)}


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_stabilizer_matches_orbit(name):
    G = weyl_group(name)
    for walls in all_subsets(G.rank):
        lam = Weight([-1 if i in walls else 0 for i in range(G.rank)])
        stab = G.stabilizer_dot(lam)
        brute = {w for w in G.elements if G.dot_action(w, lam) == lam}
        assert set(stab.subgroup_elements) == brute
        assert len({G.dot_action(w, lam) for w in G.elements}) == len(G) // len(stab)


def test_classify_examples():
    datum = build_root_system("A", 2)
    f = classify_weight(datum, Weight([0, 0]))
    assert (f.integral, f.regular, f.rho_dominant) == (True, True, True)
    f = classify_weight(datum, -datum.rho)
    assert (f.integral, f.regular, f.rho_dominant) == (True, False, True)
    a1 = build_root_system("A", 1)
    f = classify_weight(a1, Weight([-2]))
    assert (f.integral, f.regular, f.rho_dominant) == (True, True, False)
    f = classify_weight(a1, Weight([Fraction(1, 2)]))
    assert not f.integral


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_coset_representatives(name):
    G = weyl_group(name)
    for gens in all_subsets(G.rank):
        par = G.standard_parabolic(gens)
        for side in ("left", "right"):
            mins = coset_reps(G, par, side, "min")
            maxs = coset_reps(G, par, side, "max")
            assert len(mins) == len(maxs) == len(G) // len(par)
            for u in mins:
                coset = {G.mul(u, p) if side == "left" else G.mul(p, u) for p in par.subgroup_elements}
                assert u.length == min(w.length for w in coset)
                (top,) = [m for m in maxs if m in coset]
                assert top.length == max(w.length for w in coset)


def test_coset_example_a2():
    G = weyl_group("A2")
    par = G.standard_parabolic([0])
    assert len(par) == 2
    assert len(G.coset_reps(par, "left", "min")) == 3


def test_mismatched_group_is_usage_error():
    A2, B2 = weyl_group("A2"), weyl_group("B2")
    with pytest.raises(UsageError):
        A2.bruhat_leq(B2.longest, A2.identity)
    with pytest.raises(UsageError):
        A2.from_word([5])


@pytest.mark.parametrize("type_name", ["A5", "A0", "E6", "D2", "Q2", "2A"])
def test_unsupported_types(type_name):
    with pytest.raises(ConfigurationError):
        weyl_group(type_name)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_json_round_trip(name):
    G = weyl_group(name)
    blob = json.dumps(group_to_dict(G))
    H = group_from_dict(json.loads(blob))
    assert group_to_dict(H) == group_to_dict(G)
    assert datum_to_dict(datum_from_dict(json.loads(json.dumps(datum_to_dict(G.datum))))) == datum_to_dict(G.datum)
    data = json.loads(blob)
    assert all(isinstance(i, int) and 0 <= i < G.rank for w in data["elements"] for i in w)


def test_f4_enumerates_to_full_order():
    # the largest supported group; enumeration checks |W| against prod d_i
    G = enumerate_weyl(build_root_system("F", 4))
    assert len(G) == 1152
