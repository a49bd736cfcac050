import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pervlab import monodromy as pl
from pervlab.monodromy import PLLattice, VanishingSet
from pervlab.qlinalg import identity, parse_matrix, rank, unipotency_index

from _gen import rand_skew

M = parse_matrix
J2 = M([[0, 1], [-1, 0]])
L2 = PLLattice(2, J2)


def det(A):
    return sympy.Matrix(A.to_rows()).det()


class TestReflection:
    def test_first_basis_vector(self):
        assert pl.reflection(L2, (1, 0)) == M([[1, -1], [0, 1]])

    def test_second_basis_vector(self):
        assert pl.reflection(L2, (0, 1)) == M([[1, 0], [1, 1]])

    def test_action_matches_formula(self):
        T = pl.reflection(L2, (1, 0))
        a = (0, 1)
        # a + <a, d> d with <(0,1), (1,0)> = -1
        assert T.apply(a) == (-1, 1)

    def test_index_two(self):
        assert pl.check_unipotent(pl.reflection(L2, (1, 1))) == 2

    def test_zero_delta(self):
        assert pl.reflection(L2, (0, 0)) == identity(2)
        assert pl.check_unipotent(identity(2)) == 1

    def test_symmetric_self_pairing_minus_two_not_unipotent(self):
        L = PLLattice(1, M([[-2]]), "symmetric")
        T = pl.reflection(L, (1,))
        assert T == M([[-1]])
        assert pl.check_unipotent(T) is None

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            pl.reflection(L2, (1, 0, 0))

    def test_declared_symmetry_checked(self):
        with pytest.raises(ValueError):
            PLLattice(2, J2, "symmetric")
        with pytest.raises(ValueError):
            PLLattice(2, M([[1, 0], [0, 1]]), "skew")


class TestComposition:
    def test_order_matters_for_linked_classes(self):
        V = VanishingSet(L2, ((1, 0), (0, 1)))
        assert pl.compose_monodromy(V, [0, 1]) != pl.compose_monodromy(V, [1, 0])

    def test_orthogonal_classes_commute(self):
        L = PLLattice(4, pl.standard_symplectic(4))
        V = VanishingSet(L, ((1, 0, 0, 0), (0, 1, 0, 0)))
        T = pl.compose_monodromy(V)
        assert T == pl.compose_monodromy(V, [1, 0])
        assert unipotency_index(T) == 2

    def test_bad_order(self):
        V = VanishingSet(L2, ((1, 0),))
        with pytest.raises(ValueError):
            pl.compose_monodromy(V, [0, 0])


class TestQuiver:
    def test_linked_pair(self):
        V = VanishingSet(L2, ((1, 0), (0, 1)))
        Q = pl.intersection_quiver(V)
        assert Q["vertices"] == [1, 2]
        assert Q["edges"] == [(1, 2, 1)]

    def test_single_node(self):
        Q = pl.intersection_quiver(VanishingSet(L2, ((1, 0),)))
        assert Q == {"vertices": [1], "edges": []}

    def test_orthogonal_pair_has_no_edges(self):
        L = PLLattice(4, pl.standard_symplectic(4))
        Q = pl.intersection_quiver(VanishingSet(L, ((1, 0, 0, 0), (0, 1, 0, 0))))
        assert Q["edges"] == []

    def test_weights_match_pairing(self):
        L = PLLattice(4, pl.standard_symplectic(4))
        ds = ((1, 0, 0, 0), (0, 0, 2, 0), (0, 1, 0, -1))
        Q = pl.intersection_quiver(VanishingSet(L, ds))
        for i, j, w in Q["edges"]:
            assert w == L.pair(ds[i - 1], ds[j - 1])

    def test_serialisations(self):
        Q = pl.intersection_quiver(VanishingSet(L2, ((1, 0), (0, 1))))
        assert pl.quiver_to_json(Q) == {"vertices": [1, 2], "edges": [{"source": 1, "target": 2, "weight": 1}]}
        dot = pl.quiver_to_dot(Q)
        assert dot.startswith("digraph") and "1 -> 2" in dot

    def test_vanishing_set_json_roundtrip(self):
        V = VanishingSet(L2, ((1, 0), (0, 1)))
        W = VanishingSet.from_json(V.to_json())
        assert W.to_json() == V.to_json()


def test_standard_symplectic_needs_even_rank():
    with pytest.raises(ValueError):
        pl.standard_symplectic(3)


@given(st.integers(0, 100_000))
@settings(max_examples=80, deadline=None)
def test_reflection_properties(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    J = rand_skew(rng, n, -3, 3)
    L = PLLattice(n, J)
    d = tuple(rng.randint(-3, 3) for _ in range(n))
    T = pl.reflection(L, d)
    N = T - identity(n)
    assert (N @ N).is_zero()
    assert rank(N) <= 1
    assert T.T @ J @ T == J
    assert det(T) == 1
    assert T.apply(d) == tuple(d)
    assert T.is_integral()
