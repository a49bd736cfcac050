import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pervlab import k0
from pervlab.k0 import NOT_APPLICABLE, K0Lattice, Realization, SphericalClass
from pervlab.monodromy import PLLattice, reflection
from pervlab.qlinalg import identity, parse_matrix, rank

from _gen import rand_matrix, rand_skew

M = parse_matrix
J2 = M([[0, 1], [-1, 0]])


def compatible(rng, n, k):
    """Random ``(sc, realization)`` with χ = ρᵀJρ and δ = ρ(s)."""
    J = rand_skew(rng, n, -2, 2)
    rho = rand_matrix(rng, n, k, -2, 2)
    s = tuple(rng.randint(-2, 2) for _ in range(k))
    lat = K0Lattice(k, rho.T @ J @ rho, odd_cy=True)
    return SphericalClass(lat, s), Realization(rho, PLLattice(n, J), rho.apply(s))


class TestTwist:
    def test_rank_two(self):
        sc = SphericalClass(K0Lattice(2, J2), (1, 0))
        # x -> x + χ(x, s) s with χ(x, e1) = -x_2
        assert k0.twist_matrix(sc) == M([[1, -1], [0, 1]])

    def test_fixes_its_class(self):
        sc = SphericalClass(K0Lattice(2, J2), (2, -1))
        assert k0.twist_matrix(sc).apply(sc.s) == sc.s

    def test_zero_class(self):
        sc = SphericalClass(K0Lattice(2, J2), (0, 0))
        assert k0.twist_matrix(sc) == identity(2)

    def test_conventions_agree_on_skew_forms(self):
        sc = SphericalClass(K0Lattice(2, J2), (1, 2))
        assert k0.twist_matrix(sc) == k0.twist_matrix(sc, st_convention=True)

    def test_conventions_differ_on_symmetric_forms(self):
        sc = SphericalClass(K0Lattice(2, M([[0, 1], [1, 0]])), (1, 0))
        assert k0.twist_matrix(sc) != k0.twist_matrix(sc, st_convention=True)

    def test_spherical_numerics(self):
        assert k0.is_spherical_numerically(SphericalClass(K0Lattice(2, J2), (1, 1)))
        assert not k0.is_spherical_numerically(SphericalClass(K0Lattice(1, M([[2]])), (1,)))

    def test_odd_cy_requires_skew(self):
        with pytest.raises(ValueError):
            K0Lattice(1, M([[2]]), odd_cy=True)

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            SphericalClass(K0Lattice(2, J2), (1,))


class TestIntertwining:
    def test_identity_realization(self):
        sc = SphericalClass(K0Lattice(2, J2, True), (1, 0))
        r = Realization(identity(2), PLLattice(2, J2), (1, 0))
        rep = k0.verify_intertwining(sc, r)
        assert rep.passed and rep.twist_rank == 1

    def test_wrong_delta(self):
        sc = SphericalClass(K0Lattice(2, J2, True), (1, 0))
        r = Realization(identity(2), PLLattice(2, J2), (0, 1))
        rep = k0.verify_intertwining(sc, r)
        assert not rep.passed
        assert rep.diagnostics[0].startswith("rho(s) != delta")
        assert rep.failed_columns

    def test_rank_three_k0(self):
        rho = M([[1, 0, 1], [0, 1, 0]])
        sc = SphericalClass(K0Lattice(3, rho.T @ J2 @ rho, True), (1, 0, 0))
        rep = k0.verify_intertwining(sc, Realization(rho, PLLattice(2, J2), (1, 0)))
        assert rep.passed
        assert rep.to_json()["pass"] is True

    def test_domain_mismatch(self):
        sc = SphericalClass(K0Lattice(3, M([[0] * 3] * 3)), (0, 0, 0))
        with pytest.raises(ValueError):
            k0.verify_intertwining(sc, Realization(identity(2), PLLattice(2, J2), (1, 0)))


class TestEulerPreservation:
    def test_skew(self):
        assert k0.twist_preserves_euler(SphericalClass(K0Lattice(2, J2), (1, 1))) is True

    def test_not_applicable(self):
        sc = SphericalClass(K0Lattice(2, M([[0, 1], [1, 0]])), (1, 0))
        assert k0.twist_preserves_euler(sc) == NOT_APPLICABLE


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_compatible_data_intertwine(seed):
    rng = random.Random(seed)
    sc, r = compatible(rng, rng.randint(1, 6), rng.randint(1, 5))
    rep = k0.verify_intertwining(sc, r)
    assert rep.passed and rep.twist_rank <= 1
    tw = k0.twist_matrix(sc)
    assert r.rho @ tw == reflection(r.target, r.delta) @ r.rho
    assert k0.twist_preserves_euler(sc) is True


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_twist_unipotent_rank_one(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 5)
    E = rand_skew(rng, k, -3, 3)
    sc = SphericalClass(K0Lattice(k, E, True), tuple(rng.randint(-3, 3) for _ in range(k)))
    N = k0.twist_matrix(sc) - identity(k)
    assert rank(N) <= 1 and (N @ N).is_zero()
