import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pervlab import disk
from pervlab.disk import DiskMap, DiskPerv, InvalidGlue
from pervlab.qlinalg import RatMatrix, identity, image_basis, parse_matrix, rank, unipotency_index, zeros

from _gen import rand_disk_mono, rand_disk_perv, rand_invertible, rand_matrix

M = parse_matrix
JORDAN = M([[1, 1], [0, 1]])


def test_constant_object_is_valid():
    X = disk.mk_disk_perv(1, 0, zeros(0, 1), zeros(1, 0))
    assert disk.monodromy_psi(X) == identity(1)


def test_singular_glue_rejected():
    with pytest.raises(InvalidGlue):
        disk.mk_disk_perv(1, 1, M([[1]]), M([[-1]]))


def test_unipotent_glue_accepted():
    X = disk.mk_disk_perv(2, 2, identity(2), JORDAN - identity(2))
    assert disk.monodromy_psi(X) == JORDAN


def test_shape_checked():
    with pytest.raises(ValueError):
        DiskPerv(1, 2, M([[1]]), M([[1, 0]]))


class TestLocalSystems:
    def test_trivial_intermediate(self):
        X = disk.from_local_system(M([[1]]), "intermediate")
        assert (X.psi_dim, X.phi_dim) == (1, 0)

    def test_trivial_shriek(self):
        X = disk.from_local_system(M([[1]]), "shriek")
        assert X == DiskPerv(1, 1, M([[1]]), M([[0]]))

    def test_jordan_shriek_monodromy(self):
        assert disk.monodromy_psi(disk.from_local_system(JORDAN, "shriek")) == JORDAN

    def test_jordan_intermediate_has_rank_one_phi(self):
        X = disk.from_local_system(JORDAN, "intermediate")
        assert X.phi_dim == 1
        assert unipotency_index(disk.monodromy_psi(X)) == 2

    def test_singular_monodromy_rejected(self):
        with pytest.raises(ValueError):
            disk.from_local_system(M([[0]]), "star")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            disk.from_local_system(JORDAN, "middle")


class TestSkyscraper:
    def test_rank_one(self):
        S = disk.skyscraper_disk(1)
        assert (S.psi_dim, S.phi_dim) == (0, 1) and S.can.is_zero() and S.var.is_zero()

    def test_zero(self):
        assert disk.skyscraper_disk(0).is_zero()

    def test_phi_monodromy_trivial(self):
        assert disk.monodromy_phi(disk.skyscraper_disk(3)) == identity(3)


class TestMonodromyConventions:
    def test_constant(self):
        assert disk.monodromy_psi(DiskPerv(1, 0, zeros(0, 1), zeros(1, 0))) == M([[1]])

    def test_can_only_package(self):
        X = DiskPerv(1, 1, M([[1]]), M([[0]]))
        assert disk.monodromy_psi(X) == identity(1)

    def test_var_only_package_is_unipotent(self):
        X = DiskPerv(1, 1, M([[0]]), M([[1]]))
        T = disk.monodromy_psi(X)
        assert T == identity(1)
        assert ((T - identity(1)) @ (T - identity(1))).is_zero()

    def test_odp_package_has_non_unipotent_monodromy(self):
        X = DiskPerv(1, 1, M([[1]]), M([[1]]))
        assert disk.monodromy_psi(X) == M([[2]])
        assert unipotency_index(disk.monodromy_psi(X)) is None


def _sky_inclusion():
    target = DiskPerv(1, 1, M([[1]]), M([[0]]))
    return DiskMap(disk.skyscraper_disk(1), target, zeros(1, 0), M([[1]]))


class TestAbelianOperations:
    def test_cokernel_of_skyscraper_inclusion(self):
        C, proj = disk.cokernel(_sky_inclusion())
        assert (C.psi_dim, C.phi_dim) == (1, 0)
        assert disk.is_epi(proj)

    def test_kernel_of_identity(self):
        X = disk.from_local_system(JORDAN, "star")
        K, _ = disk.kernel(disk.identity_map(X))
        assert K.is_zero()

    def test_image_of_canonical_map_is_intermediate(self):
        I, _ = disk.image(disk.canonical_map(M([[1]])))
        assert I == disk.from_local_system(M([[1]]), "intermediate")
        assert (I.psi_dim, I.phi_dim) == (1, 0)

    def test_mono_epi_iso(self):
        X = disk.from_local_system(JORDAN, "shriek")
        assert disk.is_iso(disk.identity_map(X))
        assert not disk.is_mono(disk.zero_map(X, X))
        f = _sky_inclusion()
        assert disk.is_mono(f) and not disk.is_epi(f)

    def test_non_commuting_map_rejected(self):
        X = DiskPerv(1, 1, M([[1]]), M([[0]]))
        with pytest.raises(ValueError):
            DiskMap(X, X, M([[1]]), M([[2]]))

    def test_json_roundtrip(self):
        f = _sky_inclusion()
        assert DiskMap.from_json(f.to_json()) == f
        X = f.target
        assert DiskPerv.from_json(X.to_json()) == X


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_glue_conditions_equivalent(seed):
    rng = random.Random(seed)
    p, f = rng.randint(0, 3), rng.randint(0, 3)
    can, var = rand_matrix(rng, f, p, -2, 2), rand_matrix(rng, p, f, -2, 2)
    a = rank(identity(p) + var @ can) == p
    b = rank(identity(f) + can @ var) == f
    assert a == b


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_exactness_of_random_monos(seed):
    f = rand_disk_mono(random.Random(seed))
    C, proj = disk.cokernel(f)
    assert disk.is_short_exact(f, proj)
    K, inc = disk.kernel(proj)
    assert image_basis(inc.on_psi) == image_basis(f.on_psi)
    assert image_basis(inc.on_phi) == image_basis(f.on_phi)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_kernel_cokernel_of_arbitrary_maps(seed):
    rng = random.Random(seed)
    f = rand_disk_mono(rng)
    # compose with a random endomorphism-free projection: f followed by its cokernel is zero
    C, p = disk.cokernel(f)
    assert p.compose(f).is_zero()
    K, inc = disk.kernel(p)
    I, _ = disk.image(p)
    assert K.psi_dim + I.psi_dim == p.source.psi_dim
    assert K.phi_dim + I.phi_dim == p.source.phi_dim


@given(st.integers(0, 10_000), st.sampled_from(["shriek", "star", "intermediate"]))
@settings(max_examples=40, deadline=None)
def test_extension_monodromy_conjugate_to_T(seed, mode):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    T = rand_invertible(rng, n)
    X = disk.from_local_system(T, mode)
    Tx = disk.monodromy_psi(X)
    N1, N2 = T - identity(n), Tx - identity(n)
    for k in range(1, n + 1):
        assert rank(N1.power(k)) == rank(N2.power(k))
    if mode == "intermediate":
        assert X.phi_dim == rank(T - identity(n))
