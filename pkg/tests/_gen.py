"""Random generators shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from pervlab import disk, milnor
from pervlab.qlinalg import RatMatrix, identity, inverse, rank, zeros


def rand_matrix(rng, rows, cols, lo=-3, hi=3):
    return RatMatrix(rows, cols, tuple(Fraction(rng.randint(lo, hi)) for _ in range(rows * cols)))


def rand_invertible(rng, n):
    while True:
        M = rand_matrix(rng, n, n)
        if rank(M) == n:
            return M


def rand_skew(rng, n, lo=-3, hi=3):
    A = rand_matrix(rng, n, n, lo, hi)
    return A - A.T


def rand_disk_perv(rng, max_dim=3):
    while True:
        p, f = rng.randint(0, max_dim), rng.randint(0, max_dim)
        can, var = rand_matrix(rng, f, p, -2, 2), rand_matrix(rng, p, f, -2, 2)
        if rank(identity(p) + var @ can) == p:
            return disk.DiskPerv(p, f, can, var)


def rand_disk_mono(rng, max_dim=3):
    """A random monomorphism A -> B, B an extension of A by C in disguise."""
    A, C = rand_disk_perv(rng, max_dim), rand_disk_perv(rng, max_dim)
    xc = rand_matrix(rng, A.phi_dim, C.psi_dim, -2, 2)
    xv = rand_matrix(rng, A.psi_dim, C.phi_dim, -2, 2)
    can = _block_upper(A.can, xc, C.can)
    var = _block_upper(A.var, xv, C.var)
    B0 = disk.DiskPerv(A.psi_dim + C.psi_dim, A.phi_dim + C.phi_dim, can, var)
    Pp, Pf = rand_invertible(rng, B0.psi_dim), rand_invertible(rng, B0.phi_dim)
    B = disk.DiskPerv(B0.psi_dim, B0.phi_dim, Pf @ B0.can @ inverse(Pp), Pp @ B0.var @ inverse(Pf))
    inc_p = Pp @ identity(B0.psi_dim).select_cols(range(A.psi_dim))
    inc_f = Pf @ identity(B0.phi_dim).select_cols(range(A.phi_dim))
    return disk.DiskMap(A, B, inc_p, inc_f)


def _block_upper(a, x, c):
    top = a.hstack(x)
    bottom = zeros(c.rows, a.cols).hstack(c)
    return top.vstack(bottom)


small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows=4, max_cols=4, rows=None, cols=None):
    r = draw(st.integers(0, max_rows)) if rows is None else rows
    c = draw(st.integers(0, max_cols)) if cols is None else cols
    vals = draw(st.lists(small_ints, min_size=r * c, max_size=r * c))
    return RatMatrix.from_rows([vals[i * c:(i + 1) * c] for i in range(r)], cols=c)


def rand_poly(rng, max_vars=3, max_deg=4):
    """Random polynomial, usually with a pure power in each variable."""
    n = rng.randint(1, max_vars)
    names = [f"x{i + 1}" for i in range(n)]
    terms = {}
    for i in range(n):
        if rng.random() < 0.85:
            m = [0] * n
            m[i] = rng.randint(2, max_deg)
            terms[tuple(m)] = rng.choice([1, 2, -1, 3])
    for _ in range(rng.randint(0, 3)):
        deg = rng.randint(2, max_deg)
        m = [0] * n
        for _ in range(deg):
            m[rng.randrange(n)] += 1
        terms[tuple(m)] = rng.choice([1, 2, 3, -1, -2, -3])
    return milnor.Poly(tuple(names), {m: Fraction(c) for m, c in terms.items()})
