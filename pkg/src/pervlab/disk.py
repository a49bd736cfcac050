"""Perverse sheaves on a disk with one marked point, as quiver data.

An object is a pair of vector spaces (nearby ``Ψ``, vanishing ``Φ``) with maps
``can: Ψ -> Φ`` and ``var: Φ -> Ψ`` such that ``I + var·can`` is invertible.
Conventions: ``var·can = T - I`` on Ψ and ``can·var = T - I`` on Φ.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import qlinalg as ql
from .qlinalg import RatMatrix, identity, zeros

__all__ = [
    "InvalidGlue",
    "DiskPerv",
    "DiskMap",
    "mk_disk_perv",
    "from_local_system",
    "skyscraper_disk",
    "monodromy_psi",
    "monodromy_phi",
    "kernel",
    "cokernel",
    "image",
    "is_mono",
    "is_epi",
    "is_iso",
    "identity_map",
    "zero_map",
    "canonical_map",
    "is_short_exact",
]


class InvalidGlue(ValueError):
    """Quiver data that does not come from a perverse sheaf."""


def _invertible(M: RatMatrix) -> bool:
    return ql.rank(M) == M.rows


@dataclass(frozen=True)
class DiskPerv:
    psi_dim: int
    phi_dim: int
    can: RatMatrix
    var: RatMatrix

    def __post_init__(self):
        if self.can.shape != (self.phi_dim, self.psi_dim):
            raise ValueError(f"can must be {self.phi_dim}x{self.psi_dim}, got {self.can.shape}")
        if self.var.shape != (self.psi_dim, self.phi_dim):
            raise ValueError(f"var must be {self.psi_dim}x{self.phi_dim}, got {self.var.shape}")
        a = _invertible(identity(self.psi_dim) + self.var @ self.can)
        b = _invertible(identity(self.phi_dim) + self.can @ self.var)
        # the two conditions are equivalent (Sylvester); disagreement is a bug
        assert a == b
        if not a:
            raise InvalidGlue("I + var·can is singular")

    def is_zero(self) -> bool:
        return self.psi_dim == 0 and self.phi_dim == 0

    def to_json(self) -> dict:
        return {
            "psi_dim": self.psi_dim,
            "phi_dim": self.phi_dim,
            "can": ql.matrix_to_json(self.can),
            "var": ql.matrix_to_json(self.var),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DiskPerv":
        p, f = int(obj["psi_dim"]), int(obj["phi_dim"])
        return cls(p, f, ql.parse_matrix(obj["can"], f, p), ql.parse_matrix(obj["var"], p, f))


@dataclass(frozen=True)
class DiskMap:
    source: DiskPerv
    target: DiskPerv
    on_psi: RatMatrix
    on_phi: RatMatrix

    def __post_init__(self):
        s, t = self.source, self.target
        if self.on_psi.shape != (t.psi_dim, s.psi_dim):
            raise ValueError("on_psi has the wrong shape")
        if self.on_phi.shape != (t.phi_dim, s.phi_dim):
            raise ValueError("on_phi has the wrong shape")
        if self.on_phi @ s.can != t.can @ self.on_psi:
            raise ValueError("map does not commute with can")
        if self.on_psi @ s.var != t.var @ self.on_phi:
            raise ValueError("map does not commute with var")

    def compose(self, other: "DiskMap") -> "DiskMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return DiskMap(other.source, self.target, self.on_psi @ other.on_psi, self.on_phi @ other.on_phi)

    def is_zero(self) -> bool:
        return self.on_psi.is_zero() and self.on_phi.is_zero()

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "on_psi": ql.matrix_to_json(self.on_psi),
            "on_phi": ql.matrix_to_json(self.on_phi),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DiskMap":
        s, t = DiskPerv.from_json(obj["source"]), DiskPerv.from_json(obj["target"])
        return cls(
            s,
            t,
            ql.parse_matrix(obj["on_psi"], t.psi_dim, s.psi_dim),
            ql.parse_matrix(obj["on_phi"], t.phi_dim, s.phi_dim),
        )


def mk_disk_perv(psi_dim: int, phi_dim: int, can: RatMatrix, var: RatMatrix) -> DiskPerv:
    return DiskPerv(psi_dim, phi_dim, can, var)


def skyscraper_disk(d: int) -> DiskPerv:
    return DiskPerv(0, d, zeros(d, 0), zeros(0, d))


def monodromy_psi(X: DiskPerv) -> RatMatrix:
    return identity(X.psi_dim) + X.var @ X.can


def monodromy_phi(X: DiskPerv) -> RatMatrix:
    return identity(X.phi_dim) + X.can @ X.var


def identity_map(X: DiskPerv) -> DiskMap:
    return DiskMap(X, X, identity(X.psi_dim), identity(X.phi_dim))


def zero_map(X: DiskPerv, Y: DiskPerv) -> DiskMap:
    return DiskMap(X, Y, zeros(Y.psi_dim, X.psi_dim), zeros(Y.phi_dim, X.phi_dim))


def canonical_map(T: RatMatrix) -> DiskMap:
    """The canonical morphism from the shriek to the star extension of ``T``."""
    n = T.rows
    N = T - identity(n)
    shriek = DiskPerv(n, n, identity(n), N)
    star = DiskPerv(n, n, N, identity(n))
    return DiskMap(shriek, star, identity(n), N)


def from_local_system(T: RatMatrix, mode: str = "intermediate") -> DiskPerv:
    """Extend the local system with monodromy ``T`` across the puncture.

    ``mode`` is ``"shriek"``, ``"star"`` or ``"intermediate"`` (the image of
    the canonical map shriek -> star).
    """
    if not T.is_square() or not _invertible(T):
        raise ValueError("monodromy must be an invertible square matrix")
    f = canonical_map(T)
    if mode == "shriek":
        return f.source
    if mode == "star":
        return f.target
    if mode == "intermediate":
        return image(f)[0]
    raise ValueError(f"unknown extension mode {mode!r}")


def _restrict(K_out: RatMatrix, g: RatMatrix, K_in: RatMatrix) -> RatMatrix:
    # matrix of g restricted to span(K_in), landing in span(K_out)
    X = ql.solve(K_out, g @ K_in)
    if X is None:
        raise AssertionError("map does not preserve the subspaces")
    return X


def kernel(f: DiskMap) -> tuple[DiskPerv, DiskMap]:
    s = f.source
    Kp = ql.kernel_basis(f.on_psi).basis
    Kf = ql.kernel_basis(f.on_phi).basis
    K = DiskPerv(Kp.cols, Kf.cols, _restrict(Kf, s.can, Kp), _restrict(Kp, s.var, Kf))
    return K, DiskMap(K, s, Kp, Kf)


def image(f: DiskMap) -> tuple[DiskPerv, DiskMap]:
    t = f.target
    Ip = ql.image_basis(f.on_psi).basis
    If = ql.image_basis(f.on_phi).basis
    I = DiskPerv(Ip.cols, If.cols, _restrict(If, t.can, Ip), _restrict(Ip, t.var, If))
    return I, DiskMap(I, t, Ip, If)


def cokernel(f: DiskMap) -> tuple[DiskPerv, DiskMap]:
    t = f.target
    cp = ql.cokernel_projection(f.on_psi)
    cf = ql.cokernel_projection(f.on_phi)
    C = DiskPerv(cp.dim, cf.dim, cf.induced(t.can, cp), cp.induced(t.var, cf))
    return C, DiskMap(t, C, cp.projection, cf.projection)


def is_mono(f: DiskMap) -> bool:
    return ql.rank(f.on_psi) == f.source.psi_dim and ql.rank(f.on_phi) == f.source.phi_dim


def is_epi(f: DiskMap) -> bool:
    return ql.rank(f.on_psi) == f.target.psi_dim and ql.rank(f.on_phi) == f.target.phi_dim


def is_iso(f: DiskMap) -> bool:
    return is_mono(f) and is_epi(f)


def is_short_exact(i: DiskMap, p: DiskMap) -> bool:
    """0 -> A -i-> B -p-> C -> 0 is exact (checked componentwise)."""
    if i.target != p.source:
        return False
    return (
        is_mono(i)
        and is_epi(p)
        and p.compose(i).is_zero()
        and i.target.psi_dim == i.source.psi_dim + p.target.psi_dim
        and i.target.phi_dim == i.source.phi_dim + p.target.phi_dim
    )
