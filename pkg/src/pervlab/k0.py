"""Spherical twists on numerical Grothendieck groups.

A spherical class ``s`` in a lattice with Euler form ``E`` acts by the rank-one
reflection ``x -> x + χ(x, s) s`` with ``χ(x, y) = x^T E y``.  Setting
``st_convention`` uses ``x -> x - χ(s, x) s`` instead; the two agree whenever
``E`` is skew.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import qlinalg as ql
from .monodromy import PLLattice, reflection
from .qlinalg import RatMatrix, column, identity

__all__ = [
    "K0Lattice",
    "SphericalClass",
    "Realization",
    "IntertwiningReport",
    "NOT_APPLICABLE",
    "euler",
    "twist_matrix",
    "is_spherical_numerically",
    "verify_intertwining",
    "twist_preserves_euler",
]

NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class K0Lattice:
    rank: int
    euler: RatMatrix
    odd_cy: bool = False

    def __post_init__(self):
        if self.euler.shape != (self.rank, self.rank):
            raise ValueError("Euler form must be rank x rank")
        if self.odd_cy and not self.is_skew():
            raise ValueError("odd Calabi-Yau lattice needs a skew Euler form")

    def is_skew(self) -> bool:
        return self.euler.T == -self.euler


def euler(E: RatMatrix, x: Sequence, y: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(ql.to_rational_vector(x), E.apply(y))), Fraction(0))


@dataclass(frozen=True)
class SphericalClass:
    lattice: K0Lattice
    s: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", ql.to_rational_vector(self.s))
        if len(self.s) != self.lattice.rank:
            raise ValueError("spherical class has the wrong length")
        if self.lattice.odd_cy and euler(self.lattice.euler, self.s, self.s) != 0:
            raise ValueError("χ(s, s) != 0 on an odd Calabi-Yau lattice")


@dataclass(frozen=True)
class Realization:
    rho: RatMatrix
    target: PLLattice
    delta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", ql.to_rational_vector(self.delta))
        if self.rho.rows != self.target.rank:
            raise ValueError("rho must land in the target lattice")
        if len(self.delta) != self.target.rank:
            raise ValueError("delta has the wrong length")


def twist_matrix(sc: SphericalClass, st_convention: bool = False) -> RatMatrix:
    E = sc.lattice.euler
    s = column(sc.s)
    if st_convention:
        # x -> x - χ(s, x) s
        return identity(sc.lattice.rank) - s @ (s.T @ E)
    # x -> x + χ(x, s) s
    return identity(sc.lattice.rank) + s @ column(E.apply(sc.s)).T


def is_spherical_numerically(sc: SphericalClass) -> bool:
    return euler(sc.lattice.euler, sc.s, sc.s) == 0


@dataclass(frozen=True)
class IntertwiningReport:
    delta_matches: bool
    image_of_s: tuple[Fraction, ...]
    failed_columns: tuple[int, ...]
    twist_rank: int
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def commutes(self) -> bool:
        return not self.failed_columns

    @property
    def passed(self) -> bool:
        return self.delta_matches and self.commutes

    def to_json(self) -> dict:
        return {
            "delta_matches": self.delta_matches,
            "image_of_s": ql.vector_to_json(self.image_of_s),
            "commutes": self.commutes,
            "failed_columns": list(self.failed_columns),
            "twist_rank": self.twist_rank,
            "diagnostics": list(self.diagnostics),
            "pass": self.passed,
        }


def verify_intertwining(sc: SphericalClass, r: Realization, st_convention: bool = False) -> IntertwiningReport:
    """Check ``rho(s) = delta`` and ``rho · Twist = T_delta · rho`` column by column."""
    if r.rho.cols != sc.lattice.rank:
        raise ValueError("rho must be defined on the K0 lattice")
    tw = twist_matrix(sc, st_convention)
    T = reflection(r.target, r.delta)
    lhs = r.rho @ tw
    rhs = T @ r.rho
    failed = tuple(j for j in range(lhs.cols) if lhs.col(j) != rhs.col(j))
    image_s = r.rho.apply(sc.s)
    matches = image_s == r.delta
    diags = []
    if not matches:
        diags.append(
            "rho(s) != delta: got " + str(ql.vector_to_json(image_s)) + ", expected " + str(ql.vector_to_json(r.delta))
        )
    for j in failed:
        diags.append(f"column {j}: rho·Twist != T·rho")
    return IntertwiningReport(matches, image_s, failed, ql.rank(tw - identity(tw.rows)), tuple(diags))


def twist_preserves_euler(sc: SphericalClass, st_convention: bool = False) -> bool | str:
    """``Twist^T E Twist == E`` for skew ``E``; ``NOT_APPLICABLE`` otherwise."""
    if not sc.lattice.is_skew():
        return NOT_APPLICABLE
    tw = twist_matrix(sc, st_convention)
    return tw.T @ sc.lattice.euler @ tw == sc.lattice.euler
