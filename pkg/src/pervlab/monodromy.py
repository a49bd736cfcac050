"""Picard-Lefschetz monodromy on a lattice with a bilinear pairing.

The pairing is evaluated left-argument-first, ``<x, y> = x^T J y``, and the
reflection in a vanishing class ``d`` is ``a -> a + <a, d> d``.  With the
opposite convention the sign of the correction flips.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import qlinalg as ql
from .qlinalg import RatMatrix, column, identity

__all__ = [
    "PLLattice",
    "VanishingSet",
    "pairing",
    "reflection",
    "check_unipotent",
    "compose_monodromy",
    "intersection_quiver",
    "quiver_to_json",
    "quiver_to_dot",
    "standard_symplectic",
]


@dataclass(frozen=True)
class PLLattice:
    rank: int
    pairing: RatMatrix
    symmetry: str = "skew"

    def __post_init__(self):
        if self.pairing.shape != (self.rank, self.rank):
            raise ValueError("pairing must be rank x rank")
        if self.symmetry == "skew":
            if self.pairing.T != -self.pairing:
                raise ValueError("pairing is declared skew but J^T != -J")
        elif self.symmetry == "symmetric":
            if self.pairing.T != self.pairing:
                raise ValueError("pairing is declared symmetric but J^T != J")
        else:
            raise ValueError(f"unknown symmetry {self.symmetry!r}")

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        return pairing(self.pairing, x, y)


def standard_symplectic(rank: int) -> RatMatrix:
    """``[[0, I], [-I, 0]]`` in even rank."""
    if rank % 2:
        raise ValueError("standard symplectic form needs even rank")
    h = rank // 2
    rows = [[0] * rank for _ in range(rank)]
    for i in range(h):
        rows[i][h + i] = 1
        rows[h + i][i] = -1
    return RatMatrix.from_rows(rows, cols=rank)


def pairing(J: RatMatrix, x: Sequence, y: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(ql.to_rational_vector(x), J.apply(y))), Fraction(0))


def reflection(L: PLLattice, delta: Sequence) -> RatMatrix:
    """Matrix of ``a -> a + <a, delta> delta``; integral input gives integral output."""
    d = ql.to_rational_vector(delta)
    if len(d) != L.rank:
        raise ValueError(f"delta has length {len(d)}, lattice rank is {L.rank}")
    # <a, d> = a^T (J d), so the correction is d (J d)^T
    T = identity(L.rank) + column(d) @ column(L.pairing.apply(d)).T
    if L.pairing.is_integral() and all(x.denominator == 1 for x in d):
        assert T.is_integral()
    return T


def check_unipotent(T: RatMatrix) -> int | None:
    return ql.unipotency_index(T)


@dataclass(frozen=True)
class VanishingSet:
    lattice: PLLattice
    deltas: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for d in self.deltas:
            if len(d) != self.lattice.rank:
                raise ValueError("vanishing class has the wrong length")
            if self.lattice.symmetry == "skew" and self.lattice.pair(d, d) != 0:
                raise AssertionError("skew pairing with nonzero self-pairing")

    @classmethod
    def from_json(cls, obj: dict) -> "VanishingSet":
        J = ql.parse_matrix(obj["pairing"])
        L = PLLattice(J.rows, J, obj.get("symmetry", "skew"))
        return cls(L, tuple(ql.parse_vector(d) for d in obj["deltas"]))

    def to_json(self) -> dict:
        return {
            "pairing": ql.matrix_to_json(self.lattice.pairing),
            "symmetry": self.lattice.symmetry,
            "deltas": [ql.vector_to_json(d) for d in self.deltas],
        }


def compose_monodromy(V: VanishingSet, order: Sequence[int] | None = None) -> RatMatrix:
    """Product ``T_{order[0]} · T_{order[1]} · ...`` of the reflections."""
    if order is None:
        order = range(len(V.deltas))
    order = list(order)
    if sorted(order) != list(range(len(V.deltas))):
        raise ValueError("order must be a permutation of the vanishing classes")
    out = identity(V.lattice.rank)
    for i in order:
        out = out @ reflection(V.lattice, V.deltas[i])
    return out


def intersection_quiver(V: VanishingSet) -> dict:
    """Vertices ``1..r``; an edge ``i -> j`` (i < j) weighted by ``<d_i, d_j>`` when nonzero."""
    r = len(V.deltas)
    edges = []
    for i in range(r):
        for j in range(i + 1, r):
            w = V.lattice.pair(V.deltas[i], V.deltas[j])
            if w:
                edges.append((i + 1, j + 1, w))
    return {"vertices": list(range(1, r + 1)), "edges": edges}


def quiver_to_json(Q: dict) -> dict:
    return {
        "vertices": Q["vertices"],
        "edges": [{"source": i, "target": j, "weight": ql.vector_to_json([w])[0]} for i, j, w in Q["edges"]],
    }


def quiver_to_dot(Q: dict, name: str = "vanishing") -> str:
    lines = [f"digraph {name} {{"]
    for v in Q["vertices"]:
        lines.append(f'  {v} [label="δ{v}"];')
    for i, j, w in Q["edges"]:
        lines.append(f'  {i} -> {j} [label="{w}"];')
    lines.append("}")
    return "\n".join(lines)
