"""Two-strata linear-algebra model of perverse sheaves near isolated nodes.

An object records the rank ``a`` of the local system on the smooth locus, a
point space ``V`` and two structure maps through the link cohomology::

    m : Q^a ⊗ Q^{b_mid_minus} -> V        n : V -> Q^a ⊗ Q^{b_mid}

subject to ``n·m = 0``.  Maps act on the generic part by ``g ⊗ I`` and on the
point space directly.  The canonical object of a degeneration is the cokernel
of the variation map ``φ -> ψ``; :func:`verify_theorem1` checks its
restriction, its extension against the intersection complex and its stalk.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import qlinalg as ql
from .qlinalg import RatMatrix, identity, tensor_identity, zeros

__all__ = [
    "NotMono",
    "NotSkyscraper",
    "LinkData",
    "CONIFOLD_LINK",
    "NodePerv",
    "NodeMap",
    "SESReport",
    "CanonicalP",
    "ic",
    "skyscraper_node",
    "jshriek",
    "jstar",
    "canonical_map",
    "stalk_dim",
    "restrict_to_U",
    "kernel",
    "cokernel",
    "image",
    "is_mono",
    "is_epi",
    "is_iso",
    "is_short_exact",
    "identity_map",
    "zero_map",
    "ic_inclusion",
    "canonical_P",
    "verify_theorem1",
    "hom_space",
    "find_isomorphism",
]


class NotMono(ValueError):
    """The variation map is not injective."""


class NotSkyscraper(ValueError):
    """The vanishing-cycle object has a generic part."""


@dataclass(frozen=True)
class LinkData:
    b_mid_minus: int = 1
    b_mid: int = 1

    def __post_init__(self):
        if self.b_mid_minus < 0 or self.b_mid < 0:
            raise ValueError("link Betti numbers must be non-negative")

    def to_json(self) -> list:
        return [self.b_mid_minus, self.b_mid]

    @classmethod
    def from_json(cls, obj) -> "LinkData":
        if not isinstance(obj, list) or len(obj) != 2:
            raise ValueError("link must be a pair [b_mid_minus, b_mid]")
        return cls(int(obj[0]), int(obj[1]))


# middle link cohomology of S^2 x S^3
CONIFOLD_LINK = LinkData(1, 1)


@dataclass(frozen=True)
class NodePerv:
    link: LinkData
    a: int
    V: int
    m: RatMatrix
    n: RatMatrix

    def __post_init__(self):
        bm, b = self.link.b_mid_minus, self.link.b_mid
        if self.m.shape != (self.V, self.a * bm):
            raise ValueError(f"m must be {self.V}x{self.a * bm}, got {self.m.shape}")
        if self.n.shape != (self.a * b, self.V):
            raise ValueError(f"n must be {self.a * b}x{self.V}, got {self.n.shape}")
        if not (self.n @ self.m).is_zero():
            raise ValueError("structure maps violate n·m = 0")

    @property
    def generic_rank(self) -> int:
        return self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.V == 0

    def is_skyscraper(self) -> bool:
        return self.a == 0

    def to_json(self) -> dict:
        return {
            "link": self.link.to_json(),
            "a": self.a,
            "V": self.V,
            "m": ql.matrix_to_json(self.m),
            "n": ql.matrix_to_json(self.n),
        }

    @classmethod
    def from_json(cls, obj: dict, link: LinkData | None = None) -> "NodePerv":
        link = LinkData.from_json(obj["link"]) if "link" in obj else (link or CONIFOLD_LINK)
        a, V = int(obj["a"]), int(obj["V"])
        return cls(
            link,
            a,
            V,
            ql.parse_matrix(obj["m"], V, a * link.b_mid_minus),
            ql.parse_matrix(obj["n"], a * link.b_mid, V),
        )


@dataclass(frozen=True)
class NodeMap:
    source: NodePerv
    target: NodePerv
    on_generic: RatMatrix
    on_V: RatMatrix

    def __post_init__(self):
        s, t = self.source, self.target
        if s.link != t.link:
            raise ValueError("objects have different link data")
        if self.on_generic.shape != (t.a, s.a):
            raise ValueError("on_generic has the wrong shape")
        if self.on_V.shape != (t.V, s.V):
            raise ValueError("on_V has the wrong shape")
        gm = tensor_identity(self.on_generic, s.link.b_mid_minus)
        gn = tensor_identity(self.on_generic, s.link.b_mid)
        if self.on_V @ s.m != t.m @ gm:
            raise ValueError("map does not commute with m")
        if t.n @ self.on_V != gn @ s.n:
            raise ValueError("map does not commute with n")

    def compose(self, other: "NodeMap") -> "NodeMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return NodeMap(other.source, self.target, self.on_generic @ other.on_generic, self.on_V @ other.on_V)

    def is_zero(self) -> bool:
        return self.on_generic.is_zero() and self.on_V.is_zero()

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "on_generic": ql.matrix_to_json(self.on_generic),
            "on_V": ql.matrix_to_json(self.on_V),
        }

    @classmethod
    def from_json(cls, obj: dict, source: NodePerv | None = None, target: NodePerv | None = None) -> "NodeMap":
        s = source if source is not None else NodePerv.from_json(obj["source"])
        t = target if target is not None else NodePerv.from_json(obj["target"])
        return cls(
            s,
            t,
            ql.parse_matrix(obj["on_generic"], t.a, s.a),
            ql.parse_matrix(obj["on_V"], t.V, s.V),
        )


def ic(a: int, link: LinkData = CONIFOLD_LINK) -> NodePerv:
    """Intersection complex of the rank-``a`` local system.

    Built as the image of ``jshriek(a) -> jstar(a)``; the closed form
    ``(a, 0, 0, 0)`` is asserted against it.
    """
    closed = NodePerv(link, a, 0, zeros(0, a * link.b_mid_minus), zeros(a * link.b_mid, 0))
    via_image = image(canonical_map(a, link))[0]
    assert via_image == closed
    return closed


def skyscraper_node(d: int, link: LinkData = CONIFOLD_LINK) -> NodePerv:
    return NodePerv(link, 0, d, zeros(d, 0), zeros(0, d))


def jshriek(a: int, link: LinkData = CONIFOLD_LINK) -> NodePerv:
    k = a * link.b_mid_minus
    return NodePerv(link, a, k, identity(k), zeros(a * link.b_mid, k))


def jstar(a: int, link: LinkData = CONIFOLD_LINK) -> NodePerv:
    k = a * link.b_mid
    return NodePerv(link, a, k, zeros(k, a * link.b_mid_minus), identity(k))


def canonical_map(a: int, link: LinkData = CONIFOLD_LINK) -> NodeMap:
    """The canonical morphism ``j_! -> j_*`` (identity on the generic part)."""
    s, t = jshriek(a, link), jstar(a, link)
    return NodeMap(s, t, identity(a), zeros(t.V, s.V))


def stalk_dim(X: NodePerv) -> int:
    """Dimension of the perverse stalk at the point: ``dim V - rank m``."""
    return X.V - ql.rank(X.m)


def restrict_to_U(X: NodePerv) -> int:
    return X.a


def identity_map(X: NodePerv) -> NodeMap:
    return NodeMap(X, X, identity(X.a), identity(X.V))


def zero_map(X: NodePerv, Y: NodePerv) -> NodeMap:
    return NodeMap(X, Y, zeros(Y.a, X.a), zeros(Y.V, X.V))


def _restrict(K_out: RatMatrix, g: RatMatrix, K_in: RatMatrix) -> RatMatrix:
    X = ql.solve(K_out, g @ K_in)
    if X is None:
        raise AssertionError("map does not preserve the subspaces")
    return X


def _sub(X: NodePerv, G: RatMatrix, W: RatMatrix) -> NodePerv:
    # subobject spanned by generic basis G and point basis W
    bm, b = X.link.b_mid_minus, X.link.b_mid
    m = _restrict(W, X.m, tensor_identity(G, bm))
    n = _restrict(tensor_identity(G, b), X.n, W)
    return NodePerv(X.link, G.cols, W.cols, m, n)


def kernel(f: NodeMap) -> tuple[NodePerv, NodeMap]:
    s = f.source
    G = ql.kernel_basis(f.on_generic).basis
    W = ql.kernel_basis(f.on_V).basis
    K = _sub(s, G, W)
    return K, NodeMap(K, s, G, W)


def image(f: NodeMap) -> tuple[NodePerv, NodeMap]:
    t = f.target
    G = ql.image_basis(f.on_generic).basis
    W = ql.image_basis(f.on_V).basis
    I = _sub(t, G, W)
    return I, NodeMap(I, t, G, W)


def cokernel(f: NodeMap) -> tuple[NodePerv, NodeMap]:
    t = f.target
    bm, b = t.link.b_mid_minus, t.link.b_mid
    cg = ql.cokernel_projection(f.on_generic)
    cv = ql.cokernel_projection(f.on_V)
    # generic cokernel tensored with the link spaces
    cgm = ql.cokernel_projection(tensor_identity(f.on_generic, bm))
    cgn = ql.cokernel_projection(tensor_identity(f.on_generic, b))
    assert cgm.projection == tensor_identity(cg.projection, bm)
    assert cgn.projection == tensor_identity(cg.projection, b)
    C = NodePerv(t.link, cg.dim, cv.dim, cv.induced(t.m, cgm), cgn.induced(t.n, cv))
    return C, NodeMap(t, C, cg.projection, cv.projection)


def is_mono(f: NodeMap) -> bool:
    return ql.rank(f.on_generic) == f.source.a and ql.rank(f.on_V) == f.source.V


def is_epi(f: NodeMap) -> bool:
    return ql.rank(f.on_generic) == f.target.a and ql.rank(f.on_V) == f.target.V


def is_iso(f: NodeMap) -> bool:
    return is_mono(f) and is_epi(f)


def is_short_exact(i: NodeMap, p: NodeMap) -> bool:
    if i.target != p.source:
        return False
    return (
        is_mono(i)
        and is_epi(p)
        and p.compose(i).is_zero()
        and i.target.a == i.source.a + p.target.a
        and i.target.V == i.source.V + p.target.V
    )


@dataclass(frozen=True)
class CanonicalP:
    """The canonical object together with its certified defining sequence."""

    P: NodePerv
    inclusion: NodeMap
    projection: NodeMap
    exact: bool


def canonical_P(phi: NodePerv, psi: NodePerv, var: NodeMap) -> CanonicalP:
    """Cokernel of the variation map, with the sequence ``0 -> φ -> ψ -> P -> 0``."""
    if var.source != phi or var.target != psi:
        raise ValueError("var must map phi to psi")
    if not phi.is_skyscraper():
        raise NotSkyscraper(f"phi has generic rank {phi.a}, expected 0")
    if not is_mono(var):
        raise NotMono("variation map is not injective")
    P, proj = cokernel(var)
    exact = is_short_exact(var, proj)
    assert exact
    return CanonicalP(P, var, proj, exact)


def ic_inclusion(X: NodePerv) -> NodeMap | None:
    """The map ``IC -> X`` that is the identity on the generic part, if any."""
    try:
        return NodeMap(ic(X.a, X.link), X, identity(X.a), zeros(X.V, 0))
    except ValueError:
        return None


@dataclass(frozen=True)
class SESReport:
    nodes: int
    restriction_rank: int
    ic_embeds: bool
    quotient_is_skyscraper: bool
    skyscraper_rank: int
    stalk_dim: int
    ses_exact: bool
    failures: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "restriction_rank": self.restriction_rank,
            "ic_embeds": self.ic_embeds,
            "quotient_is_skyscraper": self.quotient_is_skyscraper,
            "skyscraper_rank": self.skyscraper_rank,
            "stalk_dim": self.stalk_dim,
            "ses_exact": self.ses_exact,
            "failures": list(self.failures),
            "pass": self.passed,
        }


def verify_theorem1(P: NodePerv, nodes: int = 1) -> SESReport:
    """Check restriction, the IC extension and the stalk of ``P``.

    The sequence ``0 -> IC -> P -> skyscraper -> 0`` is built from the literal
    inclusion of the intersection complex, which exists exactly when ``m = 0``.
    """
    failures = []
    restriction = restrict_to_U(P)
    if restriction != 1:
        failures.append(f"restriction rank {restriction} != 1")
    inc = ic_inclusion(P)
    ic_embeds = inc is not None
    quotient_sky = False
    sky_rank = 0
    exact = False
    if ic_embeds:
        Q, proj = cokernel(inc)
        quotient_sky = Q.is_skyscraper()
        sky_rank = Q.V
        exact = is_short_exact(inc, proj)
        if not quotient_sky:
            failures.append("quotient by IC has a generic part")
        if not exact:
            failures.append("IC sequence is not exact")
        if sky_rank != nodes:
            failures.append(f"skyscraper rank {sky_rank} != {nodes}")
    else:
        failures.append("IC does not embed (m != 0)")
    sd = stalk_dim(P)
    if sd != nodes:
        failures.append(f"stalk dimension {sd} != {nodes}")
    return SESReport(nodes, restriction, ic_embeds, quotient_sky, sky_rank, sd, exact, tuple(failures))


def hom_space(X: NodePerv, Y: NodePerv) -> list[NodeMap]:
    """A basis of Hom(X, Y), by solving the commuting conditions."""
    if X.link != Y.link:
        raise ValueError("objects have different link data")
    bm, b = X.link.b_mid_minus, X.link.b_mid
    ng, nv = Y.a * X.a, Y.V * X.V
    nvar = ng + nv

    def unpack(vec):
        g = RatMatrix(Y.a, X.a, tuple(vec[:ng]))
        v = RatMatrix(Y.V, X.V, tuple(vec[ng:]))
        return g, v

    def residual(vec):
        g, v = unpack(vec)
        r1 = v @ X.m - Y.m @ tensor_identity(g, bm)
        r2 = Y.n @ v - tensor_identity(g, b) @ X.n
        return r1.entries + r2.entries

    # the residual is linear in the unknowns; assemble it column by column
    cols = []
    for k in range(nvar):
        e = [Fraction(0)] * nvar
        e[k] = Fraction(1)
        cols.append(residual(e))
    nres = len(cols[0]) if cols else 0
    A = RatMatrix.from_columns(cols, nres) if nvar else zeros(0, 0)
    K = ql.kernel_basis(A).basis
    return [NodeMap(X, Y, *unpack(K.col(j))) for j in range(K.cols)]


def find_isomorphism(X: NodePerv, Y: NodePerv, coefficients=range(-2, 3)) -> NodeMap | None:
    """Exhaustive search for an isomorphism among small combinations of a Hom basis."""
    if (X.a, X.V) != (Y.a, Y.V):
        return None
    basis = hom_space(X, Y)
    if not basis and X.is_zero():
        return identity_map(X)
    coefficients = list(coefficients)
    for coeffs in itertools.product(coefficients, repeat=len(basis)):
        g = zeros(Y.a, X.a)
        v = zeros(Y.V, X.V)
        for c, f in zip(coeffs, basis):
            if c:
                g = g + f.on_generic.scale(c)
                v = v + f.on_V.scale(c)
        f = NodeMap(X, Y, g, v)
        if is_iso(f):
            return f
    return None
