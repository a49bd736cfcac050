"""Milnor numbers of isolated hypersurface singularities.

The Milnor number is computed globally as ``dim_Q Q[x]/(df/dx_1, ..., df/dx_n)``
by counting the standard monomials of a reduced Groebner basis of the
Jacobian ideal.  This agrees with the local Milnor number whenever the origin
is the only critical point (for instance for quasi-homogeneous ``f``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .qlinalg import to_rational

Monomial = tuple[int, ...]

__all__ = [
    "Poly",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "VanishingProfile",
    "PolyParseError",
    "parse_poly",
    "jacobian_ideal",
    "groebner",
    "reduce",
    "standard_monomials",
    "milnor_number",
    "vanishing_profile",
    "GLOBAL_CAVEAT",
]

GLOBAL_CAVEAT = (
    "note: the Jacobian quotient is computed with a global monomial order; "
    "the count equals the local Milnor number only when the origin is the "
    "sole critical point (e.g. quasi-homogeneous f)."
)


class PolyParseError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial):
        if self.kind == "lex":
            return m
        # larger key = larger monomial
        return (sum(m), tuple(-e for e in reversed(m)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class Poly:
    variables: tuple[str, ...]
    terms: dict = field(hash=False, compare=False)

    def __post_init__(self):
        n = len(self.variables)
        clean = {}
        for m, c in self.terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != n or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for variables {self.variables}")
            c = to_rational(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
        object.__setattr__(self, "terms", {m: c for m, c in clean.items() if c})

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    @classmethod
    def zero(cls, variables) -> "Poly":
        return cls(tuple(variables), {})

    @classmethod
    def monomial(cls, variables, m: Monomial, c=1) -> "Poly":
        return cls(tuple(variables), {tuple(m): c})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def _same_ring(self, other: "Poly"):
        if self.variables != other.variables:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._same_ring(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, Fraction(0)) + c
        return Poly(self.variables, t)

    def __neg__(self) -> "Poly":
        return Poly(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._same_ring(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, Fraction(0)) + c1 * c2
        return Poly(self.variables, t)

    def scale(self, c) -> "Poly":
        c = to_rational(c)
        return Poly(self.variables, {m: c * v for m, v in self.terms.items()})

    def mul_term(self, m: Monomial, c: Fraction) -> "Poly":
        return Poly(
            self.variables,
            {tuple(a + b for a, b in zip(k, m)): c * v for k, v in self.terms.items()},
        )

    def diff(self, i: int) -> "Poly":
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                d = list(m)
                d[i] -= 1
                t[tuple(d)] = c * m[i]
        return Poly(self.variables, t)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        return self.scale(1 / self.leading_coefficient(order))

    def permute(self, perm: Sequence[int]) -> "Poly":
        """Relabel: new variable ``k`` is old variable ``perm[k]``."""
        return Poly(
            tuple(self.variables[p] for p in perm),
            {tuple(m[p] for p in perm): c for m, c in self.terms.items()},
        )

    def __str__(self) -> str:
        return self.format(GREVLEX)

    def format(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[m]
            factors = []
            for v, e in zip(self.variables, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


_TERM_SPLIT = re.compile(r"(?=[+-])")
_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_COEF = re.compile(r"^\d+(/\d+)?$")
_FACTOR = re.compile(rf"^({_NAME})(\^(\d+))?$")


def parse_poly(text: str, variables: Sequence[str] | None = None) -> Poly:
    """Parse ``c*x1^a1*...*xn^an + ...``.

    Whitespace is ignored.  Variables are taken in order of first appearance
    unless ``variables`` is given (it may list variables absent from the text).
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise PolyParseError("empty polynomial")
    raw_terms = [t for t in _TERM_SPLIT.split(s) if t]
    parsed = []
    seen: list[str] = []
    for raw in raw_terms:
        sign = Fraction(1)
        body = raw
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if not body:
            raise PolyParseError(f"dangling sign in {text!r}")
        coef = sign
        exps: dict[str, int] = {}
        for factor in body.split("*"):
            if not factor:
                raise PolyParseError(f"empty factor in {raw!r}")
            if _COEF.match(factor):
                coef *= Fraction(factor)
                continue
            mt = _FACTOR.match(factor)
            if not mt:
                raise PolyParseError(f"cannot parse factor {factor!r}")
            name, e = mt.group(1), int(mt.group(3) or 1)
            exps[name] = exps.get(name, 0) + e
            if name not in seen:
                seen.append(name)
        parsed.append((coef, exps))
    if variables is None:
        variables = seen
    else:
        variables = list(variables)
        unknown = [v for v in seen if v not in variables]
        if unknown:
            raise PolyParseError(f"undeclared variables {unknown}")
    if not variables:
        raise PolyParseError("polynomial has no variables")
    index = {v: i for i, v in enumerate(variables)}
    terms: dict = {}
    for coef, exps in parsed:
        m = [0] * len(variables)
        for name, e in exps.items():
            m[index[name]] += e
        m = tuple(m)
        terms[m] = terms.get(m, Fraction(0)) + coef
    return Poly(tuple(variables), terms)


def jacobian_ideal(f: Poly) -> list[Poly]:
    if f.nvars < 1:
        raise ValueError("need at least one variable")
    return [f.diff(i) for i in range(f.nvars)]


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def reduce(f: Poly, G: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    """Full multivariate division remainder of ``f`` by ``G``."""
    leads = [(g.leading_monomial(order), g.leading_coefficient(order), g) for g in G if not g.is_zero()]
    p = dict(f.terms)
    rem = {}
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in leads:
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                factor = c / lc
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, q))
                    v = p.get(t, Fraction(0)) - factor * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return Poly(f.variables, rem)


def _s_poly(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    L = _lcm(lf, lg)
    a = f.mul_term(tuple(x - y for x, y in zip(L, lf)), 1 / f.leading_coefficient(order))
    b = g.mul_term(tuple(x - y for x, y in zip(L, lg)), 1 / g.leading_coefficient(order))
    return a - b


def _interreduce(G: list[Poly], order: MonomialOrder) -> list[Poly]:
    # drop generators whose leading monomial is divisible by another's
    G = [g.monic(order) for g in G if not g.is_zero()]
    G.sort(key=lambda g: order.key(g.leading_monomial(order)))
    minimal: list[Poly] = []
    for g in G:
        lm = g.leading_monomial(order)
        if not any(_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(reduce(g, others, order).monic(order))
    out.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return out


def groebner(gens: Iterable[Poly], order: MonomialOrder = GREVLEX) -> list[Poly]:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are processed by the normal strategy (smallest lcm first, ties by
    index); Buchberger's coprime criterion skips pairs with disjoint leading
    monomials.  The output is monic and sorted by decreasing leading monomial.
    """
    G = [g for g in gens if not g.is_zero()]
    gens = list(gens)
    if not gens:
        raise ValueError("groebner needs at least one generator")
    if not G:
        return []
    G = [g.monic(order) for g in G]
    pairs = {(i, j) for j in range(len(G)) for i in range(j)}
    key = order.key
    while pairs:
        i, j = min(
            pairs,
            key=lambda p: (key(_lcm(G[p[0]].leading_monomial(order), G[p[1]].leading_monomial(order))), p),
        )
        pairs.discard((i, j))
        li, lj = G[i].leading_monomial(order), G[j].leading_monomial(order)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        h = reduce(_s_poly(G[i], G[j], order), G, order)
        if h.is_zero():
            continue
        G.append(h.monic(order))
        k = len(G) - 1
        pairs |= {(a, k) for a in range(k)}
    return _interreduce(G, order)


def standard_monomials(G: Sequence[Poly], order: MonomialOrder = GREVLEX) -> list[Monomial] | None:
    """Monomials outside the leading-term ideal of a Groebner basis.

    Returns None when some variable has no pure power among the leading
    monomials, i.e. the quotient ring is infinite-dimensional.
    """
    if not G:
        return None
    n = G[0].nvars
    leads = [g.leading_monomial(order) for g in G]
    if any(all(e == 0 for e in m) for m in leads):
        return []
    bounds = []
    for i in range(n):
        powers = [m[i] for m in leads if all(e == 0 for k, e in enumerate(m) if k != i) and m[i] > 0]
        if not powers:
            return None
        bounds.append(min(powers))
    return [
        m
        for m in product(*(range(b) for b in bounds))
        if not any(_divides(l, m) for l in leads)
    ]


def milnor_number(f: Poly, order: MonomialOrder = GREVLEX) -> int | None:
    """dim_Q of the Jacobian quotient ring, or None if infinite."""
    std = standard_monomials(groebner(jacobian_ideal(f), order), order)
    return None if std is None else len(std)


@dataclass(frozen=True)
class VanishingProfile:
    milnor_number: int
    nvars: int
    ranks: tuple[tuple[int, int], ...]

    def rank(self, degree: int) -> int:
        return dict(self.ranks).get(degree, 0)

    def to_json(self) -> dict:
        return {
            "milnor_number": self.milnor_number,
            "nvars": self.nvars,
            "ranks": [[d, r] for d, r in self.ranks],
        }


def vanishing_profile(f: Poly, order: MonomialOrder = GREVLEX) -> VanishingProfile | None:
    """Reduced Milnor-fiber cohomology ranks: a bouquet of mu spheres of dim n-1."""
    mu = milnor_number(f, order)
    if mu is None:
        return None
    n = f.nvars
    ranks = tuple((d, mu if d == n - 1 else 0) for d in range(n))
    return VanishingProfile(mu, n, ranks)
