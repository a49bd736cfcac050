"""Independent reference computations used to freeze or cross-check values."""

from itertools import product

import sympy


def poly_to_sympy(f):
    syms = sympy.symbols(list(f.variables))
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s**e
        expr += term
    return expr, syms


def jacobian_quotient_dim(f):
    """dim Q[x]/(grad f) via sympy's Groebner basis and a brute-force box count.

    Returns None when the quotient is infinite-dimensional.
    """
    expr, syms = poly_to_sympy(f)
    grads = [sympy.diff(expr, s) for s in syms]
    grads = [g for g in grads if g != 0]
    if not grads:
        return None
    G = sympy.groebner(grads, *syms, order="grevlex")
    if list(G.exprs) == [1]:
        return 0
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    bound = []
    for i in range(len(syms)):
        pure = [m[i] for m in leads if m[i] > 0 and sum(m) == m[i]]
        if not pure:
            return None
        bound.append(min(pure))
    count = 0
    for m in product(*(range(b) for b in bound)):
        if not any(all(a <= b for a, b in zip(l, m)) for l in leads):
            count += 1
    return count
