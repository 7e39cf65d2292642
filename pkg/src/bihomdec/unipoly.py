"""Univariate polynomials over the rationals.

A polynomial is a :class:`UniPoly` holding a tuple of coefficients in
ascending degree with trailing zeros trimmed; the zero polynomial has an
empty tuple.  Exact operations (gcd, squarefree test, rational roots) never
approximate; :func:`numeric_roots` is the explicit floating-point backend.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import NonConvergenceError


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return UniPoly([c * k for c in self.coeffs])

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UniPoly([c / lead for c in self.coeffs])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = other.coeffs[-1]
        dn = len(other.coeffs)
        while len(rem) >= dn and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) < dn:
                break
            f = rem[-1] / dlead
            shift = len(rem) - dn
            q[shift] = f
            for i in range(dn):
                rem[shift + i] -= f * other.coeffs[i]
            rem.pop()
        return UniPoly(q), UniPoly(rem)

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "UniPoly(" + " + ".join(terms) + ")"


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd via the Euclidean algorithm."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic()


def squarefree(p: UniPoly) -> bool:
    """True iff gcd(p, p') has degree 0.  The zero polynomial is rejected."""
    if p.is_zero():
        raise ValueError("squarefree undefined for the zero polynomial")
    if p.degree == 0:
        return True
    return gcd(p, p.derivative()).degree == 0


def _integer_clear(p: UniPoly):
    den = math.lcm(*[c.denominator for c in p.coeffs]) if p.coeffs else 1
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*[abs(x) for x in ints]) if any(ints) else 1
    return [x // g for x in ints]


def rational_roots(p: UniPoly):
    """Exact rational roots with multiplicities, as a dict {root: mult}.

    Irrational and complex factors are silently left in place; the product
    of (x - r)^m over the output always divides p exactly.  Backed by exact
    integer factorization (sympy) rather than divisor enumeration, which is
    hopeless for the large coefficients kernel sweeps produce.
    """
    if p.is_zero():
        raise ValueError("rational_roots undefined for the zero polynomial")
    roots = {}
    work = p
    z = 0
    cs = list(work.coeffs)
    while cs and cs[0] == 0:
        z += 1
        cs = cs[1:]
    if z:
        roots[Fraction(0)] = z
        work = UniPoly(cs)
    if work.degree < 1:
        return roots
    import sympy

    ints = _integer_clear(work)
    poly = sympy.Poly(list(reversed(ints)), sympy.Symbol("x"), domain="ZZ")
    for factor, mult in poly.factor_list()[1]:
        if factor.degree() != 1:
            continue
        a1, a0 = factor.all_coeffs()
        roots[Fraction(-int(a0), int(a1))] = mult
    return roots


def squarefree_decomposition(p: UniPoly):
    """Exact decomposition p = lead * prod f_i^{m_i} with f_i monic squarefree."""
    out = []
    w = p.monic()
    if w.degree < 1:
        return out
    g = gcd(w, w.derivative())
    c = w.divmod(g)[0]
    m = 1
    while c.degree >= 1:
        y = gcd(g, c)
        f = c.divmod(y)[0]
        if f.degree >= 1:
            out.append((f.monic(), m))
        c = y
        g = g.divmod(y)[0]
        m += 1
    return out


def numeric_roots(p: UniPoly, tol: float = 1e-9):
    """All complex roots of p as (root, multiplicity) pairs.

    Multiplicities come from an exact squarefree decomposition, so a triple
    root is returned once with multiplicity 3 even at tight tolerances; the
    remaining simple roots of each squarefree factor are found numerically,
    checked against the residual bound |p(z)| < tol * ||p|| (relative), and
    merged by single-linkage clustering at ``tol``.  Raises
    NonConvergenceError when the residual bound cannot be met.
    """
    if p.is_zero():
        raise ValueError("numeric_roots undefined for the zero polynomial")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.degree == 0:
        return []
    cs = [float(c) for c in p.coeffs]
    scale = max(abs(c) for c in cs)
    found = []
    for factor, mult in squarefree_decomposition(p):
        fs = [float(c) for c in factor.coeffs]
        zs = np.roots(list(reversed(fs))) if factor.degree >= 1 else []
        for z in zs:
            val = abs(sum(c * z**i for i, c in enumerate(cs)))
            grow = max(1.0, abs(z)) ** p.degree
            if val > tol * scale * grow * 100:
                raise NonConvergenceError(
                    f"root residual {val:.3e} exceeds tolerance {tol:.3e}"
                )
            found.append((complex(z), mult))
    # single-linkage clustering at tol
    remaining = found
    clusters = []
    while remaining:
        seed_z, seed_m = remaining.pop()
        cluster = [(seed_z, seed_m)]
        changed = True
        while changed:
            changed = False
            for zm in list(remaining):
                if any(abs(zm[0] - w) <= tol * max(1.0, abs(w)) for w, _ in cluster):
                    cluster.append(zm)
                    remaining.remove(zm)
                    changed = True
        total = sum(m for _, m in cluster)
        center = sum(z * m for z, m in cluster) / total
        clusters.append((complex(center), total))
    return clusters
