"""Tangent vectors of k-factor product varieties: ranks and decompositions.

A 2-jet is a base point (v_1, ..., v_k) with direction vectors
(w_1, ..., w_k); its lifted span is the tangent direction
d/dt lift(v_1 + t w_1, ..., v_k + t w_k) at t = 0.  The jet genuinely moves
only in the factors where w_i is not proportional to v_i (the dependency
set), and its rank is the sum of the degrees over those factors.

The decomposition runs along the multidegree-(1,...,1) curve
t -> (v_i + t w_i); on that curve the tangent vector has binary coordinates
D s^{D-1} t + E s^D (D the restricted degree, E the drift from direction
components along inactive factors), whose decompositions are exactly the
root sets with prescribed sum E — an unlimited rational family.  The base
point sits at parameter (1:0) and can never appear among the terms, since a
kernel form vanishing there would have a square factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, sylvester
from .errors import PreconditionError, ShapeMismatchError
from .forms import (BiForm, BinaryForm, Line, PointPair, ProductCurve, Shape,
                    combine)
from .structure import normalized_term


@dataclass(frozen=True)
class JetK:
    """Degree-2 scheme data on a k-factor product: base points and directions."""

    degrees: tuple
    base: tuple       # k coordinate tuples, each nonzero
    direction: tuple  # k coordinate tuples, zero allowed

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        object.__setattr__(self, "base", tuple(tuple(Fraction(c) for c in v)
                                               for v in self.base))
        object.__setattr__(self, "direction", tuple(tuple(Fraction(c) for c in w)
                                                    for w in self.direction))
        k = len(self.degrees)
        if len(self.base) != k or len(self.direction) != k:
            raise ShapeMismatchError("need one base and one direction per factor")
        if any(d < 1 for d in self.degrees):
            raise ShapeMismatchError("degrees must be positive")
        for v, w in zip(self.base, self.direction):
            if all(c == 0 for c in v):
                raise ValueError("zero base point")
            if len(v) != len(w):
                raise ShapeMismatchError("direction dimension mismatch")

    @property
    def k(self) -> int:
        return len(self.degrees)

    def shape2(self) -> Shape:
        if self.k != 2:
            raise PreconditionError("two-factor shape requested for k != 2")
        return Shape(len(self.base[0]) - 1, len(self.base[1]) - 1,
                     self.degrees[0], self.degrees[1])


def dependency_set(jet: JetK):
    """Factors the jet genuinely depends on: w_i not proportional to v_i."""
    out = set()
    for i, (v, w) in enumerate(zip(jet.base, jet.direction), start=1):
        if any(c != 0 for c in w) and linalg.rank([list(v), list(w)]) == 2:
            out.add(i)
    return out


def is_degenerate(jet: JetK) -> bool:
    return not dependency_set(jet)


def _drift(jet: JetK, active):
    """sum over inactive factors of d_i * (w_i : v_i) ratio; exact."""
    e = Fraction(0)
    for i, (d, v, w) in enumerate(zip(jet.degrees, jet.base, jet.direction),
                                  start=1):
        if i in active:
            continue
        if all(c == 0 for c in w):
            continue
        j = next(idx for idx, c in enumerate(v) if c != 0)
        e += d * Fraction(w[j], v[j])
    return e


def tangential_rank(jet: JetK) -> int:
    """Sum of the degrees over the dependency set; 1 for a degenerate jet."""
    active = dependency_set(jet)
    if not active:
        return 1
    return sum(d for i, d in enumerate(jet.degrees, start=1) if i in active)


def _linear_power(coords, e, nvars):
    """Sparse exponent dict of <coords, x>^e."""
    from .forms import exponent_tuples, multinomial
    out = {}
    for exps in exponent_tuples(nvars, e):
        val = Fraction(multinomial(exps))
        for j, ee in enumerate(exps):
            if ee:
                val *= Fraction(coords[j]) ** ee
        if val != 0:
            out[exps] = val
    return out


def _dict_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return out


def tangent_form(jet: JetK) -> BiForm:
    """d/dt at 0 of lift(v_1 + t w_1, v_2 + t w_2), expanded exactly (k = 2)."""
    if jet.k != 2:
        raise PreconditionError("tangent_form is only materialized for k = 2")
    shape = jet.shape2()
    (v1, v2), (w1, w2) = jet.base, jet.direction
    (d1, d2) = jet.degrees
    coeffs = {}

    def add(factor1, factor2, scalar):
        for e1, c1 in factor1.items():
            for e2, c2 in factor2.items():
                key = (e1, e2)
                coeffs[key] = coeffs.get(key, 0) + scalar * c1 * c2

    n1, n2 = shape.n1 + 1, shape.n2 + 1
    if any(c != 0 for c in w1):
        f1 = _linear_power(v1, d1 - 1, n1) if d1 > 1 else {tuple([0] * n1): Fraction(1)}
        f1 = _dict_mul(f1, _linear_power(w1, 1, n1))
        add(f1, _linear_power(v2, d2, n2), Fraction(d1))
    if any(c != 0 for c in w2):
        f2 = _linear_power(v2, d2 - 1, n2) if d2 > 1 else {tuple([0] * n2): Fraction(1)}
        f2 = _dict_mul(f2, _linear_power(w2, 1, n2))
        add(_linear_power(v1, d1, n1), f2, Fraction(d2))
    coeffs = {k: v for k, v in coeffs.items() if v != 0}
    return BiForm(shape, coeffs)


def eval_tangent(jet: JetK, pts):
    """Coefficient-free tangent evaluation at a k-tuple of coordinate vectors."""
    if len(pts) != jet.k:
        raise ShapeMismatchError("need one evaluation vector per factor")
    pairings_v = []
    pairings_w = []
    for v, w, x in zip(jet.base, jet.direction, pts):
        if len(x) != len(v):
            raise ShapeMismatchError("evaluation vector dimension mismatch")
        pairings_v.append(sum(Fraction(a) * Fraction(b) for a, b in zip(v, x)))
        pairings_w.append(sum(Fraction(a) * Fraction(b) for a, b in zip(w, x)))
    total = Fraction(0)
    for i in range(jet.k):
        d = jet.degrees[i]
        if pairings_w[i] == 0:
            continue
        term = d * pairings_v[i] ** (d - 1) * pairings_w[i]
        for j in range(jet.k):
            if j != i:
                term *= pairings_v[j] ** jet.degrees[j]
        total += term
    return total


@dataclass(frozen=True)
class JetCurve:
    """The multidegree-(1,...,1) curve through a jet: per-factor line or constant."""

    factors: tuple   # ("line", v, w) for active factors, ("const", v) otherwise
    degrees: tuple

    def at(self, s, t):
        out = []
        for fac in self.factors:
            if fac[0] == "line":
                _, v, w = fac
                out.append(tuple(Fraction(s) * a + Fraction(t) * b
                                 for a, b in zip(v, w)))
            else:
                out.append(tuple(fac[1]))
        return tuple(out)

    def restricted_degree(self) -> int:
        return sum(d for fac, d in zip(self.factors, self.degrees)
                   if fac[0] == "line")

    def product_curve(self) -> ProductCurve:
        if len(self.factors) != 2:
            raise PreconditionError("product curve only materialized for k = 2")
        def conv(fac):
            if fac[0] == "line":
                return ("line", Line(fac[1], fac[2]))
            return ("const", fac[1])
        return ProductCurve(conv(self.factors[0]), conv(self.factors[1]))


def curve_through_jet(jet: JetK) -> JetCurve:
    """t -> (v_i + t w_i on active factors, v_i elsewhere); tangent to the jet."""
    active = dependency_set(jet)
    if not active:
        raise PreconditionError("degenerate jet spans no curve")
    factors = []
    for i, (v, w) in enumerate(zip(jet.base, jet.direction), start=1):
        if i in active:
            factors.append(("line", v, w))
        else:
            factors.append(("const", v))
    return JetCurve(tuple(factors), jet.degrees)


@dataclass
class TangentDecomposition:
    terms: tuple          # ((weight, k-tuple of coordinate tuples), ...)
    curve: JetCurve
    tag: str              # "smooth-curve" | "reducible-LR" | "single-factor"

    def count(self) -> int:
        return len(self.terms)

    def to_biform_terms(self):
        return tuple((w, PointPair(pt[0], pt[1])) for w, pt in self.terms)


def _symmetric_roots(count: int, shift: Fraction, spread: int = 1):
    """``count`` distinct rationals with the prescribed sum, symmetric around
    shift/count; ``spread`` scales the integer offsets."""
    center = Fraction(shift, count)
    half = count // 2
    offsets = list(range(-half, 0)) + list(range(1, half + 1))
    if count % 2 == 1:
        offsets.insert(half, 0)
    return [center + spread * o for o in offsets]


def _binary_tangent_witness(D: int, drift: Fraction):
    """Rank-D witness of D s^{D-1} t + drift * s^D: roots with sum = drift."""
    q = BinaryForm(D, [drift, D] + [0] * (D - 1))
    for spread in range(1, 20):
        roots = _symmetric_roots(D, drift, spread)
        if len(set(roots)) != D:
            continue
        pts = sorted(((Fraction(x), Fraction(1)) for x in roots),
                     key=lambda p: (p[0], p[1]))
        weights = sylvester.solve_weights(q, pts)
        if weights is not None and 0 not in weights:
            return q, list(zip(weights, pts))
    raise AssertionError("no witness among the shifted symmetric root sets")


def _verify_terms(jet: JetK, terms, rng_seed=20_26):
    """Exact recombination for k = 2; seeded evaluation agreement for k >= 3."""
    if jet.k == 2:
        shape = jet.shape2()
        recombined = combine([(w, PointPair(pt[0], pt[1])) for w, pt in terms],
                             shape)
        if recombined != tangent_form(jet):
            raise AssertionError("decomposition does not recombine exactly")
        return
    from .rng import SplitMix64
    rng = SplitMix64(rng_seed)
    ambient = 1
    for d, v in zip(jet.degrees, jet.base):
        from .forms import binom
        ambient *= binom(len(v) - 1 + d, d)
    samples = ambient + sum(jet.degrees)
    for _ in range(samples):
        pts = [tuple(rng.randint(-5, 5) for _ in v) for v in jet.base]
        direct = eval_tangent(jet, pts)
        summed = Fraction(0)
        for w, term in terms:
            val = Fraction(w)
            for coords, x, d in zip(term, pts, jet.degrees):
                val *= sum(Fraction(a) * Fraction(b)
                           for a, b in zip(coords, x)) ** d
            summed += val
        if direct != summed:
            raise AssertionError("decomposition disagrees with tangent evaluation")


def _base_key(jet: JetK):
    from .forms import canonical_coords
    return tuple(canonical_coords(v) for v in jet.base)


def _term_key(term):
    from .forms import canonical_coords
    return tuple(canonical_coords(c) for c in term)


def tangential_decompose(jet: JetK) -> TangentDecomposition:
    """Rank-many terms on the curve through the jet, recombining exactly.

    Term count is the sum of the degrees over the dependency set; the base
    point never appears among the terms.
    """
    active = dependency_set(jet)
    if not active:
        raise PreconditionError("degenerate jet: the form is a single lift")
    curve = curve_through_jet(jet)
    D = curve.restricted_degree()
    drift = _drift(jet, active)
    _, witness = _binary_tangent_witness(D, drift)
    terms = []
    for w, (alpha, beta) in witness:
        pt = curve.at(alpha, beta)
        if jet.k == 2:
            weight, prim = normalized_term(w, PointPair(pt[0], pt[1]),
                                           jet.shape2())
            terms.append((weight, (prim.p1, prim.p2)))
        else:
            terms.append((Fraction(w), pt))
    base_key = _base_key(jet)
    assert all(_term_key(t) != base_key for _, t in terms), "base among terms"
    _verify_terms(jet, terms)
    tag = "smooth-curve" if len(active) >= 2 else "single-factor"
    return TangentDecomposition(tuple(terms), curve, tag)


def reducible_decompose(jet: JetK) -> TangentDecomposition:
    """Split along the reducible line-pair: d1 terms on the first-factor line
    times [v2], d2 terms on [v1] times the second-factor line."""
    if jet.k != 2:
        raise PreconditionError("reducible decomposition needs k = 2")
    if dependency_set(jet) != {1, 2}:
        raise PreconditionError("reducible decomposition needs both factors active")
    shape = jet.shape2()
    (v1, v2), (w1, w2) = jet.base, jet.direction
    d1, d2 = jet.degrees
    terms = []
    for d, v, w, side in ((d1, v1, w1, 0), (d2, v2, w2, 1)):
        _, witness = _binary_tangent_witness(d, Fraction(0))
        for wt, (alpha, beta) in witness:
            moving = tuple(Fraction(alpha) * a + Fraction(beta) * b
                           for a, b in zip(v, w))
            pair = PointPair(moving, v2) if side == 0 else PointPair(v1, moving)
            weight, prim = normalized_term(wt, pair, shape)
            terms.append((weight, (prim.p1, prim.p2)))
    base_key = _base_key(jet)
    assert all(_term_key(t) != base_key for _, t in terms), "base among terms"
    _verify_terms(jet, terms)
    curve = curve_through_jet(jet)
    return TangentDecomposition(tuple(terms), curve, "reducible-LR")