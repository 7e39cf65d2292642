"""Bi-homogeneous polynomials and the rank-1 locus of the two-factor product.

Conventions fixed here and relied on by every other module:

* A point of P^{n1} x P^{n2} is a :class:`PointPair`; set comparisons use the
  canonical representative with the first nonzero coordinate scaled to 1.
* ``lift(pt, shape)`` is the coefficient vector of
  (sum_j p1_j x_j)^{d1} * (sum_j p2_j y_j)^{d2}
  in the *plain monomial* basis (no multinomial normalization), listed in the
  deterministic order of :func:`Shape.monomials`.  Rescaling the point by
  (lam, mu) rescales the lift by lam^{d1} mu^{d2}.
* A :class:`BinaryForm` of degree d stores plain coefficients
  ``coeffs[i]`` of s^{d-i} t^i.
* The span of lifted points of a line or of a bidegree-(1,1) curve is the
  image of the degree-D binary forms (D the restricted degree) under the
  linear map sending the pure power (a s + b t)^D to the lift of the curve
  point at parameter (a : b); :func:`span_columns` materializes that map so
  the correspondence between binary-form decompositions and on-curve
  decompositions is weight-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .errors import NotInSpanError, ShapeMismatchError


@lru_cache(maxsize=None)
def exponent_tuples(nvars: int, total: int):
    """All exponent tuples of length ``nvars`` with the given total, lex order."""
    if nvars == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in exponent_tuples(nvars - 1, total - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def multinomial(exps) -> int:
    total = sum(exps)
    val = math.factorial(total)
    for e in exps:
        val //= math.factorial(e)
    return val


def binom(n: int, k: int) -> int:
    return math.comb(n, k)


@dataclass(frozen=True)
class Shape:
    n1: int
    n2: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or self.d1 < 1 or self.d2 < 1:
            raise ShapeMismatchError("need n1,n2 >= 0 and d1,d2 >= 1")

    def monomials(self):
        return (exponent_tuples(self.n1 + 1, self.d1),
                exponent_tuples(self.n2 + 1, self.d2))

    @property
    def ambient_dim(self) -> int:
        return binom(self.n1 + self.d1, self.d1) * binom(self.n2 + self.d2, self.d2)

    def index_of(self):
        m1, m2 = self.monomials()
        return {(e1, e2): i1 * len(m2) + i2
                for i1, e1 in enumerate(m1) for i2, e2 in enumerate(m2)}


def canonical_coords(coords):
    """Projective representative with the first nonzero coordinate scaled to 1."""
    coords = tuple(Fraction(c) for c in coords)
    if all(c == 0 for c in coords):
        raise ValueError("zero coordinate vector")
    lead = next(c for c in coords if c != 0)
    return tuple(c / lead for c in coords)


_canon_coords = canonical_coords


def _primitive_coords(coords):
    coords = [Fraction(c) for c in coords]
    den = math.lcm(*[c.denominator for c in coords])
    ints = [int(c * den) for c in coords]
    g = math.gcd(*[abs(x) for x in ints])
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


@dataclass(frozen=True)
class PointPair:
    """A point of P^{n1} x P^{n2}; both coordinate vectors nonzero."""

    p1: tuple
    p2: tuple

    def __post_init__(self):
        object.__setattr__(self, "p1", tuple(self.p1))
        object.__setattr__(self, "p2", tuple(self.p2))
        if all(c == 0 for c in self.p1) or all(c == 0 for c in self.p2):
            raise ValueError("zero coordinate vector in point pair")

    def canonical(self) -> "PointPair":
        return PointPair(_canon_coords(self.p1), _canon_coords(self.p2))

    def primitive(self) -> "PointPair":
        return PointPair(_primitive_coords(self.p1), _primitive_coords(self.p2))

    def key(self):
        c = self.canonical()
        return (c.p1, c.p2)

    def same_point(self, other: "PointPair") -> bool:
        return self.key() == other.key()


def points_distinct(points) -> bool:
    keys = [p.key() for p in points]
    return len(set(keys)) == len(keys)


def _power_table(coords, maxdeg):
    table = []
    for c in coords:
        row = [1]
        for _ in range(maxdeg):
            row.append(row[-1] * c)
        table.append(row)
    return table


def lift(pt: PointPair, shape: Shape):
    """Plain-monomial coefficient vector of the rank-1 form at ``pt``."""
    if len(pt.p1) != shape.n1 + 1 or len(pt.p2) != shape.n2 + 1:
        raise ShapeMismatchError("point dimensions do not match shape")
    m1, m2 = shape.monomials()
    t1 = _power_table(pt.p1, shape.d1)
    t2 = _power_table(pt.p2, shape.d2)
    part1 = []
    for e1 in m1:
        v = multinomial(e1)
        for j, e in enumerate(e1):
            if e:
                v *= t1[j][e]
        part1.append(v)
    part2 = []
    for e2 in m2:
        v = multinomial(e2)
        for j, e in enumerate(e2):
            if e:
                v *= t2[j][e]
        part2.append(v)
    return [a * b for a in part1 for b in part2]


class BiForm:
    """Sparse bi-homogeneous polynomial of a fixed :class:`Shape`."""

    __slots__ = ("shape", "coeffs")

    def __init__(self, shape: Shape, coeffs=None):
        self.shape = shape
        clean = {}
        for key, val in (coeffs or {}).items():
            e1, e2 = tuple(key[0]), tuple(key[1])
            if sum(e1) != shape.d1 or sum(e2) != shape.d2 \
                    or len(e1) != shape.n1 + 1 or len(e2) != shape.n2 + 1:
                raise ShapeMismatchError(f"exponent {key} has wrong weight for {shape}")
            val = Fraction(val)
            if val != 0:
                clean[(e1, e2)] = val
        self.coeffs = clean

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, BiForm) and self.shape == other.shape
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatchError("cannot add forms of different shapes")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BiForm(self.shape, out)

    def scale(self, k) -> "BiForm":
        return BiForm(self.shape, {key: v * k for key, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def vector(self):
        """Dense coefficient vector in the canonical monomial order."""
        idx = self.shape.index_of()
        v = [Fraction(0)] * self.shape.ambient_dim
        for key, val in self.coeffs.items():
            v[idx[key]] = val
        return v

    @classmethod
    def from_vector(cls, shape: Shape, vec) -> "BiForm":
        m1, m2 = shape.monomials()
        coeffs = {}
        i = 0
        for e1 in m1:
            for e2 in m2:
                if vec[i] != 0:
                    coeffs[(e1, e2)] = vec[i]
                i += 1
        return cls(shape, coeffs)

    def __repr__(self):
        return f"BiForm({self.shape}, {len(self.coeffs)} terms)"


def rank1(weight, pt: PointPair, shape: Shape) -> BiForm:
    vec = lift(pt, shape)
    m1, m2 = shape.monomials()
    coeffs = {}
    i = 0
    w = Fraction(weight)
    for e1 in m1:
        for e2 in m2:
            if vec[i] != 0:
                coeffs[(e1, e2)] = w * vec[i]
            i += 1
    return BiForm(shape, coeffs)


def combine(terms, shape: Shape) -> BiForm:
    """Linear combination of rank-1 terms; ``terms`` is (weight, PointPair) pairs."""
    out = BiForm(shape, {})
    for weight, pt in terms:
        out = out + rank1(weight, pt, shape)
    return out


def evaluate(f: BiForm, pt: PointPair):
    if len(pt.p1) != f.shape.n1 + 1 or len(pt.p2) != f.shape.n2 + 1:
        raise ShapeMismatchError("point dimensions do not match form shape")
    t1 = _power_table(pt.p1, f.shape.d1)
    t2 = _power_table(pt.p2, f.shape.d2)
    acc = Fraction(0)
    for (e1, e2), c in f.coeffs.items():
        v = c
        for j, e in enumerate(e1):
            if e:
                v *= t1[j][e]
        for j, e in enumerate(e2):
            if e:
                v *= t2[j][e]
        acc += v
    return acc


@dataclass(frozen=True)
class Line:
    """Line in P^n through two independent points: (s:t) -> s*a + t*b."""

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        if len(self.a) != len(self.b):
            raise ValueError("line endpoints of different dimension")
        if linalg.rank([list(self.a), list(self.b)]) != 2:
            raise ValueError("line needs two projectively independent points")

    def at(self, s, t):
        return tuple(s * x + t * y for x, y in zip(self.a, self.b))

    def contains(self, coords) -> bool:
        return linalg.rank([list(self.a), list(self.b), list(coords)]) == 2

    def span_key(self):
        basis = linalg.row_space_basis([list(self.a), list(self.b)])
        return tuple(tuple(r) for r in basis)


@dataclass(frozen=True)
class ProductCurve:
    """Per-factor constant-or-line curve in P^{n1} x P^{n2}.

    ``factor1``/``factor2`` are either ``("const", coords)`` or
    ``("line", Line)``; at least one factor is a line.  A single-line curve
    with constant second factor is an alpha-line slice, the mirror is a
    beta-line, and two lines give a bidegree-(1,1) curve.
    """

    factor1: tuple
    factor2: tuple

    def __post_init__(self):
        for fac in (self.factor1, self.factor2):
            if fac[0] not in ("const", "line"):
                raise ValueError("factor must be ('const', coords) or ('line', Line)")
        if self.factor1[0] == "const" and self.factor2[0] == "const":
            raise ValueError("at least one factor must be a line")

    def restricted_degree(self, shape: Shape) -> int:
        deg = 0
        if self.factor1[0] == "line":
            deg += shape.d1
        if self.factor2[0] == "line":
            deg += shape.d2
        return deg

    def at(self, s, t) -> PointPair:
        p1 = (self.factor1[1].at(s, t) if self.factor1[0] == "line"
              else tuple(self.factor1[1]))
        p2 = (self.factor2[1].at(s, t) if self.factor2[0] == "line"
              else tuple(self.factor2[1]))
        return PointPair(p1, p2)


def beta_line_curve(base_p1, line: Line) -> ProductCurve:
    return ProductCurve(("const", tuple(base_p1)), ("line", line))


def alpha_line_curve(line: Line, base_p2) -> ProductCurve:
    return ProductCurve(("line", line), ("const", tuple(base_p2)))


class BinaryForm:
    """Binary form of fixed degree; coeffs[i] multiplies s^{d-i} t^i."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if degree < 1 or len(coeffs) != degree + 1:
            raise ValueError("coefficient list must have length degree+1")
        self.degree = degree
        self.coeffs = tuple(coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, BinaryForm) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __call__(self, s, t):
        d = self.degree
        return sum(c * Fraction(s) ** (d - i) * Fraction(t) ** i
                   for i, c in enumerate(self.coeffs))

    @classmethod
    def pure_power(cls, degree: int, alpha, beta) -> "BinaryForm":
        a, b = Fraction(alpha), Fraction(beta)
        return cls(degree, [binom(degree, i) * a ** (degree - i) * b ** i
                            for i in range(degree + 1)])

    @classmethod
    def from_weighted_points(cls, degree: int, terms) -> "BinaryForm":
        out = [Fraction(0)] * (degree + 1)
        for w, (alpha, beta) in terms:
            pw = cls.pure_power(degree, alpha, beta)
            for i in range(degree + 1):
                out[i] += Fraction(w) * pw.coeffs[i]
        return cls(degree, out)

    def __repr__(self):
        return f"BinaryForm(d={self.degree}, {list(map(str, self.coeffs))})"


def _binary_linear_power(a, b, e):
    """(a s + b t)^e as an ascending coefficient list of length e+1."""
    return [binom(e, i) * a ** (e - i) * b ** i for i in range(e + 1)]


def _binary_mul(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        if x == 0:
            continue
        for j, y in enumerate(v):
            out[i + j] += x * y
    return out


def restrict_to_curve(f: BiForm, curve: ProductCurve) -> BinaryForm:
    """f composed with the curve parametrization, expanded in (s, t)."""
    shape = f.shape
    for fac, n in ((curve.factor1, shape.n1), (curve.factor2, shape.n2)):
        coords = fac[1].a if fac[0] == "line" else fac[1]
        if len(coords) != n + 1:
            raise ShapeMismatchError("curve does not match the form's shape")
    deg = curve.restricted_degree(shape)
    total = [Fraction(0)] * (deg + 1)
    for (e1, e2), c in f.coeffs.items():
        poly = [c]
        for fac, exps in ((curve.factor1, e1), (curve.factor2, e2)):
            if fac[0] == "const":
                coords = fac[1]
                scalar = 1
                for j, e in enumerate(exps):
                    if e:
                        scalar *= Fraction(coords[j]) ** e
                poly = [x * scalar for x in poly]
            else:
                line = fac[1]
                for j, e in enumerate(exps):
                    if e:
                        poly = _binary_mul(poly, _binary_linear_power(
                            Fraction(line.a[j]), Fraction(line.b[j]), e))
        for i, x in enumerate(poly):
            total[i] += x
    return BinaryForm(deg, total)


def span_columns(curve: ProductCurve, shape: Shape):
    """Columns of the map (binary degree-D forms) -> ambient vectors.

    Column i is the image of the monomial s^{D-i} t^i, normalized so pure
    powers land on lifts: the symbolic expansion of the lifted curve point
    lift(curve(s, t)) = sum_i s^{D-i} t^i C_i gives column i = C_i / C(D, i).
    """
    D = curve.restricted_degree(shape)
    m1, m2 = shape.monomials()

    def factor_polys(fac, monos, d):
        out = []
        if fac[0] == "const":
            coords = fac[1]
            table = _power_table(coords, d)
            for exps in monos:
                v = multinomial(exps)
                for j, e in enumerate(exps):
                    if e:
                        v *= table[j][e]
                out.append([v])
        else:
            line = fac[1]
            for exps in monos:
                poly = [multinomial(exps)]
                for j, e in enumerate(exps):
                    if e:
                        poly = _binary_mul(poly, _binary_linear_power(
                            line.a[j], line.b[j], e))
                out.append(poly)
        return out

    polys1 = factor_polys(curve.factor1, m1, shape.d1)
    polys2 = factor_polys(curve.factor2, m2, shape.d2)
    cols = [[Fraction(0)] * (len(m1) * len(m2)) for _ in range(D + 1)]
    row = 0
    for u in polys1:
        for v in polys2:
            prod = _binary_mul(u, v)
            for i, x in enumerate(prod):
                if x != 0:
                    cols[i][row] = Fraction(x, binom(D, i))
            row += 1
    return cols


def coords_on_curve_span(vec, curve: ProductCurve, shape: Shape) -> BinaryForm:
    """The unique binary form mapping to ``vec`` under span_columns.

    Raises NotInSpanError when the vector is outside the lifted-curve span.
    Round-trips with lifting: the lift of curve(a, b) maps back to the pure
    power (a s + b t)^D.
    """
    cols = span_columns(curve, shape)
    D = curve.restricted_degree(shape)
    if all(x == 0 for x in vec):
        return BinaryForm(D, [0] * (D + 1))
    sol = linalg.solve_columns(cols, list(vec))
    if sol is None:
        raise NotInSpanError("vector is not in the span of the lifted curve")
    return BinaryForm(D, sol)


def coords_on_line_span(vec, kind: str, basepoint, line: Line, shape: Shape) -> BinaryForm:
    """Binary coordinates of ``vec`` on an alpha- or beta-line slice."""
    if kind == "beta":
        curve = beta_line_curve(basepoint, line)
    elif kind == "alpha":
        curve = alpha_line_curve(line, basepoint)
    else:
        raise ValueError("kind must be 'alpha' or 'beta'")
    return coords_on_curve_span(vec, curve, shape)


def essential_subspaces(f: BiForm):
    """Minimal coordinate subspaces (W1, W2) with f in S^{d1} W1 (x) S^{d2} W2.

    Computed as the row spaces of the two first-order contraction matrices of
    the multinomial-normalized coefficients; returns a pair of row bases.
    """
    if f.is_zero():
        raise ValueError("essential subspaces undefined for the zero form")
    shape = f.shape
    norm = {key: Fraction(val, multinomial(key[0]) * multinomial(key[1]))
            for key, val in f.coeffs.items()}

    def contraction(which):
        nvars = (shape.n1 if which == 0 else shape.n2) + 1
        rows = {}
        for (e1, e2), val in norm.items():
            exps = e1 if which == 0 else e2
            other = e2 if which == 0 else e1
            for j in range(nvars):
                if exps[j] == 0:
                    continue
                u = list(exps)
                u[j] -= 1
                rkey = (tuple(u), other)
                if rkey not in rows:
                    rows[rkey] = [Fraction(0)] * nvars
                rows[rkey][j] = val
        return [rows[k] for k in sorted(rows)]

    w1 = linalg.row_space_basis(contraction(0))
    w2 = linalg.row_space_basis(contraction(1))
    return w1, w2
