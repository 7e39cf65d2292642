"""Seeded construction of two-witness instances.

An instance is a bi-homogeneous p together with two different minimal
witnesses S = E u M1 and A = E u M2 sharing the off-line part E, where
M1 != M2 are rational decompositions of one binary form Q planted on an
alpha- or beta-line with a prescribed border rank b.

Rational planting of Q, by border-rank class (d the degree along the line,
r = d + 2 - b the rank of Q):

* b = (d+2)/2, d even ("boundary"): Q is the 1-dimensional joint apolar
  solution of two disjoint split forms h1, h2 of degree r = b; their root
  sets are the two witnesses.
* b = 2 jet: plant the double-point g = (X-theta)^2 and one split h1; Q is
  the joint apolar solution.  Every further witness comes from one linear
  solve (prescribed logarithmic derivative at theta), so the family is
  unlimited over the rationals.
* b = 3 jet: witnesses of a border-rank-3 form correspond, after a Mobius
  change of coordinates y = (eta - x)/(theta - x), to root sets with equal
  sum and equal product.  Triples of rationals with sum 0 and product -30
  ({1,5,-6}, {2,3,-5}, {1/2,15/2,-8}) extended by a shared scaled tail give
  two (or three) exactly matched witnesses; g = (X-theta)^2 (X-eta).
* b >= 4 jets need d >= 7 (outside desk scale) and have no dense rational
  witness family: reported as infeasible.

Every generated instance is certified exactly before it is returned:
independence of both witness lifts, leave-one-out minimality of p in both,
positive defect of the union, and recovery of the planted line by the
exhaustive line search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg, structure, sylvester
from .errors import InfeasibleInstanceError
from .forms import (BiForm, BinaryForm, Line, PointPair, Shape, binom,
                    combine, lift)
from .rng import SplitMix64
from .structure import (SpecialLine, WitnessDecomposition, find_special_line,
                        hilbert_defect, lift_rows, line_degree,
                        normalized_term)

MATCHED_TRIPLES = (
    (Fraction(1), Fraction(5), Fraction(-6)),
    (Fraction(2), Fraction(3), Fraction(-5)),
    (Fraction(1, 2), Fraction(15, 2), Fraction(-8)),
)  # equal sum (0) and equal product (-30); see module docstring


class _Degenerate(Exception):
    """Internal: a random draw hit a coincidence; redraw."""


def binary_from_roots(roots, degree=None):
    """Monic-in-s split form prod (s - x t) for finite rational roots x."""
    poly = [Fraction(1)]
    for x in roots:
        poly = [a - Fraction(x) * b
                for a, b in zip(poly + [Fraction(0)], [Fraction(0)] + poly)]
    # poly is ascending in t with alternating-sign elementary symmetric values
    return BinaryForm(degree or len(list(roots)), poly)


def _apolar_conditions(h: BinaryForm, d: int):
    """Rows of the linear system 'degree-d forms apolar to h' in plain coeffs."""
    k = h.degree
    rows = []
    for v in range(d - k + 1):
        row = [Fraction(0)] * (d + 1)
        for i, hi in enumerate(h.coeffs):
            row[v + i] = Fraction(hi, binom(d, v + i))
        rows.append(row)
    return rows


def joint_apolar_solution(forms, d: int):
    """The unique (expected) degree-d form apolar to all given forms, or None."""
    rows = []
    for h in forms:
        rows.extend(_apolar_conditions(h, d))
    kern = linalg.kernel_basis(rows)
    if len(kern) != 1:
        return None
    den_lcm = 1
    import math
    for c in kern[0]:
        den_lcm = math.lcm(den_lcm, Fraction(c).denominator)
    ints = [int(Fraction(c) * den_lcm) for c in kern[0]]
    g = math.gcd(*[abs(x) for x in ints])
    return BinaryForm(d, [x // g for x in ints])


def _plant_boundary(d, b, rng: SplitMix64):
    r = d + 2 - b
    bound = d + 4
    roots1 = rng.distinct_fractions(r, bound, max_den=2)
    roots2 = rng.distinct_fractions(r, bound, max_den=2, avoid=roots1)
    h1 = binary_from_roots(roots1)
    h2 = binary_from_roots(roots2)
    q = joint_apolar_solution([h1, h2], d)
    if q is None:
        raise _Degenerate
    return q, roots1, roots2


def _plant_jet2(d, b, rng: SplitMix64):
    r = d  # d + 2 - 2
    bound = d + 4
    theta = rng.fraction(4, max_den=2)
    roots1 = rng.distinct_fractions(r, bound, max_den=2, avoid=[theta])
    g = binary_from_roots([theta, theta])
    h1 = binary_from_roots(roots1)
    q = joint_apolar_solution([g, h1], d)
    if q is None:
        raise _Degenerate
    # second witness: swap all roots through the tangent-direction condition
    target = sum(Fraction(1) / (theta - x) for x in roots1)
    for _ in range(200):
        draw = rng.distinct_fractions(r - 1, bound, max_den=2, avoid=[theta])
        s = target - sum(Fraction(1) / (theta - x) for x in draw)
        if s == 0:
            continue
        last = theta - Fraction(1) / s
        if last in draw or last == theta:
            continue
        roots2 = draw + [last]
        if set(roots2) != set(roots1):
            return q, roots1, roots2
    raise _Degenerate


def _plant_jet3(d, b, rng: SplitMix64):
    r = d - 1  # d + 2 - 3
    if r < 3:
        raise InfeasibleInstanceError("b=3 jet needs rank >= 3")
    for _ in range(200):
        t = rng.choice([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)])
        tri1 = [t * v for v in MATCHED_TRIPLES[0]]
        tri2 = [t * v for v in MATCHED_TRIPLES[1]]
        used = set(tri1) | set(tri2) | {Fraction(0), Fraction(1)}
        if len(used) != 8:
            continue
        tail = rng.distinct_fractions(r - 3, 6, max_den=2, avoid=used)
        ys1 = tri1 + tail
        ys2 = tri2 + tail
        theta = rng.fraction(4, max_den=2)
        eta = rng.fraction(4, max_den=2)
        if theta == eta:
            continue

        def back(y):
            return (theta * y - eta) / (y - 1)

        roots1 = [back(y) for y in ys1]
        roots2 = [back(y) for y in ys2]
        if len(set(roots1)) != r or len(set(roots2)) != r:
            continue
        g = binary_from_roots([theta, theta, eta])
        h1 = binary_from_roots(roots1)
        q = joint_apolar_solution([g, h1], d)
        if q is None:
            continue
        # the matched construction forces h2 apolar as well; verify exactly
        h2 = binary_from_roots(roots2)
        rows = _apolar_conditions(h2, d)
        if any(sum(row[j] * q.coeffs[j] for j in range(d + 1)) != 0
               for row in rows):
            continue
        return q, roots1, roots2
    raise _Degenerate


def plant_binary(d: int, b: int, rng: SplitMix64):
    """(Q, roots1, roots2): a degree-d form of border rank b with two planted
    rational witnesses given by the two root lists."""
    if not 2 <= b <= (d + 2) // 2:
        raise InfeasibleInstanceError(f"border rank {b} out of range 2..{(d+2)//2}")
    if 2 * b == d + 2:
        q, r1, r2 = _plant_boundary(d, b, rng)
    elif b == 2:
        q, r1, r2 = _plant_jet2(d, b, rng)
    elif b == 3:
        q, r1, r2 = _plant_jet3(d, b, rng)
    else:
        raise InfeasibleInstanceError(
            f"no rational two-witness plant for the b={b} jet class "
            f"(needs degree >= {2*b - 1}, beyond desk scale)")
    res = sylvester.analyze(q, require_witness=False)
    if res.border_rank != b or res.rank != d + 2 - b:
        raise _Degenerate
    return q, r1, r2


@dataclass
class InstanceMeta:
    kind: str
    base: tuple
    line: Line
    e_keys: frozenset
    b: int
    residual_rank: int
    seed: int
    q_form: BinaryForm
    m1_roots: tuple
    m2_roots: tuple


@dataclass
class Instance:
    shape: Shape
    p: BiForm
    S: WitnessDecomposition
    A: WitnessDecomposition
    meta: InstanceMeta

    def special_line(self) -> SpecialLine:
        return SpecialLine(self.meta.kind, self.meta.base, self.meta.line, ())


def _hypotheses_hold(shape: Shape, r: int) -> bool:
    cond_a = 2 * r <= 1 + shape.d1 + shape.d2 and abs(shape.d1 - shape.d2) <= 2
    cond_b = r <= min(shape.d1, shape.d2)
    return cond_a or cond_b


def _random_point(rng, n, bound):
    return tuple(rng.nonzero_int_vector(n + 1, bound))


def _on_line_terms(kind, base, line: Line, roots, weights, shape):
    terms = []
    for x, w in zip(roots, weights):
        moving = line.at(Fraction(x), Fraction(1))
        pt = (PointPair(base, moving) if kind == "beta"
              else PointPair(moving, base))
        terms.append(normalized_term(w, pt, shape))
    return terms


def generate_instance(shape: Shape, b: int, e_count: int, seed: int,
                      kind: str = "beta") -> Instance:
    """Deterministic instance with planted (kind, line, E, b); see module doc."""
    if kind not in ("alpha", "beta"):
        raise ValueError("kind must be 'alpha' or 'beta'")
    d = line_degree(shape, kind)
    n_line = shape.n2 if kind == "beta" else shape.n1
    n_base = shape.n1 if kind == "beta" else shape.n2
    if n_line < 1:
        raise InfeasibleInstanceError("the line factor needs dimension >= 1")
    if not 2 <= b <= (d + 2) // 2:
        raise InfeasibleInstanceError(
            f"border rank {b} out of range 2..{(d+2)//2} for line degree {d}")
    r_q = d + 2 - b
    r = e_count + r_q
    if not _hypotheses_hold(shape, r):
        raise InfeasibleInstanceError(
            f"rank {r} = |E| + (d+2-b) satisfies neither 2r <= 1+d1+d2 with "
            f"|d1-d2| <= 2 nor r <= min(d1,d2) for {shape}")
    rng = SplitMix64(seed)
    coord_bound = 6
    for _attempt in range(60):
        try:
            return _try_generate(shape, b, e_count, seed, kind, d, n_line,
                                 n_base, r_q, rng, coord_bound)
        except _Degenerate:
            continue
    raise InfeasibleInstanceError(
        "could not realize the requested instance in 60 seeded attempts")


def _try_generate(shape, b, e_count, seed, kind, d, n_line, n_base, r_q,
                  rng, coord_bound):
    q, roots1, roots2 = plant_binary(d, b, rng)
    base = _random_point(rng, n_base, coord_bound)
    a_pt = _random_point(rng, n_line, coord_bound)
    b_pt = _random_point(rng, n_line, coord_bound)
    if linalg.rank([list(a_pt), list(b_pt)]) != 2:
        raise _Degenerate
    line = Line(a_pt, b_pt)
    w1 = sylvester.solve_weights(q, [(Fraction(x), Fraction(1)) for x in roots1])
    w2 = sylvester.solve_weights(q, [(Fraction(x), Fraction(1)) for x in roots2])
    if w1 is None or w2 is None or 0 in w1 or 0 in w2:
        raise _Degenerate
    m1_terms = _on_line_terms(kind, base, line, roots1, w1, shape)
    m2_terms = _on_line_terms(kind, base, line, roots2, w2, shape)
    special = SpecialLine(kind, base, line, ())
    e_terms = []
    for _ in range(e_count):
        for _try in range(50):
            pt = PointPair(_random_point(rng, shape.n1, coord_bound),
                           _random_point(rng, shape.n2, coord_bound))
            if special.contains(pt):
                continue
            if any(pt.same_point(other) for _, other in e_terms):
                continue
            e_terms.append((Fraction(rng.nonzero_int(4)), pt.primitive()))
            break
        else:
            raise _Degenerate
    s_terms = tuple(e_terms + m1_terms)
    a_terms = tuple(e_terms + m2_terms)
    p = combine(s_terms, shape)
    try:
        S = WitnessDecomposition(shape, s_terms, p)
        A = WitnessDecomposition(shape, a_terms, p)
    except ValueError:
        raise _Degenerate
    if S.point_keys() == A.point_keys():
        raise _Degenerate
    _certify(shape, p, S, A, special, d, b)
    meta = InstanceMeta(kind, base, line,
                        frozenset(pt.key() for _, pt in e_terms), b, r_q, seed,
                        q, tuple(roots1), tuple(roots2))
    return Instance(shape, p, S, A, meta)


def _certify(shape, p, S, A, special, d, b):
    pvec = p.vector()
    for W in (S, A):
        rows = lift_rows(W.points(), shape)
        for i in range(len(rows)):
            others = rows[:i] + rows[i + 1:]
            if linalg.span_contains(others, pvec):
                raise _Degenerate
    union = list({pt.key(): pt for pt in S.points() + A.points()}.values())
    if hilbert_defect(union, shape) < 1:
        raise _Degenerate
    found = find_special_line(union, shape)
    if found is None or found.signature() != special.signature():
        raise _Degenerate
    on_line = [pt for pt in union if special.contains(pt)]
    if {pt.key() for pt in found.members} != {pt.key() for pt in on_line}:
        raise _Degenerate


def minimality_evidence(p: BiForm, r: int, shape: Shape, trials: int,
                        seed: int, coord_bound: int = 6) -> bool:
    """Randomized falsification: no random (r-1)-point set spans p.

    Evidence for minimality, not proof; True means no smaller witness was
    found in ``trials`` seeded draws.
    """
    rng = SplitMix64(seed)
    pvec = p.vector()
    for _ in range(trials):
        pts = []
        while len(pts) < r - 1:
            cand = PointPair(_random_point(rng, shape.n1, coord_bound),
                             _random_point(rng, shape.n2, coord_bound))
            if not any(cand.same_point(q) for q in pts):
                pts.append(cand)
        if linalg.span_contains(lift_rows(pts, shape), pvec):
            return False
    return True
