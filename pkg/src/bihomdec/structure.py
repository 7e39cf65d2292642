"""Structure of the minimal decompositions of a bi-homogeneous polynomial.

A point with two different minimal decompositions S != A concentrates its
ambiguity on a single alpha- or beta-line: S and A share an off-line part E,
the on-line parts are decompositions of a unique binary form Q on the line,
and the border rank b of Q ties the counts together as
|E| = r + b - d - 2 (with d the degree along the line).  This module finds
the line, splits the witnesses, extracts Q exactly, extends E by fresh
on-line decompositions, and cross-checks that everything is independent of
which pair of witnesses was used.

Defect bookkeeping is reduced and exact throughout: the Hilbert defect of a
finite set is its cardinality minus the rank of its lifted vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, sylvester
from .errors import (NoSpecialLineError, PreconditionError, ShapeMismatchError,
                     SplitMismatchError)
from .forms import (BiForm, BinaryForm, Line, PointPair, Shape,
                    alpha_line_curve, beta_line_curve, canonical_coords,
                    combine, coords_on_curve_span, lift, points_distinct)


def lift_rows(points, shape: Shape):
    """Integer lift vectors of primitive representatives (rank-safe scaling)."""
    return [lift(p.primitive(), shape) for p in points]


def hilbert_defect(points, shape: Shape) -> int:
    """|Z| minus the rank of the lifted vectors; zero iff lifts independent."""
    points = list(points)
    if not points_distinct(points):
        raise ValueError("duplicate points in defect computation")
    if not points:
        return 0
    return len(points) - linalg.rank(lift_rows(points, shape))


def check_rho_prime(shape: Shape, points) -> bool:
    """True iff the lifts are independent.

    Guaranteed for any set of at most 1 + min(d1, d2) distinct points; a
    False there is a bug, not an input error.
    """
    return hilbert_defect(points, shape) == 0


@dataclass(frozen=True)
class SpecialLine:
    kind: str            # "alpha" | "beta"
    base: tuple          # coords of the constant factor (primitive)
    line: Line
    members: tuple       # the input points found on the slice

    def curve(self):
        if self.kind == "beta":
            return beta_line_curve(self.base, self.line)
        return alpha_line_curve(self.line, self.base)

    def signature(self):
        return (self.kind, canonical_coords(self.base), self.line.span_key())

    def contains(self, pt: PointPair) -> bool:
        if self.kind == "beta":
            fixed, moving = pt.p1, pt.p2
        else:
            fixed, moving = pt.p2, pt.p1
        if canonical_coords(fixed) != canonical_coords(self.base):
            return False
        return self.line.contains(moving)


def _canonical_frame_line(n: int) -> Line:
    e0 = tuple(1 if i == 0 else 0 for i in range(n + 1))
    e1 = tuple(1 if i == 1 else 0 for i in range(n + 1))
    return Line(e0, e1)


def _lines_through(coords_list):
    """Distinct lines spanned by pairs, as {span_key: (a, b)}."""
    out = {}
    for i in range(len(coords_list)):
        for j in range(i + 1, len(coords_list)):
            a, b = coords_list[i], coords_list[j]
            if linalg.rank([list(a), list(b)]) != 2:
                continue
            line = Line(a, b)
            out.setdefault(line.span_key(), line)
    return out


def find_all_special_lines(points, shape: Shape):
    """Every alpha-/beta-line slice holding at least d+2 of the points.

    Search is exhaustive: group by the shared factor coordinate, then test
    collinearity of the other coordinates through rank-2 minors, so an empty
    answer is a certificate for reduced inputs.
    """
    points = [p.primitive() for p in points]
    found = []
    for kind in ("beta", "alpha"):
        if kind == "beta":
            threshold = shape.d2 + 2
            nline = shape.n2
            groups = {}
            for p in points:
                groups.setdefault(canonical_coords(p.p1), []).append(p)
        else:
            threshold = shape.d1 + 2
            nline = shape.n1
            groups = {}
            for p in points:
                groups.setdefault(canonical_coords(p.p2), []).append(p)
        if nline == 0:
            continue
        for _, grp in sorted(groups.items(), key=lambda kv: kv[0]):
            if len(grp) < threshold:
                continue
            base = grp[0].p1 if kind == "beta" else grp[0].p2
            moving = [(p.p2 if kind == "beta" else p.p1) for p in grp]
            if nline == 1:
                members = tuple(grp)
                found.append(SpecialLine(kind, base, _canonical_frame_line(1), members))
                continue
            for _, line in sorted(_lines_through(moving).items()):
                members = tuple(p for p, mv in zip(grp, moving) if line.contains(mv))
                if len(members) >= threshold:
                    cand = SpecialLine(kind, base, line, members)
                    if all(c.signature() != cand.signature() for c in found):
                        found.append(cand)
    return found


def find_special_line(points, shape: Shape):
    """The qualifying line slice, or None.

    At most one line qualifies inside the theorem regime (|B| <= d1+d2+1);
    if several appear on larger inputs, the one with the most members wins
    (deterministic tiebreak).
    """
    cands = find_all_special_lines(points, shape)
    if not cands:
        return None
    return max(cands, key=lambda c: (len(c.members), c.kind == "beta",
                                     c.signature()))


@dataclass(frozen=True)
class WitnessDecomposition:
    """Weighted point set whose lifts span the target exactly and minimally."""

    shape: Shape
    terms: tuple           # ((weight, PointPair), ...)
    target: BiForm

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           tuple((Fraction(w), pt) for w, pt in self.terms))
        pts = self.points()
        if not points_distinct(pts):
            raise ValueError("witness has duplicate points")
        if combine(self.terms, self.shape) != self.target:
            raise ValueError("witness terms do not recombine to the target")
        if pts and linalg.rank(lift_rows(pts, self.shape)) != len(pts):
            raise ValueError("witness lifts are dependent (cannot be minimal)")

    def points(self):
        return [pt for _, pt in self.terms]

    def point_keys(self):
        return frozenset(pt.key() for pt in self.points())

    def cardinality(self) -> int:
        return len(self.terms)


@dataclass
class UniqueQ:
    vector: list            # ambient coefficient vector of Q
    rank_recorded: int      # |S| - |G|
    g_weights: list         # weights on G with target = sum + vector


def unique_Q(p: BiForm, S: WitnessDecomposition, A: WitnessDecomposition,
             G) -> UniqueQ:
    """The unique on-both-spans point Q with [p] in <lift(G), Q>.

    G must be a common sub-point-set of S and A, and S != A; the direct-sum
    failure modes (p in span(G), dependent columns, empty intersection) all
    signal precondition violations.
    """
    g_points = [pt.primitive() for pt in G]
    g_keys = [pt.key() for pt in g_points]
    if len(set(g_keys)) != len(g_keys):
        raise PreconditionError("G has duplicate points")
    s_keys = S.point_keys()
    a_keys = A.point_keys()
    if not set(g_keys) <= s_keys or not set(g_keys) <= a_keys:
        raise PreconditionError("G is not a common subset of S and A")
    if s_keys == a_keys:
        raise PreconditionError("S and A must be different point sets")
    if S.target != p or A.target != p:
        raise PreconditionError("S and A must both witness p")
    g_keyset = set(g_keys)
    s_rest = [pt for pt in S.points() if pt.key() not in g_keyset]
    a_rest = [pt for pt in A.points() if pt.key() not in g_keyset]
    inter = linalg.span_intersect(lift_rows(s_rest, S.shape),
                                  lift_rows(a_rest, A.shape))
    if not inter:
        raise PreconditionError("intersection not a single point: spans are disjoint")
    g_lifts = lift_rows(g_points, S.shape)
    cols = [list(v) for v in inter] + [list(v) for v in g_lifts]
    try:
        sol = linalg.solve_columns(cols, p.vector())
    except ValueError:
        raise PreconditionError(
            "intersection not a single point: span(G) meets the intersection")
    if sol is None:
        raise PreconditionError("p is not in the combined span")
    k = len(inter)
    qvec = [sum(sol[i] * inter[i][j] for i in range(k))
            for j in range(len(inter[0]))]
    if all(x == 0 for x in qvec):
        raise PreconditionError("p lies in span(G); Q would be zero")
    return UniqueQ(qvec, S.cardinality() - len(g_points), list(sol[k:]))


@dataclass
class SplitDecomposition:
    shape: Shape
    target: BiForm
    e_terms: tuple          # ((weight, PointPair), ...) off the line
    line: SpecialLine
    q_vector: list
    q_form: BinaryForm
    b: int                  # border rank of q_form
    residual_rank: int      # rank of q_form = |S| - |E|

    def signature(self):
        return self.line.signature() + (
            frozenset(pt.key() for _, pt in self.e_terms), self.b)


def line_degree(shape: Shape, kind: str) -> int:
    return shape.d2 if kind == "beta" else shape.d1


def analyze_pair(p: BiForm, S: WitnessDecomposition,
                 A: WitnessDecomposition) -> SplitDecomposition:
    """Recover (line, E, Q, b) from two different minimal witnesses of p."""
    if S.target != p or A.target != p:
        raise PreconditionError("S and A must both witness p")
    if S.point_keys() == A.point_keys():
        raise PreconditionError("S and A must be different point sets")
    union = {pt.key(): pt for pt in S.points() + A.points()}
    special = find_special_line(list(union.values()), p.shape)
    if special is None:
        raise NoSpecialLineError(
            "no line slice reaches its defect threshold "
            "(outside the two-witness regime, or the conic case)")
    e_s = [pt for pt in S.points() if not special.contains(pt)]
    e_a = [pt for pt in A.points() if not special.contains(pt)]
    if {pt.key() for pt in e_s} != {pt.key() for pt in e_a}:
        raise SplitMismatchError(
            f"off-line parts differ: S gives {sorted(pt.key() for pt in e_s)}, "
            f"A gives {sorted(pt.key() for pt in e_a)}")
    uq = unique_Q(p, S, A, e_s)
    q_form = coords_on_curve_span(uq.vector, special.curve(), p.shape)
    syl = sylvester.analyze(q_form, require_witness=False)
    d = line_degree(p.shape, special.kind)
    r = S.cardinality()
    if len(e_s) != r + syl.border_rank - d - 2:
        raise SplitMismatchError(
            f"bookkeeping failed: |E|={len(e_s)} but r+b-d-2="
            f"{r + syl.border_rank - d - 2}")
    e_terms = tuple((w, pt.primitive()) for w, pt in zip(uq.g_weights, e_s))
    return SplitDecomposition(p.shape, p, e_terms, special, uq.vector, q_form,
                              syl.border_rank, uq.rank_recorded)


def normalized_term(weight, pt: PointPair, shape: Shape):
    """Rescale the point to its primitive representative, moving the exact
    compensating factor into the weight."""
    prim = pt.primitive()
    f1 = next(Fraction(a) / b for a, b in zip(pt.p1, prim.p1) if b != 0)
    f2 = next(Fraction(a) / b for a, b in zip(pt.p2, prim.p2) if b != 0)
    return (Fraction(weight) * f1 ** shape.d1 * f2 ** shape.d2, prim)


def extend_witness(split: SplitDecomposition, m_witness) -> WitnessDecomposition:
    """E together with a fresh on-line decomposition of Q is again a witness."""
    shape = split.shape
    curve = split.line.curve()
    terms = list(split.e_terms)
    for w, (alpha, beta) in m_witness:
        pt = curve.at(alpha, beta)
        terms.append(normalized_term(w, pt, shape))
    return WitnessDecomposition(shape, tuple(terms), split.target)


@dataclass
class Ee7Report:
    pair_signatures: list    # ((i, j), signature) per unordered pair
    passed: bool

    def agreed_signature(self):
        return self.pair_signatures[0][1] if self.pair_signatures else None


def verify_ee7(p: BiForm, witnesses) -> Ee7Report:
    """All witness pairs must agree on (kind, base, line, E, b)."""
    witnesses = list(witnesses)
    if len(witnesses) < 2:
        raise PreconditionError("need at least two witnesses")
    keysets = [w.point_keys() for w in witnesses]
    if len(set(keysets)) != len(keysets):
        raise PreconditionError("witnesses must be pairwise distinct")
    if len({w.cardinality() for w in witnesses}) != 1:
        raise PreconditionError("witnesses must share one cardinality")
    for w in witnesses:
        if w.target != p:
            raise PreconditionError("every witness must decompose p")
    sigs = []
    for i in range(len(witnesses)):
        for j in range(i + 1, len(witnesses)):
            split = analyze_pair(p, witnesses[i], witnesses[j])
            sigs.append(((i, j), split.signature()))
    passed = len({s for _, s in sigs}) == 1
    return Ee7Report(sigs, passed)


@dataclass
class ConicFlag:
    constant_factor: int     # 1 if all points share the first coordinate
    plane_basis: list        # rows spanning the supporting 3-dim coordinate space
    conic_matrix: list       # symmetric 3x3 matrix of a reduced conic through the points
    conic_rank: int


def _veronese2(coords):
    n = len(coords)
    row = []
    for i in range(n):
        for j in range(i, n):
            row.append(coords[i] * coords[j] * (1 if i == j else 2))
    return row


def case_iii_recognizer(p: BiForm, S: WitnessDecomposition,
                        A: WitnessDecomposition):
    """Flag the one-factor configuration supported on a reduced conic.

    Only meaningful after analyze_pair found no special line.  Recognition
    only: checks that all points of S u A share one factor coordinate, that
    the set is in the defect regime |Z| >= 2t+2 with positive defect, and
    that the other coordinates lie on a common conic of rank >= 2 inside the
    plane they span.  Returns a ConicFlag or None.
    """
    union = list({pt.key(): pt.primitive()
                  for pt in S.points() + A.points()}.values())
    if find_special_line(union, p.shape) is not None:
        return None
    for which in (1, 2):
        fixed = [pt.p1 if which == 1 else pt.p2 for pt in union]
        keys = {PointPair(f, f).canonical().p1 for f in fixed}
        if len(keys) != 1:
            continue
        moving = [list(pt.p2 if which == 1 else pt.p1) for pt in union]
        t = p.shape.d2 if which == 1 else p.shape.d1
        if len(union) < 2 * t + 2:
            continue
        if hilbert_defect(union, p.shape) < 1:
            continue
        basis = linalg.row_space_basis(moving)
        if len(basis) != 3:
            continue
        # coordinates of each point inside the supporting plane
        plane_coords = []
        for mv in moving:
            sol = linalg.solve_columns(basis, mv)
            if sol is None:
                return None
            plane_coords.append(sol)
        rows = [_veronese2(c) for c in plane_coords]
        quadrics = linalg.kernel_basis(rows)
        for q in quadrics:
            # q lists the upper triangle (i <= j) of a symmetric 3x3 matrix
            mat = [[Fraction(0)] * 3 for _ in range(3)]
            k = 0
            for i in range(3):
                for j in range(i, 3):
                    mat[i][j] = q[k]
                    mat[j][i] = q[k]
                    k += 1
            rk = linalg.rank(mat)
            if rk >= 2:
                return ConicFlag(which, basis, mat, rk)
    return None
