"""Seeded verification suites behind the CLI's ``verify`` subcommand.

Each suite replays one statement family at desk scale and returns a
:class:`~bihomdec.serialize.Report`; identical seed and parameters reproduce
the report byte-identically up to the timing field.  Failures carry the full
reproduction payload.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import linalg, sylvester
from .errors import BihomError, InfeasibleInstanceError
from .forms import (BiForm, BinaryForm, Line, PointPair, ProductCurve, Shape,
                    canonical_coords, combine, essential_subspaces, lift,
                    rank1)
from .instances import generate_instance, minimality_evidence
from .linalg import format_rational
from .rng import SplitMix64
from .serialize import Report, pointpair_to_obj
from .structure import (SpecialLine, analyze_pair, extend_witness,
                        find_all_special_lines, hilbert_defect, lift_rows,
                        line_degree, verify_ee7)
from .tangential import (JetK, dependency_set, reducible_decompose,
                         tangent_form, tangential_decompose, tangential_rank)


def _fail(failures, trial, **payload):
    payload["trial"] = trial
    failures.append(payload)


def _pt_payload(pt: PointPair):
    return pointpair_to_obj(pt)


def _random_pointpair(rng, shape, bound):
    return PointPair(tuple(rng.nonzero_int_vector(shape.n1 + 1, bound)),
                     tuple(rng.nonzero_int_vector(shape.n2 + 1, bound)))


def _distinct_pointpairs(rng, shape, count, bound):
    pts = []
    while len(pts) < count:
        cand = _random_pointpair(rng, shape, bound)
        if not any(cand.same_point(p) for p in pts):
            pts.append(cand)
    return pts


def _line_in(rng, n, bound):
    while True:
        a = tuple(rng.nonzero_int_vector(n + 1, bound))
        b = tuple(rng.nonzero_int_vector(n + 1, bound))
        if linalg.rank([list(a), list(b)]) == 2:
            return Line(a, b)


def _distinct_params(rng, count, bound):
    """Distinct projective parameters (s : 1) with small integer s."""
    vals = rng.distinct_fractions(count, bound, max_den=2)
    return [(v, Fraction(1)) for v in vals]


def suite_point_independence(shape, trials, seed, coord_bound=10):
    """Any 1+min(d1,d2) points lift independently; one more on a line does not."""
    shape = shape or Shape(2, 2, 3, 4)
    rng = SplitMix64(seed)
    failures = []
    k = 1 + min(shape.d1, shape.d2)
    for t in range(trials):
        pts = _distinct_pointpairs(rng, shape, k, coord_bound)
        d = hilbert_defect(pts, shape)
        if d != 0:
            _fail(failures, t, defect=d, points=[_pt_payload(p) for p in pts])
    # the tight counterexample: min(d)+2 points on the matching line slice
    kind = "beta" if shape.d2 <= shape.d1 else "alpha"
    d_line = min(shape.d1, shape.d2)
    n_line = shape.n2 if kind == "beta" else shape.n1
    n_base = shape.n1 if kind == "beta" else shape.n2
    for t in range(min(trials, 50)):
        line = _line_in(rng, n_line, coord_bound)
        base = tuple(rng.nonzero_int_vector(n_base + 1, coord_bound))
        params = _distinct_params(rng, d_line + 2, coord_bound)
        pts = []
        for s, u in params:
            moving = line.at(s, u)
            pts.append(PointPair(base, moving) if kind == "beta"
                       else PointPair(moving, base))
        d = hilbert_defect(pts, shape)
        if d != 1:
            _fail(failures, trials + t, defect=d, expected=1,
                  config="line slice with min(d)+2 points")
    return Report("lemma-suck", {"shape": _shape_str(shape),
                                 "coord_bound": coord_bound}, seed,
                  trials, failures)


def suite_line_defect(shape, trials, seed, coord_bound=10):
    """On a line slice the defect is exactly max(0, |Z| - d - 1)."""
    shape = shape or Shape(2, 2, 3, 4)
    rng = SplitMix64(seed)
    failures = []
    for t in range(trials):
        kind = "beta" if t % 2 == 0 else "alpha"
        d_line = line_degree(shape, kind)
        n_line = shape.n2 if kind == "beta" else shape.n1
        n_base = shape.n1 if kind == "beta" else shape.n2
        line = _line_in(rng, n_line, coord_bound)
        base = tuple(rng.nonzero_int_vector(n_base + 1, coord_bound))
        size = 1 + rng.randrange(d_line + 4)
        params = _distinct_params(rng, size, coord_bound + d_line)
        pts = []
        for s, u in params:
            moving = line.at(s, u)
            pts.append(PointPair(base, moving) if kind == "beta"
                       else PointPair(moving, base))
        d = hilbert_defect(pts, shape)
        expected = max(0, size - d_line - 1)
        if d != expected:
            _fail(failures, t, kind=kind, size=size, defect=d,
                  expected=expected)
    return Report("remark-b5", {"shape": _shape_str(shape),
                                "coord_bound": coord_bound}, seed,
                  trials, failures)


def suite_curve_defect(shape, trials, seed, coord_bound=10):
    """Smooth (1,1)-curves in P^1 x P^1: defect starts exactly at d1+d2+2 points."""
    base = shape or Shape(1, 1, 3, 4)
    shape = Shape(1, 1, base.d1, base.d2)
    rng = SplitMix64(seed)
    failures = []
    D = shape.d1 + shape.d2
    for t in range(trials):
        curve = ProductCurve(("line", _line_in(rng, 1, coord_bound)),
                             ("line", _line_in(rng, 1, coord_bound)))
        params = _distinct_params(rng, D + 2, coord_bound + D)
        pts = [curve.at(s, u) for s, u in params]
        d_small = hilbert_defect(pts[:-1], shape)
        d_full = hilbert_defect(pts, shape)
        if d_small != 0:
            _fail(failures, t, stage="d1+d2+1 points", defect=d_small)
        if d_full < 1:
            _fail(failures, t, stage="d1+d2+2 points", defect=d_full)
    return Report("lemma-b3", {"shape": _shape_str(shape),
                               "coord_bound": coord_bound}, seed,
                  trials, failures)


def feasible_combos(shape: Shape):
    """(kind, b, e) triples the generator can realize for this shape."""
    out = []
    for kind in ("beta", "alpha"):
        d = line_degree(shape, kind)
        n_line = shape.n2 if kind == "beta" else shape.n1
        if n_line < 1:
            continue
        for b in range(2, (d + 2) // 2 + 1):
            if 2 * b != d + 2 and b > 3:
                continue  # no rational two-witness plant beyond desk scale
            for e in (0, 1, 2):
                r = e + d + 2 - b
                cond_a = (2 * r <= 1 + shape.d1 + shape.d2
                          and abs(shape.d1 - shape.d2) <= 2)
                cond_b = r <= min(shape.d1, shape.d2)
                if cond_a or cond_b:
                    out.append((kind, b, e))
    return out


DEFAULT_INSTANCE_SHAPES = (Shape(1, 1, 4, 4), Shape(1, 1, 5, 5),
                           Shape(1, 1, 6, 6), Shape(2, 1, 4, 5),
                           Shape(1, 2, 6, 3), Shape(2, 2, 5, 5),
                           Shape(1, 1, 6, 4), Shape(1, 1, 2, 2))


def _instance_stream(shape, trials, seed):
    """Yield up to ``trials`` generated instances cycling the feasible grid."""
    shapes = (shape,) if shape else DEFAULT_INSTANCE_SHAPES
    grid = [(s, kind, b, e) for s in shapes
            for (kind, b, e) in feasible_combos(s)]
    if not grid:
        raise InfeasibleInstanceError(f"no feasible instance class for {shape}")
    for t in range(trials):
        s, kind, b, e = grid[t % len(grid)]
        yield t, generate_instance(s, b, e, seed + 7919 * t, kind=kind)


def suite_roundtrip(shape, trials, seed, coord_bound=10):
    """analyze_pair recovers the planted (kind, line, E, b) with exact bookkeeping."""
    failures = []
    for t, inst in _instance_stream(shape, trials, seed):
        try:
            split = analyze_pair(inst.p, inst.S, inst.A)
        except BihomError as exc:
            _fail(failures, t, error=str(exc), seed=inst.meta.seed,
                  shape=_shape_str(inst.shape))
            continue
        meta = inst.meta
        d = line_degree(inst.shape, split.line.kind)
        checks = {
            "kind": split.line.kind == meta.kind,
            "line": split.line.signature() == inst.special_line().signature(),
            "E": frozenset(pt.key() for _, pt in split.e_terms) == meta.e_keys,
            "b": split.b == meta.b,
            "bookkeeping": len(split.e_terms)
                           == inst.S.cardinality() + split.b - d - 2,
        }
        if not all(checks.values()):
            _fail(failures, t, seed=inst.meta.seed,
                  shape=_shape_str(inst.shape),
                  failed=[k for k, v in checks.items() if not v])
    return Report("thm-ee11", {"shape": _shape_str(shape) if shape else "grid",
                               "coord_bound": coord_bound}, seed,
                  trials, failures)


def suite_mutual_exclusivity(shape, trials, seed, coord_bound=10):
    """No S u A set carries both a qualifying alpha- and beta-line."""
    failures = []
    for t, inst in _instance_stream(shape, trials, seed):
        union = list({pt.key(): pt
                      for pt in inst.S.points() + inst.A.points()}.values())
        if len(union) > inst.shape.d1 + inst.shape.d2 + 1:
            _fail(failures, t, error="union outside the theorem regime",
                  size=len(union))
            continue
        kinds = {sl.kind for sl in find_all_special_lines(union, inst.shape)}
        if kinds == {"alpha", "beta"}:
            _fail(failures, t, seed=inst.meta.seed,
                  shape=_shape_str(inst.shape),
                  error="both line kinds qualify")
    return Report("usa3-01", {"shape": _shape_str(shape) if shape else "grid",
                              "coord_bound": coord_bound}, seed,
                  trials, failures)


def suite_invariance(shape, trials, seed, coord_bound=10, witnesses=4):
    """verify_ee7 agreement over >= 4 witnesses per instance (b=2 families)."""
    shape = shape or Shape(1, 1, 4, 4)
    failures = []
    combos = [(k, b, e) for (k, b, e) in feasible_combos(shape) if b == 2]
    if not combos:
        raise InfeasibleInstanceError(
            f"no b=2 class on {shape} for the invariance suite")
    for t in range(trials):
        kind, b, e = combos[t % len(combos)]
        inst = generate_instance(shape, b, e, seed + 104729 * t, kind=kind)
        try:
            split = analyze_pair(inst.p, inst.S, inst.A)
            avoid = [frozenset((Fraction(x), Fraction(1))
                               for x in inst.meta.m1_roots),
                     frozenset((Fraction(x), Fraction(1))
                               for x in inst.meta.m2_roots)]
            extra = sylvester.sample_solutions(split.q_form, witnesses - 2,
                                               seed + t, avoid=avoid)
            wits = [inst.S, inst.A] + [extend_witness(split, m) for m in extra]
            report = verify_ee7(inst.p, wits)
            if not report.passed:
                _fail(failures, t, seed=inst.meta.seed,
                      error="witness pairs disagree",
                      signatures=[str(s) for _, s in report.pair_signatures])
        except BihomError as exc:
            _fail(failures, t, seed=inst.meta.seed, error=str(exc))
    return Report("prop-ee7", {"shape": _shape_str(shape),
                               "witnesses": witnesses,
                               "coord_bound": coord_bound}, seed,
                  trials, failures)


def _random_jet(rng, shape, bound, both_active=False):
    while True:
        v1 = tuple(rng.nonzero_int_vector(shape.n1 + 1, bound))
        v2 = tuple(rng.nonzero_int_vector(shape.n2 + 1, bound))
        w1 = tuple(rng.int_vector(shape.n1 + 1, bound))
        w2 = tuple(rng.int_vector(shape.n2 + 1, bound))
        jet = JetK((shape.d1, shape.d2), (v1, v2), (w1, w2))
        active = dependency_set(jet)
        if both_active and active != {1, 2}:
            continue
        if active:
            return jet


def _on_jet_lines(jet, terms):
    for _, pt in terms:
        for i, coords in enumerate(pt):
            span = [list(jet.base[i])]
            if i + 1 in dependency_set(jet):
                span.append(list(jet.direction[i]))
            if not linalg.span_contains(span, list(coords)):
                return False
    return True


def suite_tangent_rank(shape, trials, seed, coord_bound=6, falsify=60):
    """Tangent decompositions: counts, exact recombination, support exclusion,
    concision, and lower-bound evidence."""
    shape = shape or Shape(2, 2, 3, 3)
    rng = SplitMix64(seed)
    failures = []
    for t in range(trials):
        jet = _random_jet(rng, shape, coord_bound)
        r = tangential_rank(jet)
        try:
            dec = tangential_decompose(jet)  # recombination verified inside
        except AssertionError as exc:
            _fail(failures, t, error=str(exc))
            continue
        if dec.count() != r:
            _fail(failures, t, error="term count", count=dec.count(), rank=r)
            continue
        if not _on_jet_lines(jet, dec.terms):
            _fail(failures, t, error="term off the jet lines")
            continue
        active = dependency_set(jet)
        tf = tangent_form(jet)
        if active == {1, 2} and (shape.d1, shape.d2) == (1, 1):
            mat = [[Fraction(0)] * (shape.n2 + 1) for _ in range(shape.n1 + 1)]
            for (e1, e2), c in tf.coeffs.items():
                mat[e1.index(1)][e2.index(1)] = c
            if linalg.rank(mat) != 2:
                _fail(failures, t, error="matrix-rank lower bound", rank=r)
        elif len(active) >= 2 and t % max(1, trials // 20) == 0:
            ok = minimality_evidence(tf, r, shape, falsify, seed + t,
                                     coord_bound)
            if not ok:
                _fail(failures, t, error="smaller witness found", rank=r)
    return Report("thm-i1", {"shape": _shape_str(shape),
                             "coord_bound": coord_bound,
                             "falsify": falsify}, seed, trials, failures)


def suite_tangent_structure(shape, trials, seed, coord_bound=6):
    """Reducible split: d1 terms on the first-factor line, d2 on the second;
    same form as the smooth-curve decomposition."""
    shape = shape or Shape(2, 2, 3, 3)
    rng = SplitMix64(seed)
    failures = []
    for t in range(trials):
        jet = _random_jet(rng, shape, coord_bound, both_active=True)
        try:
            smooth = tangential_decompose(jet)
            red = reducible_decompose(jet)
        except AssertionError as exc:
            _fail(failures, t, error=str(exc))
            continue
        v1k = canonical_coords(jet.base[0])
        v2k = canonical_coords(jet.base[1])
        on_alpha = sum(1 for _, pt in red.terms
                       if canonical_coords(pt[1]) == v2k)
        on_beta = sum(1 for _, pt in red.terms
                      if canonical_coords(pt[0]) == v1k)
        checks = {
            "total": red.count() == shape.d1 + shape.d2,
            "alpha_count": on_alpha == shape.d1,
            "beta_count": on_beta == shape.d2,
            "smooth_total": smooth.count() == shape.d1 + shape.d2,
            "curve_membership": _on_jet_lines(jet, smooth.terms),
        }
        if not all(checks.values()):
            _fail(failures, t, failed=[k for k, v in checks.items() if not v])
    return Report("thm-i2", {"shape": _shape_str(shape),
                             "coord_bound": coord_bound}, seed,
                  trials, failures)


def suite_concision(shape, trials, seed, coord_bound=6):
    """Essential subspaces: planted-subspace recovery, containment of all
    decomposition points, fullness for generic forms."""
    shape = shape or Shape(2, 2, 3, 3)
    rng = SplitMix64(seed)
    failures = []
    for t in range(trials):
        dim2 = 1 + rng.randrange(shape.n2 + 1)   # planted subspace dimension
        basis2 = []
        while len(basis2) < dim2:
            cand = rng.nonzero_int_vector(shape.n2 + 1, coord_bound)
            if linalg.rank(basis2 + [cand]) == len(basis2) + 1:
                basis2.append(cand)
        terms = []
        count = shape.n1 + dim2 + 1
        while len(terms) < count:
            c2 = [rng.randint(-3, 3) for _ in range(dim2)]
            p2 = [sum(c2[i] * basis2[i][j] for i in range(dim2))
                  for j in range(shape.n2 + 1)]
            if all(x == 0 for x in p2):
                continue
            pt = PointPair(tuple(rng.nonzero_int_vector(shape.n1 + 1,
                                                        coord_bound)),
                           tuple(p2))
            if not any(pt.same_point(q) for _, q in terms):
                terms.append((Fraction(rng.nonzero_int(3)), pt))
        f = combine(terms, shape)
        if f.is_zero():
            continue
        w1, w2 = essential_subspaces(f)
        inside = all(linalg.span_contains(w2, list(pt.primitive().p2))
                     for _, pt in terms)
        contained = all(linalg.span_contains(basis2, list(v)) for v in w2)
        points_w1 = all(linalg.span_contains(w1, list(pt.primitive().p1))
                        for _, pt in terms)
        if not (inside and contained and points_w1):
            _fail(failures, t, planted_dim=dim2, got_dim=len(w2),
                  error="containment failed")
    return Report("concision", {"shape": _shape_str(shape),
                                "coord_bound": coord_bound}, seed,
                  trials, failures)


def _shape_str(shape):
    if shape is None:
        return "default"
    return f"{shape.n1},{shape.n2},{shape.d1},{shape.d2}"


SUITES = {
    "lemma-suck": suite_point_independence,
    "remark-b5": suite_line_defect,
    "lemma-b3": suite_curve_defect,
    "usa3-01": suite_mutual_exclusivity,
    "thm-ee11": suite_roundtrip,
    "prop-ee7": suite_invariance,
    "thm-i1": suite_tangent_rank,
    "thm-i2": suite_tangent_structure,
    "concision": suite_concision,
}


def run_suite(name, shape, trials, seed, coord_bound=10) -> Report:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    t0 = time.perf_counter()
    report = SUITES[name](shape, trials, seed, coord_bound)
    report.wall_time_s = time.perf_counter() - t0
    return report
