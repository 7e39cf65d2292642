"""Binary-form apolarity: border rank, rank, and explicit decompositions.

For a binary form q of degree d with plain coefficients c_i, the k-th
catalecticant is the (d-k+1) x (k+1) Hankel matrix of the *binomial
normalized* coefficients a_i = c_i / C(d, i); entry (j, i) = a_{i+j}.  The
normalization is what makes kernel vectors apolar operators: a kernel vector
(k_0, ..., k_b) is read as the form g = sum_i k_i s^{b-i} t^i, and a root
(alpha : beta) of g is a decomposition point (alpha : beta) directly, i.e.
q picks up the term lam * (alpha s + beta t)^d.

The border rank b is the least k with a nontrivial kernel.  If the kernel
generator is squarefree and splits over the working field, the rank equals b
and the roots are the (unique, when the kernel is 1-dimensional)
decomposition; otherwise the rank is d + 2 - b and decompositions correspond
to squarefree elements of ker(Cat_{d+2-b}), an infinite family.

Exact mode never approximates: when no squarefree kernel element with
rational roots exists within the search budget, DoesNotSplitError is raised
and the caller may switch to the numeric backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, unipoly
from .errors import DoesNotSplitError, ExhaustionError, PreconditionError
from .forms import BinaryForm, binom
from .rng import SplitMix64
from .unipoly import UniPoly

INFINITY = (Fraction(1), Fraction(0))  # the parameter point (1 : 0)

_SWEEP_LIMIT = 1200  # integer combinations tried per kernel sweep
_PARAM_TRIES = 4000  # draws per parametric family search


def _plausibly_splits(q: BinaryForm) -> bool:
    """Cheap float prefilter: a fully rational-split form has all roots real."""
    import numpy as np

    cs = [float(c) for c in to_affine(q).coeffs]
    if len(cs) <= 2:
        return True
    try:
        zs = np.roots(list(reversed(cs)))
    except Exception:
        return True
    return all(abs(z.imag) <= 1e-6 * (1 + abs(z)) for z in zs)


def to_affine(q: BinaryForm) -> UniPoly:
    """Dehomogenize at t = 1: q(X, 1) as a UniPoly in X = s/t."""
    return UniPoly(list(reversed(q.coeffs)))


def binary_rational_roots(q: BinaryForm):
    """Rational roots of q as {(alpha, beta): multiplicity}, including (1:0)."""
    if q.is_zero():
        raise ValueError("roots undefined for the zero form")
    aff = to_affine(q)
    roots = {}
    inf_mult = q.degree - aff.degree
    if inf_mult > 0:
        roots[INFINITY] = inf_mult
    if aff.degree >= 1:
        for r, m in unipoly.rational_roots(aff).items():
            roots[(r, Fraction(1))] = m
    return roots


def binary_squarefree(q: BinaryForm) -> bool:
    """Squarefree as a homogeneous form (the point at infinity counts)."""
    if q.is_zero():
        raise ValueError("squarefree undefined for the zero form")
    aff = to_affine(q)
    if q.degree - aff.degree > 1:
        return False
    if aff.degree < 1:
        return True
    return unipoly.squarefree(aff)


def binary_splits(q: BinaryForm) -> bool:
    return sum(binary_rational_roots(q).values()) == q.degree


def catalecticant(q: BinaryForm, k: int) -> linalg.Matrix:
    d = q.degree
    if not 1 <= k <= d:
        raise ValueError(f"catalecticant index {k} out of range 1..{d}")
    a = [Fraction(c, binom(d, i)) for i, c in enumerate(q.coeffs)]
    return linalg.Matrix([[a[i + j] for i in range(k + 1)] for j in range(d - k + 1)])


def _kernel_forms(q: BinaryForm, k: int):
    kern = linalg.kernel_basis(catalecticant(q, k).row_lists())
    return [BinaryForm(k, v) for v in kern]


def border_rank(q: BinaryForm):
    """(b, kernel basis at b): least k with ker(Cat_k) nontrivial."""
    if q.is_zero():
        raise ValueError("border rank undefined for the zero form")
    for k in range(1, q.degree // 2 + 2):
        forms = _kernel_forms(q, k)
        if forms:
            return k, forms
    raise AssertionError("kernel must appear by k = floor(d/2)+1")


def solve_weights(q: BinaryForm, points):
    """Exact weights with sum_i w_i (a_i s + b_i t)^d = q, or None."""
    d = q.degree
    cols = [BinaryForm.pure_power(d, a, b).coeffs for (a, b) in points]
    return linalg.solve_columns([list(c) for c in cols], list(q.coeffs))


def _witness_from_split_form(q: BinaryForm, h: BinaryForm):
    """Build (weight, point) terms from a squarefree fully-split apolar form."""
    if not _plausibly_splits(h):
        return None
    roots = binary_rational_roots(h)
    if sum(roots.values()) != h.degree or any(m > 1 for m in roots.values()):
        return None
    points = sorted(roots, key=_point_sort_key)
    weights = solve_weights(q, points)
    if weights is None:
        return None
    return [(w, pt) for w, pt in zip(weights, points)]


def _point_sort_key(pt):
    return (pt[1] == 0, pt[0], pt[1])


def witness_points(witness):
    return frozenset(pt for _, pt in witness)


def recombine(degree: int, witness) -> BinaryForm:
    return BinaryForm.from_weighted_points(degree, witness)


def _int_combos(dim, limit):
    """Primitive integer tuples of the given dimension, increasing sup-norm."""
    import math as _math
    from itertools import product

    seen = 0
    for radius in range(1, 6):
        rng = range(-radius, radius + 1)
        for combo in product(rng, repeat=dim):
            if max(abs(x) for x in combo) != radius:
                continue
            g = _math.gcd(*[abs(x) for x in combo]) if any(combo) else 0
            if g == 0 or g != 1:
                continue
            first = next(x for x in combo if x != 0)
            if first < 0:
                continue
            yield combo
            seen += 1
            if seen >= limit:
                return


def _sweep_kernel(q: BinaryForm, kernel, want_split, budget=_SWEEP_LIMIT,
                  avoid_sets=()):
    """Deterministic small-integer sweep over kernel combinations.

    Returns the first squarefree element (want_split=False) or the first
    squarefree fully-rational-split witness (want_split=True) not in
    avoid_sets; None when the budget is exhausted.
    """
    deg = kernel[0].degree
    avoid = set(avoid_sets)
    for combo in _int_combos(len(kernel), budget):
        coeffs = [Fraction(0)] * (deg + 1)
        for c, form in zip(combo, kernel):
            if c:
                for i, x in enumerate(form.coeffs):
                    coeffs[i] += c * x
        h = BinaryForm(deg, coeffs)
        if h.is_zero() or not binary_squarefree(h):
            continue
        if not want_split:
            return h
        wit = _witness_from_split_form(q, h)
        if wit is not None and witness_points(wit) not in avoid:
            return wit
    return None


@dataclass
class SylvesterResult:
    degree: int
    border_rank: int
    rank: int
    kernel_form: UniPoly          # dehomogenized generator of ker(Cat_b)
    kernel_form_binary: BinaryForm
    witness: list | None          # (weight, (alpha, beta)) terms, r of them

    def witness_points(self):
        return witness_points(self.witness) if self.witness else frozenset()


def _pick_kernel_generator(kernel):
    """Squarefree representative when one exists in a small sweep, else first."""
    if len(kernel) == 1:
        return kernel[0]
    deg = kernel[0].degree
    for combo in _int_combos(len(kernel), 400):
        coeffs = [Fraction(0)] * (deg + 1)
        for c, form in zip(combo, kernel):
            if c:
                for i, x in enumerate(form.coeffs):
                    coeffs[i] += c * x
        h = BinaryForm(deg, coeffs)
        if not h.is_zero() and binary_squarefree(h):
            return h
    return kernel[0]


def analyze(q: BinaryForm, require_witness: bool = True) -> SylvesterResult:
    """Border rank, rank, kernel generator and (when possible) a witness.

    The rank is b when the kernel generator is squarefree and splits over the
    rationals, and d + 2 - b otherwise; with a 2-dimensional kernel (only at
    b = (d+2)/2) the two branches agree.  Witness construction searches for a
    squarefree fully-split kernel element at degree ``rank``; when
    ``require_witness`` and the search exhausts, DoesNotSplitError carries
    the partial result.
    """
    if q.is_zero():
        raise ValueError("analyze undefined for the zero form")
    d = q.degree
    b, kernel = border_rank(q)
    gen = _pick_kernel_generator(kernel)
    squarefree_split = binary_squarefree(gen) and binary_splits(gen)
    if squarefree_split:
        rank = b
    else:
        rank = d + 2 - b
    result = SylvesterResult(d, b, rank, to_affine(gen), gen, None)
    if rank == b:
        result.witness = _witness_from_split_form(q, gen)
        if result.witness is None and len(kernel) > 1 and require_witness:
            result.witness = _sweep_kernel(q, kernel, want_split=True)
    elif require_witness:
        if rank > d:
            raise AssertionError("rank exceeded degree; malformed input")
        rk_kernel = _kernel_forms(q, rank)
        result.witness = _parametric_witness_search(
            q, rank, gen, SplitMix64(2**61 - 1), avoid=frozenset())
        if result.witness is None:
            result.witness = _sweep_kernel(q, rk_kernel, want_split=True)
    if result.witness is not None:
        assert len(result.witness) == rank
        assert recombine(d, result.witness) == q, "witness recombination failed"
    elif require_witness:
        raise DoesNotSplitError(
            "no squarefree kernel element splits over the rationals "
            f"(degree {d}, border rank {b}, rank {rank})", partial=result)
    return result


def _jet_structure(gen: BinaryForm):
    """(theta_point, simple_points) when gen = (double root) * (simple roots),
    all rational; None otherwise."""
    roots = binary_rational_roots(gen)
    if sum(roots.values()) != gen.degree:
        return None
    doubles = [pt for pt, m in roots.items() if m == 2]
    if len(doubles) != 1 or any(m > 2 for m in roots.values()):
        return None
    simples = [pt for pt, m in roots.items() if m == 1]
    return doubles[0], simples


def _eval_and_derivative(h: BinaryForm, theta):
    aff = to_affine(h)
    if theta == INFINITY:
        # series coordinates at (1:0): leading two coefficients
        return h.coeffs[0], h.coeffs[1]
    x = Fraction(theta[0], theta[1])
    return aff(x), aff.derivative()(x)


def _kernel_reference_ratio(q: BinaryForm, rank: int, theta):
    """(v0, v1) = (h(theta), Dh(theta)) shared direction of the rank-kernel."""
    for h in _kernel_forms(q, rank):
        v0, v1 = _eval_and_derivative(h, theta)
        if v0 != 0:
            return v0, v1
    return None


def _is_rational_square(x: Fraction):
    import math as _math

    if x < 0:
        return None
    pn = _math.isqrt(x.numerator)
    pd = _math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def _parametric_witness_search(q: BinaryForm, rank: int, gen: BinaryForm,
                               rng: SplitMix64, avoid, tries=_PARAM_TRIES):
    """Witness search through the tangent-direction parametrizations.

    Covers border rank 2 (one root solved linearly from the prescribed
    logarithmic derivative at the double point) and border rank 3 (two roots
    solved from a quadratic with a square-discriminant test after a Mobius
    change of coordinates).  Other structures return None.
    """
    jet = _jet_structure(gen)
    if jet is None:
        return None
    theta, simples = jet
    b = gen.degree
    if b == 2:
        return _witness_b2(q, rank, theta, rng, avoid, tries)
    if b == 3 and theta != INFINITY and simples and simples[0] != INFINITY:
        return _witness_b3(q, rank, theta, simples[0], rng, avoid, tries)
    return None


def _witness_b2(q, rank, theta, rng, avoid, tries):
    ref = _kernel_reference_ratio(q, rank, theta)
    if ref is None:
        return None
    v0, v1 = ref
    target = Fraction(v1, v0)
    bound = 3 * rank + 6
    for _ in range(tries):
        if theta == INFINITY:
            # monic affine roots with prescribed sum: -h1/h0 = -target... h0=1
            xs = rng.distinct_fractions(rank - 1, bound, max_den=2)
            last = -target - sum(xs)
            if last in xs:
                continue
            xs.append(last)
        else:
            th = Fraction(theta[0], theta[1])
            xs = rng.distinct_fractions(rank - 1, bound, max_den=2, avoid=[th])
            s = target - sum(Fraction(1) / (th - x) for x in xs)
            if s == 0:
                continue
            last = th - Fraction(1) / s
            if last in xs or last == th:
                continue
            xs.append(last)
        wit = _witness_from_points(q, xs)
        if wit is not None and witness_points(wit) not in avoid:
            return wit
    return None


def _witness_b3(q, rank, theta, eta, rng, avoid, tries):
    ref = _kernel_reference_ratio(q, rank, theta)
    if ref is None:
        return None
    v0, v1 = ref
    th = Fraction(theta[0], theta[1])
    et = Fraction(eta[0], eta[1])
    kernel_at = _kernel_forms(q, rank)
    kappa = None
    for h in kernel_at:
        h0, _ = _eval_and_derivative(h, theta)
        if h0 != 0:
            kappa = Fraction(to_affine(h)(et), h0)
            break
    if kappa is None or kappa == 0:
        return None
    sigma = rank + Fraction(v1, v0) * (et - th)
    bound = 3 * rank + 6
    for _ in range(tries):
        ys = rng.distinct_fractions(rank - 2, bound, max_den=2, avoid=[0, 1])
        prod = Fraction(1)
        for y in ys:
            prod *= y
        a = sigma - sum(ys)
        m = kappa / prod
        disc = a * a - 4 * m
        root = _is_rational_square(disc)
        if root is None:
            continue
        y1 = (a + root) / 2
        y2 = (a - root) / 2
        cand = ys + [y1, y2]
        if len(set(cand)) != rank or 0 in (y1, y2) or 1 in (y1, y2):
            continue
        xs = [(th * y - et) / (y - 1) for y in cand]
        if len(set(xs)) != rank or th in xs:
            continue
        wit = _witness_from_points(q, xs)
        if wit is not None and witness_points(wit) not in avoid:
            return wit
    return None


def _witness_from_points(q, xs):
    points = sorted(((Fraction(x), Fraction(1)) for x in xs), key=_point_sort_key)
    weights = solve_weights(q, points)
    if weights is None or any(w == 0 for w in weights):
        return None
    return list(zip(weights, points))


def analyze_numeric(q: BinaryForm, tol: float = 1e-9):
    """Numeric-backend witness: exact (b, rank), floating decomposition points.

    Picks a squarefree kernel element at the rank degree, extracts its
    complex roots to the requested residual tolerance, and solves for the
    weights in floating point.  Returns (result, points, weights, residual)
    where ``points`` are complex parameter values (None marks the point at
    infinity) and ``residual`` is the max relative recombination error.
    """
    import numpy as np

    res = analyze(q, require_witness=False)
    d, rank = res.degree, res.rank
    if res.witness is not None:
        return res, None, None, 0.0
    kernel = _kernel_forms(q, rank)
    h = _sweep_kernel(q, kernel, want_split=False)
    if h is None:
        h = kernel[0]
    aff = to_affine(h)
    points = []
    if h.degree - aff.degree >= 1:
        points.append(None)  # (1 : 0)
    for z, mult in unipoly.numeric_roots(aff, tol):
        points.extend([z] * mult)
    cols = []
    for z in points:
        if z is None:
            col = [1.0] + [0.0] * d
        else:
            # plain coefficients of (z s + t)^d
            col = [binom(d, i) * complex(z) ** (d - i) for i in range(d + 1)]
        cols.append(col)
    target = np.array([float(c) for c in q.coeffs], dtype=complex)
    mat = np.array(cols, dtype=complex).T
    weights, *_ = np.linalg.lstsq(mat, target, rcond=None)
    recombined = mat @ weights
    scale = max(1.0, float(max(abs(c) for c in q.coeffs)))
    residual = float(np.max(np.abs(recombined - target)) / scale)
    return res, points, list(weights), residual


def sample_solutions(q: BinaryForm, count: int, seed: int, avoid=(),
                     allow_partial: bool = False):
    """``count`` pairwise-distinct witnesses of q, deterministic under seed.

    Requires the rank-degree kernel to be at least 2-dimensional (the
    infinite-family regime).  Raises ExhaustionError carrying the partial
    list when rational splitting runs dry before ``count``, unless
    ``allow_partial``.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    res = analyze(q, require_witness=False)
    rank = res.rank
    rk_kernel = _kernel_forms(q, rank)
    if len(rk_kernel) < 2:
        raise PreconditionError(
            "sample_solutions needs dim ker(Cat_rank) >= 2; "
            f"got {len(rk_kernel)} at rank {rank}")
    if count == 0:
        return []
    rng = SplitMix64(seed)
    found = []
    seen = set(frozenset(s) for s in avoid)

    def grab(wit):
        pts = witness_points(wit)
        if pts not in seen:
            seen.add(pts)
            found.append(wit)

    # parametric families first (cheap per draw, unlimited for b = 2 jets),
    # then the small-integer kernel sweep to top up other structures
    while len(found) < count:
        wit = _parametric_witness_search(q, rank, res.kernel_form_binary,
                                         rng, seen)
        if wit is None:
            break
        grab(wit)
    while len(found) < count:
        wit = _sweep_kernel(q, rk_kernel, want_split=True,
                            budget=_SWEEP_LIMIT, avoid_sets=seen)
        if wit is None:
            break
        grab(wit)
    if len(found) < count and not allow_partial:
        raise ExhaustionError(
            f"found {len(found)} of {count} rational witnesses before the "
            "search budget ran out", found=found)
    return found[:count]
