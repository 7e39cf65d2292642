"""Exact dense linear algebra over the rationals.

Matrices are lists of rows; entries are ints or ``fractions.Fraction``
(arithmetic never leaves the rationals).  The :class:`Matrix` wrapper is a
thin immutable view used at API boundaries; the worker functions accept and
return plain row lists.

Scalars serialize as ``"num/den"`` with the denominator omitted when it is 1
(:func:`format_rational` / :func:`parse_rational`).

Tall systems (ambient dimension far above the number of vectors) are reduced
through Gram matrices: over an ordered field M^T M x = 0 forces Mx = 0, so
rank, kernel and consistent solves of an m x n matrix only ever eliminate on
a min(m,n)-sized square matrix.  Every solve is verified by exact
substitution before it is returned.
"""

from __future__ import annotations

from fractions import Fraction


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


class Matrix:
    """Immutable dense matrix of rationals (row-major)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(row) for row in data)
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        if any(len(r) != self.cols for r in data):
            raise ValueError("ragged rows")

    def row_lists(self):
        return [list(r) for r in self.data]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.data == other.data

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self.data)
        return f"Matrix[{self.rows}x{self.cols}: {body}]"


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_vec(rows, v):
    return [sum(r[j] * v[j] for j in range(len(v))) for r in rows]


def transpose(rows):
    return [list(col) for col in zip(*rows)] if rows else []


def rref(rows):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``.  Pivot choice is the first
    nonzero entry in column order; exact arithmetic needs no pivot scaling.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mi, mr = m[i], m[r]
                for j in range(c, ncols):
                    mi[j] -= f * mr[j]
        pivots.append(c)
        r += 1
    return m, pivots


def _rank_square_int(rows):
    # Bareiss fraction-free elimination; rows must be integer and square-ish.
    m = [list(r) for r in rows]
    n = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    for c in range(ncols):
        if r == n:
            break
        pr = next((i for i in range(r, n) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, n):
            mi, mr = m[i], m[r]
            f = mi[c]
            for j in range(c, ncols):
                mi[j] = (piv * mi[j] - f * mr[j]) // prev
        prev = m[r][c]
        r += 1
    return r


def rank(rows):
    """Exact rank; wide/tall matrices are reduced through their Gram matrix."""
    if not rows or not rows[0]:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    if ncols > 2 * nrows:
        g = gram(rows)
        return _rank_any(g)
    if nrows > 2 * ncols:
        g = gram(transpose(rows))
        return _rank_any(g)
    return _rank_any(rows)


def _rank_any(rows):
    if all(isinstance(x, int) for row in rows for x in row):
        return _rank_square_int(rows)
    return len(rref(rows)[1])


def gram(rows):
    """G[i][j] = <row_i, row_j>.  Symmetric, so only half is computed."""
    n = len(rows)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        ri = rows[i]
        for j in range(i, n):
            rj = rows[j]
            s = sum(a * b for a, b in zip(ri, rj))
            g[i][j] = s
            g[j][i] = s
    return g


def kernel_basis(rows):
    """Basis of {x : M x = 0}, one vector per free column of the RREF."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def kernel_basis_tall(rows):
    """Kernel of a tall matrix via its (small) Gram matrix M^T M."""
    if not rows:
        return []
    if len(rows) <= len(rows[0]):
        return kernel_basis(rows)
    return kernel_basis(gram(transpose(rows)))


def row_space_basis(rows):
    red, pivots = rref(rows)
    return [red[i] for i in range(len(pivots))]


def span_contains(basis_rows, v):
    """True iff v lies in the row span of ``basis_rows`` (exact)."""
    if all(x == 0 for x in v):
        return True
    if not basis_rows:
        return False
    return rank(list(basis_rows)) == rank(list(basis_rows) + [list(v)])


def span_equal(rows_a, rows_b):
    ra = rank(list(rows_a))
    rb = rank(list(rows_b))
    return ra == rb == rank(list(rows_a) + list(rows_b))


def span_intersect(vecs_a, vecs_b):
    """Basis of span(vecs_a) ∩ span(vecs_b).

    Kernel vectors (x, y) of the column matrix [A | -B] satisfy
    sum x_i a_i = sum y_j b_j; the left-hand combinations span the
    intersection.
    """
    a = [list(v) for v in vecs_a]
    b = [list(v) for v in vecs_b]
    if not a or not b:
        return []
    n = len(a[0])
    if any(len(v) != n for v in a + b):
        raise ValueError("vectors of unequal length")
    cols = transpose(a + [[-x for x in v] for v in b])  # n x (ka+kb)
    ker = kernel_basis_tall(cols)
    ka = len(a)
    combos = []
    for k in ker:
        combos.append([sum(k[i] * a[i][j] for i in range(ka)) for j in range(n)])
    basis = row_space_basis(combos)
    return basis


def solve_columns(col_vectors, target):
    """Solve sum_i x_i col_i = target exactly, or return None.

    Requires independent columns (raises ValueError otherwise, since the
    solution would not be unique).  Tall systems go through the normal
    equations and are verified by substitution.
    """
    cols = [list(c) for c in col_vectors]
    t = list(target)
    if not cols:
        return [] if all(x == 0 for x in t) else None
    n = len(cols[0])
    k = len(cols)
    if len(t) != n:
        raise ValueError("target length mismatch")
    if n > k:
        g = [[sum(a * b for a, b in zip(ci, cj)) for cj in cols] for ci in cols]
        rhs = [sum(a * b for a, b in zip(ci, t)) for ci in cols]
        x = _solve_square(g, rhs)
        if x is None:
            raise ValueError("dependent columns")
        for i in range(n):
            if sum(cols[j][i] * x[j] for j in range(k)) != t[i]:
                return None
        return x
    aug = [[cols[j][i] for j in range(k)] + [t[i]] for i in range(n)]
    red, pivots = rref(aug)
    if k in pivots:
        return None
    if len([p for p in pivots if p < k]) < k:
        raise ValueError("dependent columns")
    x = [Fraction(0)] * k
    for r, pc in enumerate(pivots):
        x[pc] = red[r][k]
    return x


def _solve_square(m, rhs):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    red, pivots = rref(aug)
    if len(pivots) != n or (pivots and pivots[-1] == n):
        return None
    return [red[i][n] for i in range(n)]


def vectors_independent(vecs):
    vl = [list(v) for v in vecs]
    return rank(vl) == len(vl)
