"""Exact integer / rational linear algebra kernel.

Everything in this package runs on Python ints and fractions.Fraction;
there is no floating point anywhere.  Vectors are tuples (row vectors),
matrices are tuples of row tuples.  Linear maps act on the right:
``image = vec_mat(v, M)``.
"""

from fractions import Fraction
from math import gcd, lcm


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_matrix(m, n):
    return tuple((0,) * n for _ in range(m))


def transpose(mat):
    return tuple(zip(*mat)) if mat else ()


def mat_mul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shape mismatch")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def vec_mat(v, mat):
    if len(v) != len(mat):
        raise ValueError("vector/matrix shape mismatch")
    cols = len(mat[0]) if mat else 0
    return tuple(sum(v[i] * mat[i][j] for i in range(len(v))) for j in range(cols))


def mat_vec(mat, v):
    if mat and len(mat[0]) != len(v):
        raise ValueError("matrix/vector shape mismatch")
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in mat)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def is_zero_vector(v):
    return all(x == 0 for x in v)


def det(mat):
    """Exact determinant via fraction elimination."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in row] for row in mat]
    result = Fraction(1)
    for col in range(n):
        pivot_row = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            result = -result
        pivot = a[col][col]
        result *= pivot
        for i in range(col + 1, n):
            if a[i][col] != 0:
                factor = a[i][col] / pivot
                for j in range(col, n):
                    a[i][j] -= factor * a[col][j]
    return result


def rref(mat):
    """Reduced row echelon form over the rationals.

    Returns (rows, pivot_columns); zero rows are dropped.
    """
    rows = [[Fraction(x) for x in row] for row in mat]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    reduced = tuple(tuple(row) for row in rows[:r])
    return reduced, tuple(pivots)


def rank(mat):
    """Exact rank; fraction-free elimination on all-integer input."""
    if not mat:
        return 0
    rows = [list(row) for row in mat]
    if any(not isinstance(x, int) for row in rows for x in row):
        return len(rref(mat)[0])
    ncols = len(rows[0])
    rk = 0
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                q = rows[i][c]
                rows[i] = [p * x - q * y for x, y in zip(rows[i], rows[r])]
        rk += 1
        r += 1
        if r == len(rows):
            break
    return rk


def solve_linear(a, b):
    """One exact solution x of A x = b (columns), or None if inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    m = len(a)
    n = len(a[0]) if a else 0
    if len(b) != m:
        raise ValueError("right-hand side has wrong length")
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    reduced, pivots = rref(aug)
    x = [Fraction(0)] * n
    for row, c in zip(reduced, pivots):
        if c == n:
            return None
        x[c] = row[n]
    return tuple(x)


def mat_inverse(mat):
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    reduced, pivots = rref(aug)
    if len(reduced) != n or any(p != i for i, p in enumerate(pivots)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in reduced)


def primitive_ray(v):
    """Scale a rational vector by a positive rational to a primitive
    integer vector.  The direction is preserved (rays keep their sign)."""
    v = tuple(Fraction(x) for x in v)
    if is_zero_vector(v):
        return (0,) * len(v)
    mult = lcm(*(x.denominator for x in v))
    ints = [int(x * mult) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def _primitive_row(row):
    # same scaling as primitive_ray but also flips sign so the leading
    # nonzero entry is positive (canonical for subspace rows)
    vec = primitive_ray(row)
    lead = next((x for x in vec if x != 0), 0)
    if lead < 0:
        vec = tuple(-x for x in vec)
    return vec


class Subspace:
    """Rational subspace in canonical form: reduced-echelon basis rows,
    each scaled to a primitive integer vector, pivots leftmost first.
    Equal subspaces have identical representations."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, basis):
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_spanning(cls, vectors, ambient_dim=None):
        vectors = [tuple(v) for v in vectors]
        if ambient_dim is None:
            if not vectors:
                raise ValueError("ambient dimension required for empty span")
            ambient_dim = len(vectors[0])
        if any(len(v) != ambient_dim for v in vectors):
            raise ValueError("spanning vectors of mixed dimension")
        reduced, _ = rref(vectors)
        return cls(ambient_dim, tuple(_primitive_row(r) for r in reduced))

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim):
        return cls(ambient_dim, identity(ambient_dim))

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def is_full(self):
        return len(self.basis) == self.ambient_dim

    def contains(self, v):
        if len(v) != self.ambient_dim:
            raise ValueError("vector has wrong dimension")
        return rank(self.basis + (tuple(v),)) == self.dim

    def contains_subspace(self, other):
        self._check(other)
        return all(self.contains(row) for row in other.basis)

    def plus(self, other):
        self._check(other)
        return Subspace.from_spanning(self.basis + other.basis, self.ambient_dim)

    def perp(self):
        """Orthogonal complement under the standard dot product."""
        if not self.basis:
            return Subspace.full(self.ambient_dim)
        return kernel(self.basis)

    def intersect(self, other):
        self._check(other)
        return self.perp().plus(other.perp()).perp()

    def meets_trivially(self, other):
        """Exact rank check for trivial intersection; cheaper than
        computing the intersection itself."""
        self._check(other)
        return rank(self.basis + other.basis) == self.dim + other.dim

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces of different ambient dimension")

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim}, basis={list(self.basis)})"


def kernel(mat):
    """Right kernel {x : A x = 0} as a canonical Subspace."""
    if not mat:
        raise ValueError("kernel of an empty matrix needs an ambient dimension")
    n = len(mat[0])
    reduced, pivots = rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(reduced, pivots):
            v[c] = -row[f]
        basis.append(tuple(v))
    return Subspace.from_spanning(basis, n)


def smith_normal_form(a):
    """Smith normal form: returns (U, D, V) with U*A*V = D, U and V
    unimodular, D diagonal with d_i | d_{i+1} and d_i >= 0.

    Pivot selection: smallest absolute value nonzero entry, ties broken
    in row-major order, so the output is deterministic.
    """
    m = len(a)
    n = len(a[0]) if a else 0
    d = [list(row) for row in a]
    u = [list(row) for row in identity(m)]
    v = [list(row) for row in identity(n)]

    def row_add(src, dst, c):
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def col_add(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def pick_pivot(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(m, n):
        if pick_pivot(t) is None:
            break
        while True:
            # re-pick the smallest pivot on every pass; each restart either
            # shrinks the minimal entry or enables an exact clearing pass
            i0, j0 = pick_pivot(t)
            row_swap(t, i0)
            col_swap(t, j0)
            p = d[t][t]
            if any(d[i][t] % p != 0 for i in range(t + 1, m)):
                for i in range(t + 1, m):
                    if d[i][t] % p != 0:
                        row_add(t, i, -(d[i][t] // p))
                continue
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    row_add(t, i, -(d[i][t] // p))
            if any(d[t][j] % p != 0 for j in range(t + 1, n)):
                for j in range(t + 1, n):
                    if d[t][j] % p != 0:
                        col_add(t, j, -(d[t][j] // p))
                continue
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    col_add(t, j, -(d[t][j] // p))
            offender = next((i for i in range(t + 1, m)
                             if any(d[i][j] % p != 0 for j in range(t + 1, n))), None)
            if offender is None:
                break
            row_add(offender, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (tuple(tuple(r) for r in u),
            tuple(tuple(r) for r in d),
            tuple(tuple(r) for r in v))
