"""Symplectic spaces over the rationals and skew normal forms over the
integers.

Bases are stored interleaved, ``(e_1, f_1, ..., e_k, f_k)``, and the
standard Gram matrix J is block diagonal with blocks [[0, 1], [-1, 0]].
All the avoidance routines are deterministic: integer vectors are
enumerated by increasing max-norm height, coordinate values ordered
0, 1, -1, 2, -2, ..., with the first coordinate varying fastest.
"""

from fractions import Fraction
from itertools import count, product

from .linalg import (
    Subspace,
    det,
    identity,
    kernel,
    mat_mul,
    primitive_ray,
    rank,
    solve_linear,
    transpose,
    vec_add,
    vec_mat,
    vec_scale,
)


def standard_gram(k, scale=None):
    """Block diagonal Gram matrix; block i is [[0, s_i], [-s_i, 0]]."""
    n = 2 * k
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(k):
        s = Fraction(1) if scale is None else Fraction(scale[i])
        rows[2 * i][2 * i + 1] = s
        rows[2 * i + 1][2 * i] = -s
    return tuple(tuple(r) for r in rows)


class SymplecticSpace:
    """Even-dimensional rational space with a nondegenerate skew form."""

    __slots__ = ("dim", "gram")

    def __init__(self, gram):
        gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        n = len(gram)
        if n % 2 != 0 or any(len(row) != n for row in gram):
            raise ValueError("Gram matrix must be square of even size")
        if transpose(gram) != tuple(tuple(-x for x in row) for row in gram):
            raise ValueError("Gram matrix must be skew-symmetric")
        if det(gram) == 0:
            raise ValueError("form is degenerate")
        self.dim = n
        self.gram = gram

    @classmethod
    def standard(cls, k):
        return cls(standard_gram(k))

    @property
    def k(self):
        return self.dim // 2

    def pair(self, u, v):
        return sum(vec_mat(u, self.gram)[j] * v[j] for j in range(self.dim))

    def annihilator(self, sub):
        """All vectors pairing to zero with the given subspace."""
        if sub.ambient_dim != self.dim:
            raise ValueError("subspace lives in a different ambient space")
        if sub.is_zero():
            return Subspace.full(self.dim)
        constraints = mat_mul(sub.basis, transpose(self.gram))
        return kernel(constraints)

    def is_isotropic(self, sub):
        return all(self.pair(u, v) == 0 for u in sub.basis for v in sub.basis)


class SymplecticBasis:
    """Ordered basis e_1, f_1, ..., e_k, f_k with the standard Gram matrix."""

    __slots__ = ("space", "vectors")

    def __init__(self, space, vectors):
        vectors = tuple(tuple(Fraction(x) for x in v) for v in vectors)
        if len(vectors) != space.dim:
            raise ValueError("wrong number of basis vectors")
        expected = standard_gram(space.dim // 2)
        actual = tuple(tuple(space.pair(u, v) for v in vectors) for u in vectors)
        if actual != expected:
            raise ValueError("vectors are not a symplectic basis for this form")
        self.space = space
        self.vectors = vectors

    @property
    def k(self):
        return len(self.vectors) // 2

    def e(self, i):
        return self.vectors[2 * i]

    def f(self, i):
        return self.vectors[2 * i + 1]


class AssociatedFamily:
    """The 3^k subspaces spanned, per index, by e_i, f_i or e_i + f_i."""

    __slots__ = ("base", "subspaces", "choices")

    def __init__(self, base, subspaces, choices):
        self.base = base
        self.subspaces = subspaces
        self.choices = choices


class ComplementBasis:
    """Result of the simultaneous-complement search: the basis
    (e_1, f_1 + p e_1, ...), the scale p and the dimension-k extensions
    of the avoided subspaces actually used in the test."""

    __slots__ = ("basis", "p", "extended")

    def __init__(self, basis, p, extended):
        self.basis = basis
        self.p = p
        self.extended = extended


def integer_symplectic_normal_form(b):
    """Congruence normal form of a nondegenerate skew integer matrix.

    Returns (T, invariants) with T unimodular, T^t B T block diagonal
    with blocks [[0, m_i], [-m_i, 0]], m_i positive and m_i | m_{i+1}.
    Negative blocks are normalised by swapping the basis pair.
    """
    n = len(b)
    if n % 2 != 0 or any(len(row) != n for row in b):
        raise ValueError("matrix must be square of even size")
    if any(not isinstance(x, int) for row in b for x in row):
        raise ValueError("matrix must be integral")
    if transpose(b) != tuple(tuple(-x for x in row) for row in b):
        raise ValueError("matrix must be skew-symmetric")
    if det(b) == 0:
        raise ValueError("form is degenerate")

    d = [list(row) for row in b]
    t = [list(row) for row in identity(n)]

    def congr_add(src, dst, c):
        # row dst += c * row src, together with the mirrored column op
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        for row in d:
            row[dst] += c * row[src]
        for row in t:
            row[dst] += c * row[src]

    def congr_swap(i, j):
        d[i], d[j] = d[j], d[i]
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    def pick_pivot(base):
        best = None
        for i in range(base, n):
            for j in range(base, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        return best

    base = 0
    while base < n:
        while True:
            i0, j0 = pick_pivot(base)
            # move the pivot to position (base, base+1)
            if i0 != base:
                congr_swap(base, i0)
                if j0 == base:
                    j0 = i0
            if j0 != base + 1:
                congr_swap(base + 1, j0)
            if d[base][base + 1] < 0:
                congr_swap(base, base + 1)
            p = d[base][base + 1]
            # clear the tails of rows base and base+1 (columns mirror by skewness)
            dirty = False
            for l in range(base + 2, n):
                if d[base][l] != 0:
                    congr_add(base + 1, l, -(d[base][l] // p))
                    if d[base][l] != 0:
                        dirty = True
                if d[base + 1][l] != 0:
                    congr_add(base, l, d[base + 1][l] // p)
                    if d[base + 1][l] != 0:
                        dirty = True
            if dirty:
                continue
            offender = next((i for i in range(base + 2, n)
                             if any(d[i][j] % p != 0 for j in range(base + 2, n))), None)
            if offender is None:
                break
            congr_add(offender, base, 1)
        base += 2

    invariants = tuple(d[2 * i][2 * i + 1] for i in range(n // 2))
    return tuple(tuple(row) for row in t), invariants


def enumerate_integer_vectors(dim):
    """Nonzero integer vectors: increasing max-norm shells, values per
    coordinate ordered 0, 1, -1, 2, -2, ..., first coordinate fastest."""
    for h in count(1):
        values = [0]
        for v in range(1, h + 1):
            values.extend((v, -v))
        for tup in product(values, repeat=dim):
            if max(abs(c) for c in tup) == h:
                yield tup[::-1]


def avoid_vector(ambient_dim, subspaces):
    """First enumerated integer vector lying outside every listed
    (proper) subspace."""
    for sub in subspaces:
        if sub.ambient_dim != ambient_dim:
            raise ValueError("subspace has wrong ambient dimension")
        if sub.is_full():
            raise ValueError("cannot avoid the full space")
    for v in enumerate_integer_vectors(ambient_dim):
        if all(not sub.contains(v) for sub in subspaces):
            return v


def lagrangian_avoiding(space, omega):
    """A Lagrangian subspace meeting every member of omega trivially.

    Follows the inductive construction: pick u outside every W and
    W-annihilator, descend to the annihilator of u modulo u, lift back.
    Members of omega must have dimension at most k.
    """
    k = space.k
    for w in omega:
        if w.dim > k:
            raise ValueError("avoided subspace has dimension exceeding k")
    omega = [w for w in omega if not w.is_zero()]
    if k == 0:
        return Subspace.zero(0)

    constraints = []
    for w in omega:
        constraints.append(w)
        constraints.append(space.annihilator(w))
    u = avoid_vector(space.dim, constraints)
    u_span = Subspace.from_spanning([u], space.dim)
    u_perp = space.annihilator(u_span)

    if space.dim == 2:
        result = u_span
    else:
        # complement of u inside its annihilator
        comp = []
        taken = [u]
        for row in u_perp.basis:
            if rank(tuple(taken) + (row,)) > len(taken):
                comp.append(row)
                taken.append(row)
        comp = tuple(comp)
        assert len(comp) == space.dim - 2

        # induced form on u_perp / u in complement coordinates
        sub_space = SymplecticSpace(
            tuple(tuple(space.pair(a, b) for b in comp) for a in comp))

        basis_rows = (u,) + comp

        def project(vec):
            coeffs = solve_linear(transpose(basis_rows), vec)
            return coeffs[1:]

        omega_hat = []
        for w in omega:
            cut = w.intersect(u_perp)
            if cut.is_zero():
                continue
            image = Subspace.from_spanning([project(row) for row in cut.basis],
                                           space.dim - 2)
            if not image.is_zero():
                omega_hat.append(image)

        l_hat = lagrangian_avoiding(sub_space, omega_hat)
        lifted = [u]
        for row in l_hat.basis:
            vec = (Fraction(0),) * space.dim
            for c, comp_row in zip(row, comp):
                vec = vec_add(vec, vec_scale(c, comp_row))
            lifted.append(vec)
        result = Subspace.from_spanning(lifted, space.dim)

    assert result.dim == k
    assert space.is_isotropic(result)
    for w in omega:
        assert result.meets_trivially(w)
    return result


def complete_symplectic_basis(space, lagrangian):
    """Extend a Lagrangian (its echelon basis becomes e_1..e_k) to a full
    symplectic basis by solving for each f_i in turn."""
    k = space.k
    if lagrangian.dim != k or not space.is_isotropic(lagrangian):
        raise ValueError("subspace is not Lagrangian")
    es = [tuple(Fraction(x) for x in row) for row in lagrangian.basis]
    fs = []
    for i in range(k):
        rows = []
        rhs = []
        for j, e in enumerate(es):
            rows.append(vec_mat(e, space.gram))
            rhs.append(Fraction(1) if j == i else Fraction(0))
        for f in fs:
            rows.append(vec_mat(f, space.gram))
            rhs.append(Fraction(0))
        sol = solve_linear(rows, rhs)
        assert sol is not None
        fs.append(sol)
    vectors = []
    for e, f in zip(es, fs):
        vectors.extend((e, f))
    return SymplecticBasis(space, vectors)


def k_mu(basis, mu):
    """Span of the deformed vectors (1 - mu_i) e_i + mu_i f_i."""
    if len(mu) != basis.k:
        raise ValueError("mu has wrong length")
    mu = [Fraction(x) for x in mu]
    if any(x < 0 or x > 1 for x in mu):
        raise ValueError("mu must lie in [0, 1]")
    vectors = [vec_add(vec_scale(1 - m, basis.e(i)), vec_scale(m, basis.f(i)))
               for i, m in enumerate(mu)]
    return Subspace.from_spanning(vectors, basis.space.dim)


def associated_subspaces(basis):
    """All 3^k subspaces spanned by one of e_i, f_i, e_i + f_i per index."""
    k = basis.k
    subspaces = []
    choices = []
    for pick in product(range(3), repeat=k):
        vectors = []
        for i, c in enumerate(pick):
            if c == 0:
                vectors.append(basis.e(i))
            elif c == 1:
                vectors.append(basis.f(i))
            else:
                vectors.append(vec_add(basis.e(i), basis.f(i)))
        subspaces.append(Subspace.from_spanning(vectors, basis.space.dim))
        choices.append(pick)
    return AssociatedFamily(basis, tuple(subspaces), tuple(choices))


def _extend_to_dim_k(w, k, lagrangian):
    """Grow w to dimension k while keeping its intersection with the
    Lagrangian trivial, using deterministically enumerated vectors."""
    current = w
    while current.dim < k:
        blocked = current.plus(lagrangian)
        v = avoid_vector(current.ambient_dim, [blocked])
        current = current.plus(Subspace.from_spanning([v], current.ambient_dim))
    return current


_P_SEARCH_CAP = 10000


def simultaneous_complement_basis(space, basis, omega):
    """Rescale the f-vectors to f_i + p e_i so that every associated
    subspace of the new basis meets every member of omega trivially.

    Requires span(e_1..e_k) to intersect each member of omega trivially;
    p = 1, 2, 3, ... is tried until the finite family of rank checks
    passes (the smallest passing p wins).  Members of omega of dimension
    below k are first extended to dimension k.
    """
    k = space.k
    lagrangian = Subspace.from_spanning([basis.e(i) for i in range(k)], space.dim)
    for w in omega:
        if w.dim > k:
            raise ValueError("avoided subspace has dimension exceeding k")
        if not lagrangian.meets_trivially(w):
            raise ValueError("e-span does not avoid the given subspaces")
    extended = [_extend_to_dim_k(w, k, lagrangian) for w in omega if not w.is_zero()]

    picks = tuple(product(range(3), repeat=k))
    for p in range(1, _P_SEARCH_CAP):
        choices = []
        for i in range(k):
            e = basis.e(i)
            fhat = vec_add(vec_scale(Fraction(p), e), basis.f(i))
            choices.append((primitive_ray(e), primitive_ray(fhat),
                            primitive_ray(vec_add(e, fhat))))
        admissible = True
        for pick in picks:
            rows = tuple(choices[i][c] for i, c in enumerate(pick))
            for w in extended:
                if rank(rows + w.basis) != k + w.dim:
                    admissible = False
                    break
            if not admissible:
                break
        if admissible:
            vectors = []
            for i in range(k):
                vectors.append(basis.e(i))
                vectors.append(vec_add(vec_scale(Fraction(p), basis.e(i)), basis.f(i)))
            return ComplementBasis(SymplecticBasis(space, vectors), p, tuple(extended))
    raise RuntimeError("no admissible scale found below the search cap")
