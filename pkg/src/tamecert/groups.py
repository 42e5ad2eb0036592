"""Structure data for finitely generated class-2 nilpotent groups and
their subdirect decomposition into generalized Heisenberg factors.

Lattice conventions: a group with n non-central generators g_1..g_n and
centre basis z_1..z_r is coordinatised by Z^(n+r) (g's first, then z's).
A Heisenberg factor of rank k is coordinatised by Z^(2k+1) in the order
x_1, y_1, ..., x_k, y_k, z.  Projections are integer matrices acting on
row vectors (``vec_mat``); dual maps pull factor characters back to the
group's character coordinates.
"""

from fractions import Fraction
from math import lcm

from .linalg import (
    identity,
    kernel,
    mat_inverse,
    mat_mul,
    mat_vec,
    rank,
    smith_normal_form,
    transpose,
    vec_mat,
)
from .symplectic import SymplecticSpace, integer_symplectic_normal_form


class GroupDataError(ValueError):
    pass


class ClassTwoData:
    """Commutation data: [g_i, g_j] = z^(c_ij) for i < j, all z_t central."""

    __slots__ = ("n", "r", "comm")

    def __init__(self, n, r, comm=None):
        if n < 0 or r < 0:
            raise GroupDataError("generator counts must be nonnegative")
        self.n = n
        self.r = r
        if r == 0 and comm:
            raise GroupDataError("commutator data contradicts a trivial centre")
        self.comm = {}
        for (i, j), vec in (comm or {}).items():
            if not (0 <= i < j < n):
                raise GroupDataError(f"bad commutator index pair ({i}, {j})")
            vec = tuple(int(x) for x in vec)
            if len(vec) != r:
                raise GroupDataError("commutator exponent vector has wrong length")
            if any(vec):
                self.comm[(i, j)] = vec

    @property
    def lattice_rank(self):
        return self.n + self.r

    def comm_value(self, i, j):
        """Exponent vector of [g_i, g_j], antisymmetric in (i, j)."""
        if i == j:
            return (0,) * self.r
        if i < j:
            return self.comm.get((i, j), (0,) * self.r)
        return tuple(-x for x in self.comm.get((j, i), (0,) * self.r))

    def comm_matrix(self, t):
        """Skew n x n matrix of z_t-exponents of the commutators."""
        return tuple(tuple(self.comm_value(i, j)[t] for j in range(self.n))
                     for i in range(self.n))

    def stacked_comm_matrix(self):
        rows = []
        for t in range(self.r):
            rows.extend(self.comm_matrix(t))
        return tuple(rows)

    def is_abelian(self):
        return not self.comm


def validate(data):
    """Check the declared centre.  When any commutator is nontrivial, no
    combination of the g's may be central, i.e. the stacked commutation
    matrices must have trivial common kernel.  Fully abelian data is
    accepted as-is (the group is free abelian of rank n + r)."""
    if data.r == 0 and data.comm:
        raise GroupDataError("nontrivial commutators with trivial centre")
    if data.is_abelian():
        return data
    stacked = data.stacked_comm_matrix()
    common = kernel(stacked)
    if not common.is_zero():
        raise GroupDataError(
            "declared centre is not exact: the generator combination "
            f"{common.basis[0]} is central but not in the span of the z's")
    return data


class HeisenbergGroup:
    """Torsion-free class <= 2 group with cyclic centre; rank 0 means the
    infinite cyclic group."""

    __slots__ = ("k", "invariants")

    def __init__(self, k, invariants):
        invariants = tuple(int(m) for m in invariants)
        if len(invariants) != k:
            raise GroupDataError("need one invariant per index")
        if any(m <= 0 for m in invariants):
            raise GroupDataError("invariants must be positive")
        for a, b in zip(invariants, invariants[1:]):
            if b % a != 0:
                raise GroupDataError("invariants must form a divisibility chain")
        self.k = k
        self.invariants = invariants

    def generator_names(self):
        names = []
        for i in range(self.k):
            names.extend((f"x{i + 1}", f"y{i + 1}"))
        names.append("z")
        return tuple(names)

    def comm_form_matrix(self):
        """Skew form on the (x, y) lattice: pairs (x_i, y_i) -> m_i."""
        n = 2 * self.k
        rows = [[0] * n for _ in range(n)]
        for i, m in enumerate(self.invariants):
            rows[2 * i][2 * i + 1] = m
            rows[2 * i + 1][2 * i] = -m
        return tuple(tuple(r) for r in rows)

    def __repr__(self):
        return f"HeisenbergGroup(k={self.k}, invariants={self.invariants})"


class Factor:
    """One subdirect factor: the group, the projection matrix from the
    input lattice onto the factor lattice, and the dual embedding of the
    factor's character space into the input's character coordinates."""

    __slots__ = ("factor_id", "group", "projection", "pi_star")

    def __init__(self, factor_id, group, projection):
        self.factor_id = factor_id
        self.group = group
        self.projection = tuple(tuple(int(x) for x in row) for row in projection)
        # characters of the factor extend by zero on the factor's z (rank
        # k >= 1: z is a commutator root; rank 0: the dual is the z column)
        if group.k >= 1:
            dual_cols = tuple(row[:2 * group.k] for row in self.projection)
        else:
            dual_cols = self.projection
        self.pi_star = transpose(dual_cols)

    @property
    def kind(self):
        return "heisenberg" if self.group.k >= 1 else "cyclic"

    def projection_kernel(self):
        return kernel(self.projection)


class FactorDecomposition:
    __slots__ = ("lattice_rank", "finite_factor", "factors", "trace")

    def __init__(self, lattice_rank, factors, finite_factor=None, trace=None):
        self.lattice_rank = lattice_rank
        self.factors = tuple(factors)
        self.finite_factor = finite_factor
        self.trace = tuple(trace or ())

    def check_subdirect(self):
        """Kernels of all projections must intersect trivially on the
        coordinate lattice (generators plus centre)."""
        if not self.factors:
            return self.lattice_rank == 0
        constraint_rows = []
        for factor in self.factors:
            constraint_rows.extend(transpose(factor.projection))
        return kernel(tuple(constraint_rows)).is_zero()


def _saturated(rows, ambient):
    """A sublattice given by integer rows is saturated iff its SNF
    invariant factors are all 0 or 1."""
    if not rows:
        return True
    _, d, _ = smith_normal_form(rows)
    return all(d[i][i] in (0, 1) for i in range(min(len(d), ambient)))


def symplectic_basis_lift(b):
    """Re-express a nondegenerate skew commutation matrix in symplectic
    generators: returns (group, T) with T unimodular, columns of T the
    exponent vectors of the new generators."""
    t, invariants = integer_symplectic_normal_form(b)
    return HeisenbergGroup(len(invariants), invariants), t


def _int_matrix(mat):
    out = []
    for row in mat:
        int_row = []
        for x in row:
            frac = Fraction(x)
            assert frac.denominator == 1
            int_row.append(int(frac))
        out.append(tuple(int_row))
    return tuple(out)


def _decompose_degenerate_block(b):
    """Split a possibly-degenerate skew matrix over Z.

    Returns (kernel_dim, block, coeff_matrix): the first kernel_dim
    columns of coeff_matrix read off coefficients along a lattice basis
    of the kernel, the remaining columns give coordinates on a
    complement, and block is the nondegenerate form on that complement.
    """
    n = len(b)
    ker = kernel(b)
    if ker.is_zero():
        return 0, b, identity(n)
    ker_rows = ker.basis
    _, d, v = smith_normal_form(ker_rows)
    assert all(d[i][i] == 1 for i in range(len(ker_rows))), \
        "kernel of an integer matrix must be saturated"
    # rows of inverse(v) extend a lattice basis of the kernel span
    full_basis = _int_matrix(mat_inverse(v))
    complement = full_basis[len(ker_rows):]
    block = mat_mul(mat_mul(complement, b), transpose(complement))
    coeff_matrix = _int_matrix(mat_inverse(full_basis))
    return len(ker_rows), block, coeff_matrix


def decompose_subdirect(data):
    """Express validated class-two data as a subdirect product of
    generalized Heisenberg factors (rank 0 factors are infinite cyclic).

    Centre rank r >= 2 is reduced by quotienting out the coordinate
    summands of the centre; each quotient has cyclic centre and splits
    into a symplectic block plus central directions.
    """
    n, r = data.n, data.r
    rank_total = data.lattice_rank
    factors = []
    trace = []
    counter = [0]

    def next_id(kind):
        counter[0] += 1
        return f"{kind}{counter[0]}"

    def add_cyclic(projection_column, note):
        projection = tuple((x,) for x in projection_column)
        factors.append(Factor(next_id("C"), HeisenbergGroup(0, ()), projection))
        trace.append({"factor": factors[-1].factor_id, "kind": "cyclic", "note": note})

    def process_cyclic_centre(b, g_map, z_index, note):
        """Factor data with centre coordinate z_index and commutation
        matrix b on the generators selected by the rows of g_map (a map
        from the input lattice to the block's g-coordinates)."""
        kernel_dim, block, coeff_matrix = _decompose_degenerate_block(b)
        # central generator directions split off as infinite cyclic factors
        for t in range(kernel_dim):
            column = tuple(coeff_matrix[row][t] for row in range(len(coeff_matrix)))
            lifted = tuple(mat_vec(g_map, column))
            add_cyclic(lifted, f"{note}: central generator direction")
        if not block:
            column = [0] * rank_total
            column[n + z_index] = 1
            add_cyclic(tuple(column), f"{note}: centre")
            return
        group, t_mat = symplectic_basis_lift(block)
        # input lattice -> complement coordinates -> symplectic coordinates
        comp_coords = tuple(row[kernel_dim:] for row in coeff_matrix)
        coords = _int_matrix(mat_mul(mat_mul(g_map, comp_coords),
                                     mat_inverse(transpose(t_mat))))
        projection = []
        for row_idx in range(rank_total):
            z_part = 1 if row_idx == n + z_index else 0
            projection.append(tuple(coords[row_idx]) + (z_part,))
        factors.append(Factor(next_id("H"), group, projection))
        trace.append({
            "factor": factors[-1].factor_id,
            "kind": "heisenberg",
            "rank": group.k,
            "invariants": list(group.invariants),
            "note": note,
        })

    if data.is_abelian():
        for t in range(rank_total):
            column = [0] * rank_total
            column[t] = 1
            add_cyclic(tuple(column), "abelian coordinate")
        result = FactorDecomposition(rank_total, factors, trace=trace)
        assert result.check_subdirect()
        return result

    g_map = tuple(tuple(1 if (i == j and i < n) else 0 for j in range(n))
                  for i in range(rank_total))
    for z_index in range(r):
        # quotient by the centre summand spanned by the other z's
        dropped = [tuple(1 if t == s else 0 for t in range(r))
                   for s in range(r) if s != z_index]
        assert _saturated(tuple(dropped), r)
        b = data.comm_matrix(z_index)
        process_cyclic_centre(b, g_map, z_index,
                              f"quotient onto centre coordinate {z_index + 1}")

    result = FactorDecomposition(rank_total, factors, trace=trace)
    if not result.check_subdirect():
        raise GroupDataError("projection kernels do not intersect trivially")
    return result


def commutation_form_rho(group):
    """The commutation embedding of the generator lattice into the
    rational dual, and the symplectic form the dual inherits.

    rho sends x_i to m_i * (dual of y_i) and y_i to -m_i * (dual of x_i);
    the Gram matrix of the inherited form has blocks [[0, 1/m_i],
    [-1/m_i, 0]] so that pairing two rho-images reproduces the
    commutator exponent.
    """
    if group.k < 1:
        raise GroupDataError("rank-0 factors have no symplectic dual")
    rho = group.comm_form_matrix()
    gram = []
    for i in range(2 * group.k):
        row = [Fraction(0)] * (2 * group.k)
        gram.append(row)
    for i, m in enumerate(group.invariants):
        gram[2 * i][2 * i + 1] = Fraction(1, m)
        gram[2 * i + 1][2 * i] = Fraction(-1, m)
    space = SymplecticSpace(tuple(tuple(r) for r in gram))
    return space, rho


class FiniteIndexSubgroup:
    """A finite-index Heisenberg subgroup picked out by scaling a
    symplectic basis of the dual into the commutation lattice."""

    __slots__ = ("j", "group", "generator_exponents", "iota_star")

    def __init__(self, j, group, generator_exponents, iota_star):
        self.j = j
        self.group = group
        self.generator_exponents = generator_exponents
        self.iota_star = iota_star

    def generator_words(self, names=None):
        words = []
        k = len(self.generator_exponents) // 2
        if names is None:
            names = []
            for i in range(k):
                names.extend((f"x{i + 1}", f"y{i + 1}"))
        for exponents in self.generator_exponents:
            word = tuple((names[t], e) for t, e in enumerate(exponents) if e)
            words.append(word)
        return tuple(words)


def finite_index_symplectic_subgroup(group, basis):
    """Scale the dual symplectic basis into the commutation lattice.

    j is the least positive integer with j * C inside the image of rho;
    the preimages D of j * C generate, together with z, a normal subgroup
    of finite index that is itself Heisenberg with all invariants j^2.
    """
    space, rho = commutation_form_rho(group)
    if basis.space.gram != space.gram:
        raise GroupDataError("basis does not match the commutation form")
    rho_inv = mat_inverse(rho)
    preimages = [vec_mat(c, rho_inv) for c in basis.vectors]
    j = lcm(*(x.denominator for row in preimages for x in row))
    exponents = tuple(tuple(int(j * x) for x in row) for row in preimages)

    b = group.comm_form_matrix()
    k = group.k
    expected = j * j
    for a in range(2 * k):
        row_a = vec_mat(exponents[a], b)
        for c in range(2 * k):
            value = sum(row_a[t] * exponents[c][t] for t in range(2 * k))
            if a // 2 == c // 2:
                target = expected if c == a + 1 else -expected if c == a - 1 else 0
            else:
                target = 0
            if value != target:
                raise GroupDataError("scaled basis is not symplectic in the lattice")

    if rank(exponents) != 2 * k:
        raise GroupDataError("subgroup does not have finite index")
    subgroup = HeisenbergGroup(k, (expected,) * k)
    iota_star = transpose(exponents)
    return FiniteIndexSubgroup(j, subgroup, exponents, iota_star)
