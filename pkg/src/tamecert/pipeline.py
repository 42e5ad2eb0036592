"""End-to-end synthesis: ingest a problem description, decompose the
group, walk the factors in ascending rank while accumulating the family
of subspaces the next factor must avoid, build the per-factor modules and
presentation data, and assemble a report whose certificates can be
replayed independently.

The factor loop keeps one invariant: after every step the union of the
accumulated cone bounds contains no line, and each cone's span has been
added to the avoidance family for the factors still to come.
"""

from fractions import Fraction
from math import lcm

from .delta import (
    DeltaBound,
    SimplicialCone,
    contains_line,
    heisenberg_delta_bound,
    induced_transfer,
    line_certificate,
    pullback_bound,
    tameness_certificate,
    union_bounds,
)
from .groups import (
    ClassTwoData,
    Factor,
    FactorDecomposition,
    GroupDataError,
    HeisenbergGroup,
    commutation_form_rho,
    decompose_subdirect,
    finite_index_symplectic_subgroup,
    validate,
)
from .linalg import Subspace, rank, solve_linear, transpose
from .modules import (
    CertificateError,
    Z_MATRIX,
    build_module,
    fitting_certificate,
    format_word,
    hnn_tower,
    split_extension_presentation,
    verify_annihilators,
    verify_group_relations,
)
from .report import to_jsonable
from .symplectic import (
    SymplecticBasis,
    associated_subspaces,
    complete_symplectic_basis,
    lagrangian_avoiding,
    simultaneous_complement_basis,
)

REPORT_SCHEMA = 1
DEFAULT_DEGREE = 3
DEFAULT_NMAX = 100


class ProblemError(ValueError):
    """Invalid problem input (malformed or schema-violating)."""


class ProblemSpec:
    __slots__ = ("class_two", "factors", "finite_factor", "degree", "n_max", "raw")

    def __init__(self, class_two=None, factors=None, finite_factor=None,
                 degree=DEFAULT_DEGREE, n_max=DEFAULT_NMAX, raw=None):
        self.class_two = class_two
        self.factors = factors
        self.finite_factor = finite_factor
        self.degree = degree
        self.n_max = n_max
        self.raw = raw


def _expect(condition, message):
    if not condition:
        raise ProblemError(message)


def parse_problem(data):
    """Validate a problem dictionary against the input schema."""
    _expect(isinstance(data, dict), "problem must be a JSON object")
    _expect(data.get("schema") == 1, 'problem must declare "schema": 1')
    has_class_two = "class_two" in data
    has_factors = "factors" in data
    _expect(has_class_two != has_factors,
            'exactly one of "class_two" and "factors" must be present')
    unknown = set(data) - {"schema", "class_two", "factors", "finite_factor", "options"}
    _expect(not unknown, f"unknown top-level keys: {sorted(unknown)}")

    finite_factor = None
    if "finite_factor" in data:
        ff = data["finite_factor"]
        _expect(isinstance(ff, dict), '"finite_factor" must be an object')
        _expect(isinstance(ff.get("name"), str), 'finite factor needs a "name"')
        _expect(isinstance(ff.get("order"), int) and ff["order"] >= 1,
                'finite factor needs a positive integer "order"')
        finite_factor = {"name": ff["name"], "order": ff["order"]}

    options = data.get("options", {})
    _expect(isinstance(options, dict), '"options" must be an object')
    degree = options.get("degree", DEFAULT_DEGREE)
    n_max = options.get("nmax", DEFAULT_NMAX)
    _expect(isinstance(degree, int) and degree >= 1, '"degree" must be a positive integer')
    _expect(isinstance(n_max, int) and n_max >= 1, '"nmax" must be a positive integer')

    class_two = None
    factors = None
    if has_class_two:
        block = data["class_two"]
        _expect(isinstance(block, dict), '"class_two" must be an object')
        n = block.get("n")
        r = block.get("r")
        _expect(isinstance(n, int) and n >= 0, '"n" must be a nonnegative integer')
        _expect(isinstance(r, int) and r >= 0, '"r" must be a nonnegative integer')
        comm = {}
        for idx, entry in enumerate(block.get("comm", [])):
            _expect(isinstance(entry, dict), f"comm[{idx}] must be an object")
            i, j, z = entry.get("i"), entry.get("j"), entry.get("z")
            _expect(isinstance(i, int) and isinstance(j, int),
                    f"comm[{idx}] needs integer indices i, j")
            _expect(1 <= i < j <= n,
                    f"comm[{idx}]: need 1 <= i < j <= n (indices are 1-based)")
            _expect(isinstance(z, list) and len(z) == r
                    and all(isinstance(x, int) for x in z),
                    f"comm[{idx}]: z must list one integer per centre generator")
            _expect((i - 1, j - 1) not in comm, f"comm[{idx}]: duplicate pair ({i}, {j})")
            comm[(i - 1, j - 1)] = tuple(z)
        try:
            class_two = validate(ClassTwoData(n, r, comm))
        except GroupDataError as err:
            raise ProblemError(str(err)) from None
    else:
        entries = data["factors"]
        _expect(isinstance(entries, list) and entries, '"factors" must be a nonempty list')
        parsed = []
        ambient = None
        for idx, entry in enumerate(entries):
            _expect(isinstance(entry, dict), f"factors[{idx}] must be an object")
            k = entry.get("k")
            invariants = entry.get("invariants", [])
            projection = entry.get("projection")
            _expect(isinstance(k, int) and k >= 0, f"factors[{idx}]: bad rank k")
            _expect(isinstance(invariants, list) and len(invariants) == k,
                    f"factors[{idx}]: need one invariant per index")
            _expect(isinstance(projection, list) and projection,
                    f"factors[{idx}]: missing projection matrix")
            width = 2 * k + 1
            for row in projection:
                _expect(isinstance(row, list) and len(row) == width
                        and all(isinstance(x, int) for x in row),
                        f"factors[{idx}]: projection rows must have {width} integers")
            if ambient is None:
                ambient = len(projection)
            _expect(len(projection) == ambient,
                    f"factors[{idx}]: projection has {len(projection)} rows, expected {ambient}")
            try:
                group = HeisenbergGroup(k, invariants)
            except GroupDataError as err:
                raise ProblemError(f"factors[{idx}]: {err}") from None
            parsed.append(Factor(f"F{idx + 1}", group, projection))
        factors = FactorDecomposition(ambient, parsed)
        _expect(factors.check_subdirect(),
                "projection kernels do not intersect trivially")

    return ProblemSpec(class_two=class_two, factors=factors,
                       finite_factor=finite_factor, degree=degree, n_max=n_max,
                       raw=data)


def decomposition_for(spec):
    if spec.class_two is not None:
        return decompose_subdirect(spec.class_two)
    return spec.factors


def _subspace_rows(sub):
    return [list(row) for row in sub.basis]


def _cone_dicts(bound):
    return [{"generators": [list(g) for g in cone.generators], "tag": cone.tag}
            for cone in bound.cones]


def _bound_from_dicts(ambient, cone_dicts):
    cones = [SimplicialCone([tuple(g) for g in c["generators"]],
                            tag=c["tag"], ambient_dim=ambient)
             for c in cone_dicts]
    return DeltaBound(ambient, tuple(cones))


def _pullback_subspaces(omega, pi_star, ambient_dim, k):
    """Intersect each accumulated subspace with the image of the dual
    embedding and carry it through the inverse, in H-dual coordinates."""
    image = Subspace.from_spanning(pi_star, ambient_dim)
    pulled = []
    for sub in omega:
        cut = sub.intersect(image)
        if cut.is_zero():
            continue
        coords = []
        for row in cut.basis:
            sol = solve_linear(transpose(pi_star), row)
            assert sol is not None
            coords.append(sol)
        what = Subspace.from_spanning(coords, 2 * k)
        if what.dim > k:
            raise CertificateError(
                "accumulated subspace exceeds the factor rank", witness=what.basis)
        if not what.is_zero() and what not in pulled:
            pulled.append(what)
    return pulled


def _rotate_pairs(basis):
    """Replace each pair (e, f) by (f, -e).  The rotated basis is still
    symplectic, and the delta rays transferred from the subgroup then span
    exactly the associated subspaces certified by the avoidance search."""
    rotated = []
    for i in range(basis.k):
        rotated.append(basis.f(i))
        rotated.append(tuple(-x for x in basis.e(i)))
    return SymplecticBasis(basis.space, rotated)


def _process_heisenberg_factor(factor, omega, ambient, degree):
    group = factor.group
    k = group.k
    space, rho = commutation_form_rho(group)
    pi_star = factor.pi_star
    if rank(pi_star) != 2 * k:
        raise CertificateError(f"dual embedding of {factor.factor_id} is not injective")

    omega_hat = _pullback_subspaces(omega, pi_star, ambient, k)
    lagrangian = lagrangian_avoiding(space, omega_hat)
    completed = complete_symplectic_basis(space, lagrangian)
    complement = simultaneous_complement_basis(space, completed, omega_hat)
    scaled_basis = _rotate_pairs(complement.basis)
    subgroup = finite_index_symplectic_subgroup(group, scaled_basis)

    module = build_module(subgroup.group)
    relations = verify_group_relations(module, degree)
    annihilators = verify_annihilators(module)
    presentation = split_extension_presentation(subgroup.group)
    tower = hnn_tower(subgroup.group)

    bound_subgroup = heisenberg_delta_bound(subgroup.group, tag=factor.factor_id)
    bound_group = induced_transfer(bound_subgroup, subgroup.iota_star)

    family = associated_subspaces(complement.basis)
    expected_spans = set(family.subspaces)
    actual_spans = {Subspace.from_spanning(c.generators, 2 * k)
                    for c in bound_group.cones}
    if actual_spans != expected_spans:
        raise CertificateError(
            f"transferred spans of {factor.factor_id} do not coincide with "
            "the certified associated subspaces")
    for span in actual_spans:
        for what in omega_hat:
            if not span.meets_trivially(what):
                raise CertificateError(
                    f"associated subspace of {factor.factor_id} meets an "
                    "accumulated subspace", witness=span.basis)

    bound_ambient = pullback_bound(bound_group, pi_star)

    item = {
        "id": factor.factor_id,
        "kind": "heisenberg",
        "k": k,
        "invariants": list(group.invariants),
        "projection": [list(r) for r in factor.projection],
        "pi_star": [list(r) for r in pi_star],
        "omega_hat": [_subspace_rows(w) for w in omega_hat],
        "lagrangian": _subspace_rows(lagrangian),
        "avoiding_basis": [list(v) for v in complement.basis.vectors],
        "p": complement.p,
        "scaled_basis": [list(v) for v in scaled_basis.vectors],
        "j": subgroup.j,
        "subgroup_generators": [list(v) for v in subgroup.generator_exponents],
        "subgroup_generator_words": [format_word(w)
                                     for w in subgroup.generator_words()],
        "subgroup_invariants": list(subgroup.group.invariants),
        "iota_star": [list(r) for r in subgroup.iota_star],
        "module": {"k": k, "invariants": list(subgroup.group.invariants),
                   "z_matrix": [list(r) for r in Z_MATRIX]},
        "presentation": presentation.as_dict(),
        "hnn_tower": tower,
        "certificates": {"relations": relations, "annihilators": annihilators},
        "delta_cones_subgroup": _cone_dicts(bound_subgroup),
        "delta_cones_group": _cone_dicts(bound_group),
        "delta_cones_ambient": _cone_dicts(bound_ambient),
    }
    return item, bound_ambient


def _central_action_entries(spec, decomposition):
    """Per central generator and factor, the matrix by which it acts on
    the module generators' lattice (a power of the z-action)."""
    entries = []
    data = spec.class_two
    for factor in decomposition.factors:
        z_col = 2 * factor.group.k
        module = build_module(HeisenbergGroup(0, ()))
        if data is not None:
            for t in range(data.r):
                exponent = factor.projection[data.n + t][z_col]
                entries.append({
                    "label": f"z{t + 1} on {factor.factor_id}",
                    "central_generator": f"z{t + 1}",
                    "factor": factor.factor_id,
                    "exponent": exponent,
                    "matrix": module.z_power_matrix(exponent),
                })
        else:
            entries.append({
                "label": f"z on {factor.factor_id}",
                "central_generator": "z",
                "factor": factor.factor_id,
                "exponent": 1,
                "matrix": Z_MATRIX,
            })
    return entries


def run_pipeline(spec):
    decomposition = decomposition_for(spec)
    ambient = decomposition.lattice_rank
    if not decomposition.check_subdirect():
        raise CertificateError("projection kernels do not intersect trivially")

    ordered = sorted(decomposition.factors, key=lambda f: f.group.k)
    factor_items = []
    bounds = []
    omega = []
    omega_trace = []

    if spec.finite_factor is not None:
        factor_items.append({
            "id": "finite",
            "kind": "finite",
            "name": spec.finite_factor["name"],
            "order": spec.finite_factor["order"],
            "delta_cones_ambient": [],
            "note": "group-ring module; characters vanish on a finite group, "
                    "so the invariant is the origin",
        })

    for factor in ordered:
        if factor.group.k == 0:
            factor_items.append({
                "id": factor.factor_id,
                "kind": "cyclic",
                "projection": [list(r) for r in factor.projection],
                "module": {"k": 0, "invariants": [],
                           "z_matrix": [list(r) for r in Z_MATRIX]},
                "presentation": split_extension_presentation(
                    HeisenbergGroup(0, ())).as_dict(),
                "delta_cones_ambient": [],
                "note": "module is finitely generated as an abelian group; "
                        "the invariant is the origin",
            })
            continue
        item, bound_ambient = _process_heisenberg_factor(
            factor, omega, ambient, spec.degree)
        bounds.append(bound_ambient)
        current = union_bounds(bounds)
        witness = contains_line(current)
        if witness is not None:
            raise CertificateError(
                f"union contains a line after factor {factor.factor_id}",
                witness=witness)
        added = []
        for cone in bound_ambient.cones:
            span = Subspace.from_spanning(cone.generators, ambient)
            if span not in omega:
                omega.append(span)
                added.append(_subspace_rows(span))
        omega_trace.append({"factor": factor.factor_id, "added_spans": added})
        item["omega_size_after"] = len(omega)
        factor_items.append(item)

    final_bound = union_bounds(bounds) if bounds else DeltaBound(ambient, ())
    central_actions = _central_action_entries(spec, decomposition)
    tameness = tameness_certificate(final_bound, central_actions)
    fitting = fitting_certificate(spec.n_max)

    report = {
        "schema": REPORT_SCHEMA,
        "kind": "synthesis_report",
        "options": {"degree": spec.degree, "nmax": spec.n_max},
        "input": spec.raw,
        "decomposition": {
            "lattice_rank": ambient,
            "finite_factor": spec.finite_factor,
            "factors": [{
                "id": f.factor_id,
                "kind": f.kind,
                "k": f.group.k,
                "invariants": list(f.group.invariants),
                "projection": [list(r) for r in f.projection],
                "pi_star": [list(r) for r in f.pi_star],
            } for f in decomposition.factors],
            "trace": list(decomposition.trace),
            "kernel_intersection_trivial": True,
        },
        "factors": factor_items,
        "omega_trace": omega_trace,
        "delta_bound": {
            "ambient_dim": ambient,
            "cones": _cone_dicts(final_bound),
        },
        "polycyclic": not bounds,
        "tameness": tameness,
        "fitting": fitting,
    }
    return to_jsonable(report)


# --- plain-text narrative ---------------------------------------------------------


def render_text_report(report):
    lines = []
    out = lines.append
    out("tamecert synthesis report")
    out("=" * 25)
    dec = report["decomposition"]
    out(f"lattice rank: {dec['lattice_rank']}")
    if dec["finite_factor"]:
        ff = dec["finite_factor"]
        out(f"finite factor: {ff['name']} of order {ff['order']} "
            "(invariant reduced to the origin)")
    out(f"factors: {len(dec['factors'])}")
    for f in dec["factors"]:
        if f["k"] > 0:
            out(f"  {f['id']}: rank {f['k']} with invariants {f['invariants']}")
        else:
            out(f"  {f['id']}: infinite cyclic")
    out("")
    for item in report["factors"]:
        out(f"factor {item['id']} ({item['kind']})")
        if item["kind"] == "heisenberg":
            out(f"  avoided subspaces: {len(item['omega_hat'])}")
            out(f"  scale p = {item['p']}, lattice scale j = {item['j']}")
            out(f"  subgroup generators: "
                + ", ".join(item["subgroup_generator_words"]))
            out(f"  subgroup invariants: {item['subgroup_invariants']}")
            out("  presentation:")
            gens = ", ".join(item["presentation"]["generators"])
            out(f"    < {gens} |")
            for rel in item["presentation"]["relators"]:
                out(f"      {rel}")
            out("    >")
            out(f"  cones contributed: {len(item['delta_cones_ambient'])}")
        else:
            out(f"  {item['note']}")
        out("")
    bound = report["delta_bound"]
    out(f"final bound: {len(bound['cones'])} cones in dimension {bound['ambient_dim']}")
    for cone in bound["cones"]:
        out(f"  [{cone['tag']}] generators {cone['generators']}")
    if report.get("polycyclic"):
        out("all factors finite or cyclic: the extension is polycyclic and "
            "the invariant is the origin")
    out(f"no-line test: {'pass' if report['tameness']['no_line']['ok'] else 'FAIL'}")
    out(f"central actions unimodular: "
        f"{len(report['tameness']['derived_subgroup_triviality'])} checked")
    fit = report["fitting"]
    out(f"centre acts without nilpotency: resultants nonzero for n <= {fit['n_max']} "
        f"(discriminant {fit['discriminant']})")
    out("")
    out("verdict: module is tame; the split extension is finitely presented "
        "and the module is the largest nilpotent normal subgroup.")
    return "\n".join(lines) + "\n"
