"""Replay of a synthesis report's certificates.

Everything derivable from recorded search results (bases, scales,
subgroup generators) is recomputed and compared; validity claims
(symplectic Gram, avoidance rank checks, relation identities, no-line
verdicts, unimodularity, nonvanishing resultants) are re-checked from
scratch.  The search steps themselves are not repeated, so verification
is cheaper than synthesis.
"""

from .delta import heisenberg_delta_bound, induced_transfer, line_certificate, \
    pullback_bound, union_bounds
from .groups import GroupDataError, HeisenbergGroup, commutation_form_rho, \
    finite_index_symplectic_subgroup
from .linalg import Subspace, det
from .modules import (
    CertificateError,
    HeisenbergModule,
    fitting_certificate,
    hnn_tower,
    split_extension_presentation,
    verify_annihilators,
    verify_group_relations,
)
from .pipeline import (
    ProblemError,
    _bound_from_dicts,
    _central_action_entries,
    _cone_dicts,
    _pullback_subspaces,
    _rotate_pairs,
    decomposition_for,
    parse_problem,
)
from .report import int_matrix_from_json, matrix_from_json, to_jsonable
from .symplectic import SymplecticBasis, associated_subspaces


class _Failures:
    def __init__(self):
        self.entries = []

    def add(self, check, detail, witness=None, factor=None):
        entry = {"check": check, "detail": detail}
        if factor is not None:
            entry["factor"] = factor
        if witness is not None:
            entry["witness"] = to_jsonable(witness)
        self.entries.append(entry)


def _check_structure(report, failures):
    required = ("schema", "kind", "options", "input", "decomposition",
                "factors", "delta_bound", "tameness", "fitting")
    for key in required:
        if key not in report:
            failures.add("structure", f"missing report key {key!r}")
    if report.get("kind") != "synthesis_report":
        failures.add("structure", "not a synthesis report")
    return not failures.entries


def _check_decomposition(report, failures):
    try:
        spec = parse_problem(report["input"])
    except ProblemError as err:
        failures.add("input", f"embedded input is invalid: {err}")
        return None, None
    try:
        decomposition = decomposition_for(spec)
    except GroupDataError as err:
        failures.add("decomposition", f"decomposition failed: {err}")
        return spec, None
    recorded = report["decomposition"]
    recomputed = {
        "lattice_rank": decomposition.lattice_rank,
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
    }
    if not decomposition.check_subdirect():
        failures.add("decomposition", "projection kernels intersect nontrivially")
    if to_jsonable(recomputed) != recorded:
        failures.add("decomposition", "recorded decomposition differs from "
                     "the one recomputed from the input")
    return spec, decomposition


def _verify_heisenberg_item(item, dec_record, omega, ambient, degree, failures):
    factor_id = item["id"]
    k = item["k"]
    if dec_record is None:
        failures.add("structure", "factor item without a decomposition entry",
                     factor=factor_id)
        return
    group = HeisenbergGroup(k, item["invariants"])
    space, _ = commutation_form_rho(group)
    pi_star = int_matrix_from_json(item["pi_star"])
    for key in ("k", "invariants", "projection", "pi_star"):
        if item[key] != dec_record[key]:
            failures.add("structure", f"factor item {key} differs from the "
                         "decomposition record", factor=factor_id)
            return

    omega_hat = _pullback_subspaces(omega, pi_star, ambient, k)
    if to_jsonable([[list(r) for r in w.basis] for w in omega_hat]) != item["omega_hat"]:
        failures.add("omega_hat", "recorded avoided subspaces differ from "
                     "the recomputed accumulation", factor=factor_id)
        return

    try:
        avoiding = SymplecticBasis(space, matrix_from_json(item["avoiding_basis"]))
    except ValueError as err:
        failures.add("avoiding_basis", str(err), factor=factor_id)
        return

    lagrangian = Subspace.from_spanning([avoiding.e(i) for i in range(k)], 2 * k)
    if to_jsonable([list(r) for r in lagrangian.basis]) != item["lagrangian"]:
        failures.add("lagrangian", "recorded Lagrangian does not match the "
                     "e-span of the avoiding basis", factor=factor_id)

    family = associated_subspaces(avoiding)
    for sub in family.subspaces:
        for what in omega_hat:
            if not sub.meets_trivially(what):
                failures.add("avoidance", "an associated subspace meets an "
                             "accumulated subspace", factor=factor_id,
                             witness=[list(r) for r in sub.basis])

    scaled = _rotate_pairs(avoiding)
    if to_jsonable([list(v) for v in scaled.vectors]) != item["scaled_basis"]:
        failures.add("scaled_basis", "recorded scaled basis is not the pair "
                     "rotation of the avoiding basis", factor=factor_id)
        return

    try:
        subgroup = finite_index_symplectic_subgroup(group, scaled)
    except GroupDataError as err:
        failures.add("subgroup", str(err), factor=factor_id)
        return
    if subgroup.j != item["j"]:
        failures.add("subgroup", f"recorded j = {item['j']} but recomputed "
                     f"j = {subgroup.j}", factor=factor_id)
    if to_jsonable([list(v) for v in subgroup.generator_exponents]) \
            != item["subgroup_generators"]:
        failures.add("subgroup", "recorded subgroup generators differ",
                     factor=factor_id)
    if list(subgroup.group.invariants) != item["subgroup_invariants"]:
        failures.add("subgroup", "recorded subgroup invariants differ",
                     factor=factor_id)
    if any(m != subgroup.j ** 2 for m in subgroup.group.invariants):
        failures.add("subgroup", "subgroup invariants are not j^2",
                     factor=factor_id)

    module = HeisenbergModule(k, tuple(item["subgroup_invariants"]))
    try:
        verify_group_relations(module, degree)
        verify_annihilators(module)
    except CertificateError as err:
        failures.add("module", str(err), factor=factor_id, witness=err.witness)

    presentation = split_extension_presentation(subgroup.group)
    if to_jsonable(presentation.as_dict()) != item["presentation"]:
        failures.add("presentation", "recorded presentation differs from the "
                     "recomputed relator list", factor=factor_id)
    if to_jsonable(hnn_tower(subgroup.group)) != item["hnn_tower"]:
        failures.add("presentation", "recorded tower data differs",
                     factor=factor_id)

    bound_subgroup = heisenberg_delta_bound(subgroup.group, tag=factor_id)
    if _cone_dicts(bound_subgroup) != item["delta_cones_subgroup"]:
        failures.add("delta", "recorded subgroup cones differ", factor=factor_id)
    if to_jsonable([list(r) for r in subgroup.iota_star]) != item["iota_star"]:
        failures.add("delta", "recorded restriction map differs", factor=factor_id)
    bound_group = induced_transfer(bound_subgroup, subgroup.iota_star)
    if _cone_dicts(bound_group) != item["delta_cones_group"]:
        failures.add("delta", "recorded group-frame cones differ", factor=factor_id)
    expected_spans = set(family.subspaces)
    actual_spans = {Subspace.from_spanning(c.generators, 2 * k)
                    for c in bound_group.cones}
    if expected_spans != actual_spans:
        failures.add("delta", "transferred spans do not coincide with the "
                     "associated subspaces", factor=factor_id)
    bound_ambient = pullback_bound(bound_group, pi_star)
    if _cone_dicts(bound_ambient) != item["delta_cones_ambient"]:
        failures.add("delta", "recorded ambient cones differ", factor=factor_id)


def verify_report(report):
    """Replay all certificates; returns a list of failures (empty = ok)."""
    failures = _Failures()
    if not _check_structure(report, failures):
        return failures.entries
    spec, decomposition = _check_decomposition(report, failures)
    if decomposition is None:
        return failures.entries

    ambient = decomposition.lattice_rank
    degree = report["options"]["degree"]
    n_max = report["options"]["nmax"]

    dec_records = {f["id"]: f for f in report["decomposition"]["factors"]}
    omega = []
    bounds = []
    last_rank = 0
    for item in report["factors"]:
        if item["kind"] in ("finite", "cyclic"):
            if item["delta_cones_ambient"]:
                failures.add("delta", "finite or cyclic factor with a "
                             "nontrivial bound", factor=item["id"])
            continue
        if item["k"] < last_rank:
            failures.add("structure", "factors are not in ascending rank order",
                         factor=item["id"])
        last_rank = item["k"]
        _verify_heisenberg_item(item, dec_records.get(item["id"]), omega,
                                ambient, degree, failures)
        try:
            bound_ambient = _bound_from_dicts(ambient, item["delta_cones_ambient"])
        except ValueError as err:
            failures.add("delta", f"recorded cones are malformed: {err}",
                         factor=item["id"])
            continue
        bounds.append(bound_ambient)
        for cone in bound_ambient.cones:
            span = Subspace.from_spanning(cone.generators, ambient)
            if span not in omega:
                omega.append(span)

    try:
        final = _bound_from_dicts(ambient, report["delta_bound"]["cones"])
    except ValueError as err:
        failures.add("delta", f"final bound is malformed: {err}")
        return failures.entries
    if bounds:
        recomputed_final = union_bounds(bounds)
        if _cone_dicts(recomputed_final) != report["delta_bound"]["cones"]:
            failures.add("delta", "final bound is not the union of the "
                         "per-factor bounds")
    elif report["delta_bound"]["cones"]:
        failures.add("delta", "final bound should be the origin")

    cert = line_certificate(final)
    if cert["witness"] is not None:
        failures.add("no_line", "final bound contains a line",
                     witness=cert["witness"])
    recorded_pairs = report["tameness"]["no_line"]["pairs"]
    if to_jsonable(cert["pairs"]) != recorded_pairs:
        failures.add("no_line", "recorded pair verdicts differ from replay")

    expected_actions = _central_action_entries(spec, decomposition)
    recorded_actions = report["tameness"]["derived_subgroup_triviality"]
    if len(expected_actions) != len(recorded_actions):
        failures.add("central", "central action list has wrong length")
    else:
        for expected, recorded in zip(expected_actions, recorded_actions):
            matrix = expected["matrix"]
            d = int(det(matrix))
            if abs(d) != 1:
                failures.add("central", f"action {expected['label']} is not "
                             "unimodular", witness=matrix)
            if to_jsonable({**expected, "det": d}) != recorded:
                failures.add("central", f"recorded action {recorded.get('label')} "
                             "differs from the recomputed one")

    fitting = fitting_certificate(n_max)
    if to_jsonable(fitting) != report["fitting"]:
        failures.add("fitting", "recorded fitting certificate differs")
    if any(v == 0 for v in report["fitting"].get("resultants", [])):
        failures.add("fitting", "a recorded resultant vanishes")

    return failures.entries
