"""Named verification checks over charts, maps and Nambu spaces.

Every check returns a CheckResult carrying a stable name, a pass flag
and the residual in canonical string form, so reports are reproducible
byte for byte.  `run_suite` assembles the applicable checks for one
problem: structure first, then the named maps (sorted), their pairs and
triples, a seeded random corpus, the classical single-form suite when
k = 1, and the Nambu relations when the problem lives on one of the two
Nambu model spaces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .geometry import (
    Chart,
    KSymplecticStructure,
    OneFormRk,
    RkMap,
    check_ksymplectic,
    differential,
    exterior_derivative_one_form,
    grid_is_zero,
    interior_product,
    xi_pairing,
)
from .hamiltonian import (
    GeneralPoissonTensor,
    NotPolarized,
    PolarizedForm,
    bracket,
    bracket_via_theta,
    canonical_poisson_tensor,
    classical_bracket,
    decompose_polarized,
    hamiltonian_field,
    jacobi_check,
    lie_bracket,
)
from .nambu import (
    NambuSpaceR3n,
    NambuSpaceRk1,
    nambu_bracket_r3n,
    nambu_field_r3n,
    nambu_field_rk1,
    verify_relation_r3n,
    verify_relation_rk1,
)
from .sampling import DEFAULT_SEED, random_basic, random_polarized, random_polynomial


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: str = "0"
    details: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name} residual={self.residual}"
        if self.details:
            out += f" ({self.details})"
        return out


def _result(name: str, passed: bool, residual: str = "0",
            details: str = "") -> CheckResult:
    return CheckResult(name, passed, residual, details)


# -- structure ---------------------------------------------------------------


def structure_checks(structure: KSymplecticStructure) -> list[CheckResult]:
    report = check_ksymplectic(structure)
    chart = structure.chart
    joint_ok = not report.joint_kernel
    vertical_ok = not report.vertical_violations
    out = [
        _result("structure.joint-characteristic-trivial", joint_ok,
                "0" if joint_ok else f"kernel dimension {len(report.joint_kernel)}"),
        _result("structure.vertical-isotropy", vertical_ok,
                "0" if vertical_ok else report.summary(chart)),
    ]
    return out


# -- per-map identities -------------------------------------------------------


def duality_check(name: str, pf: PolarizedForm) -> CheckResult:
    chart = pf.chart
    structure = KSymplecticStructure.canonical(chart)
    H = pf.to_map()
    dH = differential(H)
    X = hamiltonian_field(pf)
    for p in range(chart.k):
        row = interior_product(X, structure.theta(p))
        for j in range(chart.dim):
            delta = row[j] + dH.entry(p, j)
            if not delta.is_zero:
                return _result(f"duality[{name}]", False,
                               delta.to_string(chart.var_names),
                               f"component {p + 1}, dx^{chart.var_name(j)}")
    return _result(f"duality[{name}]", True)


def closed_pfaff_check(name: str, pf: PolarizedForm) -> CheckResult:
    chart = pf.chart
    structure = KSymplecticStructure.canonical(chart)
    X = hamiltonian_field(pf)
    for p in range(chart.k):
        grid = exterior_derivative_one_form(interior_product(X, structure.theta(p)))
        if not grid_is_zero(grid):
            witness = next(poly for row in grid for poly in row if not poly.is_zero)
            return _result(f"closed-pfaff[{name}]", False,
                           witness.to_string(chart.var_names),
                           f"form {p + 1}")
    return _result(f"closed-pfaff[{name}]", True)


def first_integral_check(name: str, pf: PolarizedForm) -> CheckResult:
    """<dH^p, X_H> = 0 for every p."""
    chart = pf.chart
    H = pf.to_map()
    paired = xi_pairing(differential(H), hamiltonian_field(pf))
    return _result(f"first-integral[{name}]", paired.is_zero, paired.to_string())


def aligned_basis_forms(chart: Chart):
    """Basis forms on which the pairing-tensor identity is exact.

    These are every leaf form dx^j tensor e_p and the fiber forms whose
    coordinate block matches their slot.  Mixed-block fiber forms fall
    outside the block pairing of the canonical tensor and genuinely
    break the unrestricted identity once k >= 2 (at k = 1 this set is
    all k*N basis forms).
    """
    for p in range(chart.k):
        for j in chart.leaf_indices:
            yield p, j
        for j in chart.fiber_block(p + 1):
            yield p, j


def xi_poisson_check(name: str, pf: PolarizedForm,
                     tensor: GeneralPoissonTensor) -> CheckResult:
    """Xi(X_H) agrees with -P(dH, .) on the aligned basis forms."""
    chart = pf.chart
    X = hamiltonian_field(pf)
    dH = differential(pf.to_map())
    for p, j in aligned_basis_forms(chart):
        beta = OneFormRk.basis(chart, p, j)
        delta = xi_pairing(beta, X) + tensor.apply(dH, beta)
        if not delta.is_zero:
            return _result(
                f"xi-poisson[{name}]", False, delta.to_string(),
                f"basis form dx^{chart.var_name(j)} in slot {p + 1}")
    return _result(f"xi-poisson[{name}]", True)


def map_checks(name: str, H: RkMap,
               tensor: GeneralPoissonTensor) -> tuple[list[CheckResult],
                                                      PolarizedForm | None]:
    try:
        pf = decompose_polarized(H)
    except NotPolarized as exc:
        return [_result(f"polarized[{name}]", False, "-", str(exc))], None
    results = [
        _result(f"polarized[{name}]", True, "0",
                "f=(" + ", ".join(p.to_string(H.chart.var_names) for p in pf.f) + ")"),
        duality_check(name, pf),
        closed_pfaff_check(name, pf),
        first_integral_check(name, pf),
        xi_poisson_check(name, pf, tensor),
    ]
    return results, pf


# -- pair and triple identities ----------------------------------------------


def routes_check(label: str, a: PolarizedForm, b: PolarizedForm,
                 tensor: GeneralPoissonTensor) -> CheckResult:
    """Coordinate bracket vs 2-form contraction vs Poisson tensor."""
    coord = bracket(a, b)
    theta_route = bracket_via_theta(a, b)
    poisson_route = tensor.apply(differential(a.to_map()),
                                 differential(b.to_map()))
    delta_theta = coord - theta_route
    delta_poisson = coord - poisson_route
    if not delta_theta.is_zero:
        return _result(f"routes[{label}]", False, delta_theta.to_string(),
                       "2-form route disagrees")
    if not delta_poisson.is_zero:
        return _result(f"routes[{label}]", False, delta_poisson.to_string(),
                       "tensor route disagrees")
    return _result(f"routes[{label}]", True)


def closure_check(label: str, a: PolarizedForm, b: PolarizedForm) -> CheckResult:
    value = bracket(a, b)
    try:
        decompose_polarized(value)
    except NotPolarized as exc:
        return _result(f"closure[{label}]", False, value.to_string(), str(exc))
    return _result(f"closure[{label}]", True)


def morphism_check(label: str, a: PolarizedForm, b: PolarizedForm) -> CheckResult:
    """[X_H, X_K] = X_{K,H} under the fixed sign conventions."""
    lhs = lie_bracket(hamiltonian_field(a), hamiltonian_field(b))
    rhs = hamiltonian_field(decompose_polarized(bracket(b, a)))
    delta = lhs - rhs
    return _result(f"morphism[{label}]", delta.is_zero, delta.to_string())


def pairing_bracket_check(label: str, a: PolarizedForm,
                          b: PolarizedForm) -> CheckResult:
    """<dK, X_H> = {K,H}."""
    lhs = xi_pairing(differential(b.to_map()), hamiltonian_field(a))
    rhs = bracket(b, a)
    delta = lhs - rhs
    return _result(f"pairing-bracket[{label}]", delta.is_zero, delta.to_string())


def jacobi_result(label: str, a: PolarizedForm, b: PolarizedForm,
                  c: PolarizedForm) -> CheckResult:
    report = jacobi_check(a, b, c)
    return _result(f"jacobi[{label}]", report.passed, report.residual_text)


# -- random corpus -------------------------------------------------------------


def _aggregate(name: str, failures: list[str], trials: int) -> CheckResult:
    if failures:
        return _result(name, False, failures[0],
                       f"{len(failures)} of {trials} trials failed")
    return _result(name, True, "0", f"trials={trials}")


def random_corpus_checks(chart: Chart, tensor: GeneralPoissonTensor,
                         seed: int, trials: int) -> list[CheckResult]:
    rng = random.Random(seed)
    route_failures: list[str] = []
    closure_failures: list[str] = []
    morphism_failures: list[str] = []
    jacobi_failures: list[str] = []
    module_failures: list[str] = []
    for _ in range(trials):
        a = random_polarized(rng, chart)
        b = random_polarized(rng, chart)
        c = random_polarized(rng, chart)
        coord = bracket(a, b)
        delta_theta = coord - bracket_via_theta(a, b)
        delta_poisson = coord - tensor.apply(differential(a.to_map()),
                                             differential(b.to_map()))
        if not delta_theta.is_zero:
            route_failures.append(delta_theta.to_string())
        elif not delta_poisson.is_zero:
            route_failures.append(delta_poisson.to_string())
        try:
            ab = decompose_polarized(coord)
        except NotPolarized as exc:
            closure_failures.append(str(exc))
            continue
        lhs = lie_bracket(hamiltonian_field(a), hamiltonian_field(b))
        rhs = hamiltonian_field(decompose_polarized(bracket(b, a)))
        if lhs != rhs:
            morphism_failures.append((lhs - rhs).to_string())
        report = jacobi_check(a, b, c)
        if not report.passed:
            jacobi_failures.append(report.residual_text)
        scaled = random_basic(rng, chart) * a.to_map()
        try:
            decompose_polarized(scaled)
        except NotPolarized as exc:
            module_failures.append(str(exc))
    return [
        _aggregate("random.routes", route_failures, trials),
        _aggregate("random.closure", closure_failures, trials),
        _aggregate("random.morphism", morphism_failures, trials),
        _aggregate("random.jacobi", jacobi_failures, trials),
        _aggregate("random.basic-module", module_failures, trials),
    ]


def classical_checks(chart: Chart, seed: int, trials: int) -> list[CheckResult]:
    """Antisymmetry, Leibniz and Jacobi for arbitrary functions at k = 1."""
    rng = random.Random(seed)
    names = chart.var_names
    antisym: list[str] = []
    leibniz: list[str] = []
    jacobi: list[str] = []
    for _ in range(trials):
        H = random_polynomial(rng, chart)
        K = random_polynomial(rng, chart)
        L = random_polynomial(rng, chart)
        delta = classical_bracket(H, K, chart) + classical_bracket(K, H, chart)
        if not delta.is_zero:
            antisym.append(delta.to_string(names))
        delta = (classical_bracket(H, K * L, chart)
                 - classical_bracket(H, K, chart) * L
                 - K * classical_bracket(H, L, chart))
        if not delta.is_zero:
            leibniz.append(delta.to_string(names))
        report = jacobi_check(H, K, L, chart)
        if not report.passed:
            jacobi.append(report.residual_text)
    return [
        _aggregate("classical.antisymmetry", antisym, trials),
        _aggregate("classical.leibniz", leibniz, trials),
        _aggregate("classical.jacobi", jacobi, trials),
    ]


# -- Nambu relations ------------------------------------------------------------


def nambu_rk1_checks(space: NambuSpaceRk1,
                     polarized: Mapping[str, PolarizedForm],
                     seed: int, trials: int) -> list[CheckResult]:
    out = []
    k = space.k
    for name, pf in polarized.items():
        report = verify_relation_rk1(pf, space)
        out.append(_result(f"nambu.relation-rk1[{name}]", report.passed,
                           report.residual_text()))
        z_comp = nambu_field_rk1(pf.to_map(), space).component(
            space.coordinate_index(k + 1))
        expected = pf.f[0] ** k
        if k % 2:
            expected = -expected
        delta = z_comp - expected
        out.append(_result(f"nambu.z-component[{name}]", delta.is_zero,
                           delta.to_string(space.chart.var_names)))
    rng = random.Random(seed)
    failures: list[str] = []
    for _ in range(trials):
        pf = random_polarized(rng, space.chart)
        report = verify_relation_rk1(pf, space)
        if not report.passed:
            failures.append(report.residual_text())
    out.append(_aggregate("nambu.random-relation-rk1", failures, trials))
    return out


def nambu_r3n_checks(space: NambuSpaceR3n, named: Mapping[str, RkMap],
                     polarized: Mapping[str, PolarizedForm],
                     seed: int, trials: int) -> list[CheckResult]:
    out = []
    chart = space.chart
    for name, H in named.items():
        conserved = True
        witness = "0"
        for comp in H.comps:
            value = nambu_bracket_r3n(comp, H[0], H[1], space)
            if not value.is_zero:
                conserved = False
                witness = value.to_string(chart.var_names)
                break
        out.append(_result(f"nambu.first-integrals[{name}]", conserved, witness))
    for name, pf in polarized.items():
        report = verify_relation_r3n(pf, space)
        out.append(_result(f"nambu.relation-r3n[{name}]", report.passed,
                           report.residual_text()))
        H = pf.to_map()
        field = nambu_field_r3n(H[0], H[1], space)
        delta_text = "0"
        ok = True
        for i in range(1, space.n + 1):
            zi = space.triple_indices(i)[2]
            delta = field.component(zi) - pf.f[i - 1] * pf.f[i - 1]
            if not delta.is_zero:
                ok = False
                delta_text = delta.to_string(chart.var_names)
                break
        out.append(_result(f"nambu.z-rate[{name}]", ok, delta_text))
    if space.n == 1:
        twin = NambuSpaceRk1(2)
        failures: list[str] = []
        for name, H in named.items():
            ours = nambu_field_r3n(H[0], H[1], space)
            theirs = nambu_field_rk1(RkMap(twin.chart, H.comps), twin)
            for idx in range(chart.dim):
                if ours.component(idx) != theirs.component(idx):
                    failures.append(name)
                    break
        out.append(_result("nambu.rk1-r3n-consistency", not failures,
                           "0" if not failures else failures[0],
                           f"maps={len(named)}"))
    rng = random.Random(seed)
    failures = []
    for _ in range(trials):
        pf = random_polarized(rng, chart)
        report = verify_relation_r3n(pf, space)
        if not report.passed:
            failures.append(report.residual_text())
    out.append(_aggregate("nambu.random-relation-r3n", failures, trials))
    return out


# -- suite ---------------------------------------------------------------------


def run_suite(chart: Chart, named_maps: Mapping[str, RkMap], *,
              tensor: GeneralPoissonTensor | None = None,
              space: NambuSpaceRk1 | NambuSpaceR3n | None = None,
              seed: int = DEFAULT_SEED, trials: int = 100) -> list[CheckResult]:
    """The full invariant suite for one problem, in deterministic order."""
    if tensor is None:
        tensor = canonical_poisson_tensor(chart)
    results = structure_checks(KSymplecticStructure.canonical(chart))
    polarized: dict[str, PolarizedForm] = {}
    for name in sorted(named_maps):
        map_results, pf = map_checks(name, named_maps[name], tensor)
        results.extend(map_results)
        if pf is not None:
            polarized[name] = pf
    names = sorted(polarized)
    for a, b in combinations(names, 2):
        label = f"{a},{b}"
        results.append(routes_check(label, polarized[a], polarized[b], tensor))
        results.append(closure_check(label, polarized[a], polarized[b]))
        results.append(morphism_check(label, polarized[a], polarized[b]))
        results.append(pairing_bracket_check(label, polarized[a], polarized[b]))
    for a, b, c in combinations(names, 3):
        results.append(jacobi_result(f"{a},{b},{c}", polarized[a],
                                     polarized[b], polarized[c]))
    if named_maps:
        results.extend(random_corpus_checks(chart, tensor, seed, trials))
        if chart.k == 1:
            results.extend(classical_checks(chart, seed, trials))
    if isinstance(space, NambuSpaceRk1):
        results.extend(nambu_rk1_checks(space, polarized, seed, trials))
    elif isinstance(space, NambuSpaceR3n):
        results.extend(nambu_r3n_checks(space, named_maps, polarized,
                                        seed, trials))
    return results
