"""The acceptance suite as a registry of named checks, and its deterministic manifest.

Each check returns a pass flag and a small detail record.  Timings are enforced
against a budget but never written to the manifest, so two runs on the same
machine produce the same bytes.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from repspace import poisson, strata
from repspace.cohomology import compute_cohomology, lambda_analysis
from repspace.poisson import (
    canonical_bracket,
    closure_to_lie_algebra,
    generic_configuration,
    in_sp4,
    kempf_ness_check,
    matrix_square,
    planar_invariants,
    planar_zero_locus_sample,
    proportionality_constant,
    sp4_moment,
    spatial_invariants,
    table_in_generators,
    zero_momentum_configuration,
)
from repspace.poly import RationalPolynomial
from repspace.serialize import canonical_json
from repspace.words import (
    StratumLabel,
    enumerate_central,
    orbit_type,
    solve_flat,
    torus_representation,
)

# constant c with (reference cone table) = c * (table under our bracket convention)
EXPECTED_CONE_CONSTANT = Fraction(-1, 2)
GAP_MIN = 1e3
SOLVER_SEEDS = range(10)
RANDOM_REPS_PER_STRATUM = 20


@dataclass(frozen=True)
class Criterion:
    number: int
    key: str
    tags: tuple[str, ...]
    budget: float
    run: Callable[[], tuple[bool, dict]]

    def matches(self, selector: str) -> bool:
        return selector in (self.key, str(self.number)) or selector in self.tags


@dataclass(frozen=True)
class Outcome:
    criterion: Criterion
    passed: bool
    detail: dict
    elapsed: float

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.criterion.number:2d} {self.criterion.key}"

    def to_dict(self) -> dict:
        return {
            "number": self.criterion.number,
            "key": self.criterion.key,
            "passed": self.passed,
            "budget_seconds": self.criterion.budget,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# individual criteria


def check_bracket_table() -> tuple[bool, dict]:
    structure = closure_to_lie_algebra(planar_invariants())
    table = table_in_generators(structure)
    ring = structure.names
    x1, x2, rho = (RationalPolynomial.variable(ring, v) for v in ("x1", "x2", "rho"))
    expected = {("x1", "x2"): -4 * rho, ("x1", "rho"): -4 * x2, ("x2", "rho"): 4 * x1}
    exact_table = all(table[k] == v for k, v in expected.items())
    constant = proportionality_constant(table, poisson.REFERENCE_CONE_TABLE)
    ok = exact_table and constant is not None and constant == EXPECTED_CONE_CONSTANT
    return ok, {
        "table": {f"{a},{b}": str(v) for (a, b), v in table.items()},
        "constant": None if constant is None else str(constant),
        "expected_constant": str(EXPECTED_CONE_CONSTANT),
    }


def check_cone_relation(samples: int = 200, seed: int = 0) -> tuple[bool, dict]:
    inv = planar_invariants()
    g = inv.generators
    identity = g["rho"] ** 2 - g["x1"] ** 2 - g["x2"] ** 2 == 4 * g["mu"] ** 2
    rng = np.random.default_rng(seed)
    on_locus = True
    for _ in range(samples):
        q, p = planar_zero_locus_sample(rng)
        pt = inv.space.point({"q1": q, "p1": p})
        x1, x2, rho, mu = (g[k].evaluate(pt) for k in ("x1", "x2", "rho", "mu"))
        on_locus = on_locus and mu == 0 and x1 * x1 + x2 * x2 == rho * rho
    return identity and on_locus, {"identity": identity, "zero_locus_samples": samples, "on_locus": on_locus}


def _jacobi_and_antisymmetry(gens: dict[str, RationalPolynomial]) -> tuple[int, int, int, int]:
    names = list(gens)
    brackets = {}
    anti_fail = 0
    for a in names:
        for b in names:
            brackets[(a, b)] = canonical_bracket(gens[a], gens[b])
    for a, b in combinations(names, 2):
        if brackets[(a, b)] != -brackets[(b, a)]:
            anti_fail += 1
    anti_fail += sum(1 for a in names if not brackets[(a, a)].is_zero())
    jac_fail = 0
    triples = 0
    for a, b, c in combinations(names, 3):
        triples += 1
        j = (
            canonical_bracket(gens[a], brackets[(b, c)])
            + canonical_bracket(gens[b], brackets[(c, a)])
            + canonical_bracket(gens[c], brackets[(a, b)])
        )
        if not j.is_zero():
            jac_fail += 1
    return len(names), triples, anti_fail, jac_fail


def check_jacobi() -> tuple[bool, dict]:
    detail = {}
    ok = True
    for label, inv in (("planar", planar_invariants()), ("spatial", spatial_invariants(2))):
        n, triples, anti, jac = _jacobi_and_antisymmetry(inv.generators)
        detail[label] = {"generators": n, "triples": triples, "antisymmetry_failures": anti, "jacobi_failures": jac}
        ok = ok and anti == 0 and jac == 0
    ok = ok and detail["planar"]["generators"] == 4 and detail["spatial"]["generators"] == 10
    return ok, detail


def _dims(rep) -> tuple[tuple[int, int, int], float]:
    data = compute_cohomology(rep)
    return (data.h0_dim, data.h1_dim, data.h2_dim), data.min_gap


def _witness(genus: int, stratum: StratumLabel, seed: int):
    return solve_flat(genus, stratum, seed=seed)


def check_cohomology() -> tuple[bool, dict]:
    ok = True
    detail: dict = {"genus_2": {}, "higher": {}}
    expected2 = {StratumLabel.Z: (0, 6, 0), StratumLabel.T: (1, 8, 1), StratumLabel.G: (3, 12, 3)}
    worst_gap = float("inf")
    for stratum, dims in expected2.items():
        got, gap = _dims(_witness(2, stratum, 42))
        worst_gap = min(worst_gap, gap)
        detail["genus_2"][stratum.value] = list(got)
        ok = ok and got == dims
    for genus in (3, 4):
        expected_h1 = {StratumLabel.Z: 6 * genus - 6, StratumLabel.T: 6 * genus - 4, StratumLabel.G: 6 * genus}
        row = {}
        for stratum, h1 in expected_h1.items():
            h1_ok = euler_ok = True
            for seed in range(RANDOM_REPS_PER_STRATUM):
                (h0, got_h1, h2), gap = _dims(_witness(genus, stratum, seed))
                worst_gap = min(worst_gap, gap)
                h1_ok = h1_ok and got_h1 == h1
                euler_ok = euler_ok and h0 - got_h1 + h2 == 3 * (2 - 2 * genus)
            row[stratum.value] = {"h1": h1, "h1_ok": h1_ok, "euler_ok": euler_ok}
            ok = ok and h1_ok and euler_ok
        detail["higher"][str(genus)] = row
    ok = ok and worst_gap >= GAP_MIN
    detail["gap_at_least"] = GAP_MIN
    detail["gap_ok"] = worst_gap >= GAP_MIN
    return ok, detail


def check_central() -> tuple[bool, dict]:
    counts = {}
    ok = True
    for genus in (1, 2, 3, 4):
        reps = enumerate_central(genus)
        counts[str(genus)] = len(reps)
        exact_zero = all(r.residual == 0.0 for r in reps)
        distinct = len({tuple(g.w for g in r.images) for r in reps}) == len(reps)
        ok = ok and len(reps) == 2 ** (2 * genus) and exact_zero and distinct
    return ok, {"counts": counts}


def check_solver() -> tuple[bool, dict]:
    ok = True
    detail = {}
    for genus in (2, 3):
        fine = 0
        for seed in SOLVER_SEEDS:
            rep = solve_flat(genus, StratumLabel.Z, seed=seed)
            if rep.residual <= 1e-10 and orbit_type(rep) == StratumLabel.Z:
                fine += 1
        detail[f"genus_{genus}_irreducible_solved"] = fine
        ok = ok and fine == len(SOLVER_SEEDS)
    torus = torus_representation([0.3, 1.1, -0.7, 2.0])
    central = enumerate_central(2)[5]
    detail["torus_class"] = orbit_type(torus).value
    detail["central_class"] = orbit_type(central).value
    ok = ok and orbit_type(torus) == StratumLabel.T and orbit_type(central) == StratumLabel.G
    return ok, detail


def check_lambda() -> tuple[bool, dict]:
    expected = {
        StratumLabel.Z: (0, 6, True),
        StratumLabel.T: (4, 4, False),
        StratumLabel.G: (12, 0, False),
    }
    ok = True
    detail = {}
    for stratum, want in expected.items():
        la = lambda_analysis(_witness(2, stratum, 42))
        got = (la.kernel_dim, la.image_dim, la.is_isomorphism)
        detail[stratum.value] = {"kernel": got[0], "image": got[1], "isomorphism": got[2]}
        ok = ok and got == want
    return ok, detail


def check_poisson_rank(samples: int = 100, seed: int = 0) -> tuple[bool, dict]:
    cone = strata.cone_model()
    origin_rank = strata.poisson_rank_at(cone, [0, 0, 0])
    rng = np.random.default_rng(seed)
    top = []
    for _ in range(samples):
        pt = strata.cone_point(rng.uniform(0, 2 * np.pi), rng.uniform(0.1, 10.0))
        top.append(strata.poisson_rank_at(cone, pt))
    spatial = strata.local_model(2, StratumLabel.G)
    spatial_rank = strata.poisson_rank_at(spatial.model, spatial.base_point)
    ok = origin_rank == 0 and all(r == 2 for r in top) and spatial_rank == 0
    return ok, {
        "cone_origin": origin_rank,
        "cone_top_samples": samples,
        "cone_top_all_rank_2": all(r == 2 for r in top),
        "spatial_origin": spatial_rank,
    }


def check_tangent(samples: int = 100, seed: int = 0) -> tuple[bool, dict]:
    cone = strata.cone_model()
    at_origin = strata.zariski_tangent_dim(cone, [0, 0, 0])
    rng = np.random.default_rng(seed)
    off = {
        strata.zariski_tangent_dim(cone, strata.cone_point(rng.uniform(0, 2 * np.pi), rng.uniform(0.1, 10.0)))
        for _ in range(samples)
    }
    off.add(strata.zariski_tangent_dim(cone, [1, 0, 1]))
    t_spec = strata.local_model(2, StratumLabel.T)
    g_spec = strata.local_model(2, StratumLabel.G)
    t_dim = strata.zariski_tangent_dim(t_spec.model, t_spec.base_point)
    g_dim = strata.zariski_tangent_dim(g_spec.model, g_spec.base_point)
    ok = at_origin == 3 and off == {2} and t_dim == 7 and g_dim == 10
    return ok, {"cone_origin": at_origin, "cone_off_origin": sorted(off), "T_base": t_dim, "G_base": g_dim}


def check_sp4(samples: int = 200, seed: int = 0) -> tuple[bool, dict]:
    structure = closure_to_lie_algebra(spatial_invariants(2))
    jacobi = structure.jacobi_defect() == 0 and structure.antisymmetric()
    signature = structure.killing_signature()
    rng = np.random.default_rng(seed)
    nilpotent = symplectic = True
    for _ in range(samples):
        config = zero_momentum_configuration(rng, 2)
        m = sp4_moment([x for v in config for x in v])
        symplectic = symplectic and in_sp4(m)
        nilpotent = nilpotent and all(x == 0 for row in matrix_square(m) for x in row)
    generic_nonzero = True
    for _ in range(samples):
        config = generic_configuration(rng, 2)
        m = sp4_moment([x for v in config for x in v])
        symplectic = symplectic and in_sp4(m)
        generic_nonzero = generic_nonzero and any(x != 0 for row in matrix_square(m) for x in row)
    ok = (
        structure.dim == 10
        and jacobi
        and signature[:2] == (6, 4)
        and symplectic
        and nilpotent
        and generic_nonzero
    )
    return ok, {
        "dimension": structure.dim,
        "jacobi": jacobi,
        "killing_signature": list(signature),
        "symplectic": symplectic,
        "zero_locus_square_zero": nilpotent,
        "generic_square_nonzero": generic_nonzero,
        "samples": samples,
    }


def check_kempf_ness() -> tuple[bool, dict]:
    report = kempf_ness_check(samples=100, seed=0)
    return report.passed(1e-9), {
        "pairs": report.pairs,
        "rotation_error_ok": report.max_rotation_error <= 1e-9,
        "cone_identity_exact": report.cone_identity_exact,
        "invariants_match": report.invariants_match,
    }


def _cli_outputs() -> list[str]:
    # the outward-facing documents, built from fixed seeds
    from repspace.cli import bracket_table_document, cohomology_document, report_rows

    out = []
    for stratum in StratumLabel:
        rep = solve_flat(2, stratum, seed=42)
        out.append(canonical_json(rep.to_dict()))
        out.append(canonical_json(cohomology_document(rep)))
    for model in ("cone", "planar", "spatial"):
        out.append(canonical_json(bracket_table_document(model)))
    out.append(canonical_json(report_rows([2], seed=0)))
    return out


def check_determinism() -> tuple[bool, dict]:
    first, second = _cli_outputs(), _cli_outputs()
    same = first == second
    return same, {"documents": len(first), "identical": same}


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "bracket-table", ("brackets", "poisson", "exact"), 1.0, check_bracket_table),
    Criterion(2, "cone-relation", ("cone", "poisson", "exact"), 1.0, check_cone_relation),
    Criterion(3, "jacobi", ("brackets", "poisson", "exact"), 10.0, check_jacobi),
    Criterion(4, "cohomology-dimensions", ("cohomology",), 30.0, check_cohomology),
    Criterion(5, "central-points", ("words",), 5.0, check_central),
    Criterion(6, "solver", ("words", "solver"), 60.0, check_solver),
    Criterion(7, "lambda", ("cohomology", "lambda"), 5.0, check_lambda),
    Criterion(8, "poisson-rank", ("strata", "rank"), 10.0, check_poisson_rank),
    Criterion(9, "tangent-dimensions", ("strata", "tangent"), 10.0, check_tangent),
    Criterion(10, "sp4-structure", ("poisson", "sp4"), 30.0, check_sp4),
    Criterion(11, "kempf-ness", ("poisson", "kempf-ness"), 5.0, check_kempf_ness),
    Criterion(12, "determinism", ("cli", "determinism"), 30.0, check_determinism),
)


def select(only: Iterable[str] | None = None) -> list[Criterion]:
    if not only:
        return list(CRITERIA)
    only = list(only)
    chosen = [c for c in CRITERIA if any(c.matches(s) for s in only)]
    if not chosen:
        raise ValueError(f"no criterion matches {only}")
    return chosen


def run_criterion(criterion: Criterion) -> Outcome:
    start = time.perf_counter()
    try:
        passed, detail = criterion.run()
    except Exception as exc:  # a crash is a failure, reported in the manifest
        passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    elapsed = time.perf_counter() - start
    if elapsed > criterion.budget:
        passed = False
        detail = dict(detail, over_budget=True)
    return Outcome(criterion, bool(passed), detail, elapsed)


def run(only: Iterable[str] | None = None) -> list[Outcome]:
    return [run_criterion(c) for c in select(only)]


def manifest(outcomes: list[Outcome]) -> dict:
    return {
        "criteria": [o.to_dict() for o in outcomes],
        "passed": all(o.passed for o in outcomes),
        "total": len(outcomes),
        "failed": [o.criterion.key for o in outcomes if not o.passed],
    }
