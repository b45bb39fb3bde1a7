import math
from itertools import combinations

import numpy as np
import pytest

from repspace.poisson import canonical_bracket
from repspace.strata import (
    InfeasiblePoint,
    REPORT_COLUMNS,
    cone_model,
    cone_point,
    darboux_model,
    determinant,
    linear_span_dim,
    local_model,
    planar_reduced_model,
    poisson_rank_at,
    product,
    report_csv,
    semialgebraic_member,
    spatial_reduced_model,
    stratum_report,
    zariski_tangent_dim,
)
from repspace.poly import RationalPolynomial
from repspace.words import StratumLabel


@pytest.fixture(scope="module")
def cone():
    return cone_model()


def test_cone_at_apex_and_away(cone):
    apex = [0, 0, 0]
    assert poisson_rank_at(cone, apex) == 0
    assert zariski_tangent_dim(cone, apex) == 3
    assert poisson_rank_at(cone, [3, 4, 5]) == 2
    assert zariski_tangent_dim(cone, [3, 4, 5]) == 2


@pytest.mark.parametrize(
    "point, member",
    [((0, 0, 0), True), ((1, 0, 1), True), ((1, 0, -1), False), ((1, 1, 1), False)],
)
def test_cone_membership(cone, point, member):
    assert semialgebraic_member(cone, point) is member


def test_infeasible_points_raise(cone):
    with pytest.raises(InfeasiblePoint):
        poisson_rank_at(cone, [1, 0, -1])
    with pytest.raises(InfeasiblePoint):
        zariski_tangent_dim(cone, [1, 1, 1])
    with pytest.raises(ValueError):
        zariski_tangent_dim(cone, [1, 1])


def test_float_cone_points():
    cone = cone_model()
    rng = np.random.default_rng(0)
    for _ in range(100):
        pt = cone_point(rng.uniform(0, 2 * math.pi), rng.uniform(0.1, 10.0))
        assert poisson_rank_at(cone, pt) == 2
        assert zariski_tangent_dim(cone, pt) == 2


def test_sampled_cone_points_are_exact_members(cone):
    rng = np.random.default_rng(1)
    for _ in range(50):
        pt = cone.sample(rng)
        assert cone.is_member(pt, tol=0.0)


def test_darboux_and_product():
    d = darboux_model(2)
    assert d.names == ("q1", "q2", "p1", "p2")
    assert poisson_rank_at(d, [0] * 4) == 4
    both = product(darboux_model(1, "a"), cone_model())
    assert both.size == 5
    assert poisson_rank_at(both, [0, 0, 0, 0, 0]) == 2
    assert zariski_tangent_dim(both, [0, 0, 0, 0, 0]) == 5
    with pytest.raises(ValueError):
        product(darboux_model(1), darboux_model(1))


def test_determinant_small_cases():
    x, y = RationalPolynomial.gens(("x", "y"))
    assert determinant([[x, y], [y, x]]) == x * x - y * y
    one = RationalPolynomial.constant(("x", "y"), 1)
    zero = RationalPolynomial.zero(("x", "y"))
    assert determinant([[one, zero, zero], [zero, x, zero], [zero, zero, y]]) == x * y


@pytest.mark.parametrize(
    "genus, stratum, size, tangent, rank, h1",
    [
        (2, "Z", 6, 6, 6, 6),
        (2, "T", 7, 7, 4, 8),
        (2, "G", 10, 10, 0, 12),
        (3, "Z", 12, 12, 12, 12),
        (3, "T", 22, 21, 6, 14),
        (3, "G", 41, 35, 0, 18),
    ],
)
def test_local_models(genus, stratum, size, tangent, rank, h1):
    spec = local_model(genus, stratum)
    assert spec.stratum == StratumLabel(stratum)
    assert spec.h1_dim == h1
    assert spec.top_dimension == 6 * genus - 6
    assert spec.model.size == size
    assert zariski_tangent_dim(spec.model, spec.base_point) == tangent
    assert poisson_rank_at(spec.model, spec.base_point) == rank


def test_local_model_needs_genus_two():
    with pytest.raises(ValueError):
        local_model(1, "T")


@pytest.mark.slow
def test_genus_four_spatial_model():
    spec = local_model(4, "G")
    assert spec.model.size == 92
    assert zariski_tangent_dim(spec.model, spec.base_point) == 84
    assert poisson_rank_at(spec.model, spec.base_point) == 0


def test_tangent_dim_is_invariant_under_reordering():
    rng = np.random.default_rng(2)
    for genus, stratum in ((2, "T"), (3, "T"), (2, "G")):
        model = local_model(genus, stratum).model
        order = list(model.names)
        rng.shuffle(order)
        shuffled = model.permuted(order)
        base = [0] * model.size
        assert zariski_tangent_dim(shuffled, base) == zariski_tangent_dim(model, base)
        assert poisson_rank_at(shuffled, base) == poisson_rank_at(model, base)


@pytest.mark.parametrize("model", [planar_reduced_model(2), spatial_reduced_model(2), spatial_reduced_model(3)])
def test_engine_brackets_match_ambient_brackets(model):
    hilbert = model.hilbert
    for a, b in list(combinations(model.names, 2))[::3]:
        engine = model.bracket_of(a, b).substitute(hilbert)
        assert engine == canonical_bracket(hilbert[a], hilbert[b]), (a, b)


@pytest.mark.parametrize("genus, stratum", [(2, "T"), (2, "G"), (3, "T"), (3, "G")])
def test_relations_hold_on_sampled_points(genus, stratum):
    model = local_model(genus, stratum).model
    rng = np.random.default_rng(3)
    for _ in range(5):
        assert model.is_member(model.sample(rng), tol=0.0)


def test_jacobi_modulo_relations_at_sampled_points():
    model = local_model(3, "T").model
    rng = np.random.default_rng(4)
    points = [model.sample(rng) for _ in range(3)]
    names = [n for n in model.names if not n.startswith("t")]
    for a, b, c in list(combinations(names, 3))[::25]:
        jac = model.jacobiator(a, b, c)
        for pt in points:
            assert jac.evaluate(pt) == 0


@pytest.mark.parametrize("genus, stratum", [(2, "T"), (2, "G"), (3, "T"), (3, "G")])
def test_sampled_span_certifies_the_tangent_dimension(genus, stratum):
    spec = local_model(genus, stratum)
    expected = zariski_tangent_dim(spec.model, spec.base_point)
    assert linear_span_dim(spec.model, samples=expected + 20) == expected


def test_rank_increases_off_the_base_point():
    model = local_model(2, "T").model
    rng = np.random.default_rng(5)
    pt = model.sample(rng)
    assert poisson_rank_at(model, pt) == 6


def test_stratum_report_rows():
    rows = stratum_report(2, seed=0)
    assert [r["stratum"] for r in rows] == ["Z", "T", "G"]
    assert [r["h1"] for r in rows] == [6, 8, 12]
    assert [r["poisson_rank"] for r in rows] == [6, 4, 0]
    assert [r["tangent_dim"] for r in rows] == [6, 7, 10]
    for row in rows:
        assert row["h1"] == local_model(2, row["stratum"]).h1_dim
    text = report_csv(rows)
    assert text.splitlines()[0] == ",".join(REPORT_COLUMNS)
    assert text.splitlines()[2] == "2,T,1,8,1,4,4,4,7"
    with pytest.raises(ValueError):
        stratum_report(5)
