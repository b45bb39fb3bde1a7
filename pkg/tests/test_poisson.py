from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repspace.poisson import (
    REFERENCE_CONE_TABLE,
    ClosureError,
    PhaseSpace,
    canonical_bracket,
    closure_to_lie_algebra,
    generic_configuration,
    in_sp4,
    kempf_ness_check,
    linear_action,
    matrix_square,
    planar_invariants,
    planar_zero_locus_sample,
    proportionality_constant,
    sp4_moment,
    spatial_invariants,
    table_in_generators,
    unitary_moment,
    zero_momentum_configuration,
)
from repspace.poly import RationalPolynomial

PLANE = PhaseSpace(1, 2)
SMALL = PhaseSpace(1, 1)
q, p = SMALL.q(1, 1), SMALL.p(1, 1)

cubic_coeffs = st.lists(st.integers(-3, 3), min_size=4, max_size=4)


def cubic(c):
    return c[0] * q**3 + c[1] * q * q * p + c[2] * p**3 + c[3] * q * p


def jacobiator(f, g, h):
    return (
        canonical_bracket(f, canonical_bracket(g, h))
        + canonical_bracket(g, canonical_bracket(h, f))
        + canonical_bracket(h, canonical_bracket(f, g))
    )


def test_bracket_sign_convention():
    assert canonical_bracket(q, p) == RationalPolynomial.constant(SMALL.variables, -1)
    assert canonical_bracket(p, q) == RationalPolynomial.constant(SMALL.variables, 1)
    f = q * q * p
    assert canonical_bracket(f, f).is_zero()


@settings(max_examples=30, deadline=None)
@given(cubic_coeffs, cubic_coeffs, cubic_coeffs)
def test_jacobi_on_cubics(a, b, c):
    assert jacobiator(cubic(a), cubic(b), cubic(c)).is_zero()


def test_jacobi_on_random_cubics_in_four_variables():
    rng = np.random.default_rng(0)
    vs = [PLANE.q(1, 1), PLANE.q(1, 2), PLANE.p(1, 1), PLANE.p(1, 2)]

    def rand_cubic():
        out = RationalPolynomial.zero(PLANE.variables)
        for _ in range(4):
            i, j, k = rng.integers(0, 4, size=3)
            out = out + int(rng.integers(-3, 4)) * vs[i] * vs[j] * vs[k]
        return out

    for _ in range(5):
        assert jacobiator(rand_cubic(), rand_cubic(), rand_cubic()).is_zero()


def test_planar_invariants_commute_with_momentum():
    inv = planar_invariants()
    mu = inv.generators["mu"]
    for name in ("x1", "x2", "rho"):
        assert canonical_bracket(inv.generators[name], mu).is_zero()
    assert inv.commutes_with_momentum()


def test_lagrange_identity():
    g = planar_invariants().generators
    assert g["rho"] ** 2 - g["x1"] ** 2 - g["x2"] ** 2 == 4 * g["mu"] ** 2


def test_planar_table_and_constant():
    structure = closure_to_lie_algebra(planar_invariants())
    table = table_in_generators(structure)
    x1, x2, rho = RationalPolynomial.gens(structure.names)
    assert table[("x1", "x2")] == -4 * rho
    assert table[("x1", "rho")] == -4 * x2
    assert table[("x2", "rho")] == 4 * x1
    assert proportionality_constant(table) == Fraction(-1, 2)
    assert structure.killing_signature() == (2, 1, 0)


def test_constant_detects_a_wrong_shape():
    structure = closure_to_lie_algebra(planar_invariants())
    table = table_in_generators(structure)
    flipped = dict(REFERENCE_CONE_TABLE)
    flipped[("x2", "rho")] = (Fraction(2), "x1")
    assert proportionality_constant(table, flipped) is None


def test_spatial_invariants():
    inv = spatial_invariants(2)
    g = inv.generators
    assert len(g) == 10
    assert inv.commutes_with_momentum()
    assert canonical_bracket(g["q1.q1"], inv.momentum[2]).is_zero()
    assert canonical_bracket(g["q1.q1"], g["p1.p1"]) == -4 * g["q1.p1"]


def test_spatial_algebra_is_split_symplectic():
    structure = closure_to_lie_algebra(spatial_invariants(2))
    assert structure.dim == 10
    assert structure.antisymmetric()
    assert structure.jacobi_defect() == 0
    assert structure.killing_signature() == (6, 4, 0)


def test_spatial_jacobi_on_ambient_polynomials():
    g = spatial_invariants(2).generators
    names = list(g)
    for a, b, c in list(combinations(names, 3))[::7]:
        assert jacobiator(g[a], g[b], g[c]).is_zero()


def test_closure_failure_names_the_pair():
    s = PhaseSpace(1, 2)
    gens = {"a": s.q(1, 1) * s.q(1, 1), "b": s.p(1, 1) * s.p(1, 1)}
    with pytest.raises(ClosureError) as err:
        closure_to_lie_algebra(gens)
    assert err.value.pair == ("a", "b")


def test_unitary_moment_of_rotation_generator():
    assert unitary_moment([[0, 0], [0, 0]]).is_zero()
    mu = planar_invariants().generators["mu"]
    assert unitary_moment([[0, -1], [1, 0]]) == mu


def test_unitary_moment_rejects_non_skew():
    with pytest.raises(ValueError):
        unitary_moment([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        unitary_moment([[0, 1], [1, 0]])


@pytest.mark.parametrize(
    "xi",
    [
        [[(0, 1), (2, 3)], [(-2, 3), (0, -1)]],
        [[(0, 2), 0], [0, (0, -5)]],
        [[(0, 0), (1, 1)], [(-1, 1), (0, 0)]],
    ],
)
def test_unitary_moment_generates_the_action(xi):
    for f in (PLANE.q(1, 1), PLANE.q(1, 2), PLANE.p(1, 1), PLANE.p(1, 2) - 3 * PLANE.q(1, 1)):
        assert canonical_bracket(unitary_moment(xi), f) == linear_action(xi, f, PLANE)


def test_sp4_moment_on_zero_locus_and_generic_points():
    assert sp4_moment([0] * 12) == [[0] * 4 for _ in range(4)]
    rng = np.random.default_rng(1)
    for _ in range(30):
        config = zero_momentum_configuration(rng, 2)
        m = sp4_moment([x for v in config for x in v])
        assert in_sp4(m)
        assert all(x == 0 for row in matrix_square(m) for x in row)
        rows = [[float(x) for x in row] for row in m]
        assert np.linalg.matrix_rank(rows) <= 2
    for _ in range(30):
        config = generic_configuration(rng, 2)
        m = sp4_moment([x for v in config for x in v])
        assert in_sp4(m)
        assert any(x != 0 for row in matrix_square(m) for x in row)


def test_sp4_moment_collinear_configuration():
    v = [Fraction(1), Fraction(2), Fraction(-1)]
    config = [c * x for c in (1, 3, -2, 5) for x in v]
    m = sp4_moment(config)
    assert all(x == 0 for row in matrix_square(m) for x in row)


def test_zero_momentum_sampler_is_exact():
    rng = np.random.default_rng(2)
    for n in (2, 3):
        config = zero_momentum_configuration(rng, n)
        total = [Fraction(0)] * 3
        for qi, pi in zip(config[:n], config[n:]):
            total[0] += qi[1] * pi[2] - qi[2] * pi[1]
            total[1] += qi[2] * pi[0] - qi[0] * pi[2]
            total[2] += qi[0] * pi[1] - qi[1] * pi[0]
        assert total == [0, 0, 0]


def test_rotation_preserves_planar_invariants():
    g = planar_invariants().generators
    rng = np.random.default_rng(3)
    for _ in range(20):
        qv, pv = planar_zero_locus_sample(rng)
        t = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 9)))
        c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        rq = [c * qv[0] - s * qv[1], s * qv[0] + c * qv[1]]
        rp = [c * pv[0] - s * pv[1], s * pv[0] + c * pv[1]]
        before = PLANE.point({"q1": qv, "p1": pv})
        after = PLANE.point({"q1": rq, "p1": rp})
        for name in ("x1", "x2", "rho", "mu"):
            assert g[name].evaluate(before) == g[name].evaluate(after)


def test_cone_identity_on_many_zero_locus_points():
    g = planar_invariants().generators
    rng = np.random.default_rng(4)
    for _ in range(1000):
        qv, pv = planar_zero_locus_sample(rng)
        pt = PLANE.point({"q1": qv, "p1": pv})
        x1, x2, rho = (g[k].evaluate(pt) for k in ("x1", "x2", "rho"))
        assert rho * rho == x1 * x1 + x2 * x2


def test_kempf_ness_witness():
    report = kempf_ness_check(samples=100, seed=5)
    assert report.passed(1e-9)
    assert report.max_rotation_error <= 1e-9
