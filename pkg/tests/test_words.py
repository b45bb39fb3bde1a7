import json

import numpy as np
import pytest

from repspace.lie import GroupElement, qexp, qmul, qnormalize, rotation_matrix
from repspace.words import (
    Representation,
    SolverError,
    StratumLabel,
    conjugate,
    enumerate_central,
    evaluate_relator,
    evaluate_word,
    fox_derivative,
    orbit_type,
    presentation,
    reduce_word,
    relator_derivative,
    solve_flat,
    torus_representation,
)


def random_rep(rng, genus):
    return Representation.from_array(rng.normal(size=(2 * genus, 4)))


def finite_difference_derivative(rep, h=1e-6):
    """Central differences of log(r(exp(t u_i) A_i)) at t = 0, right-trivialized."""
    phi = rep.as_array()
    pres = rep.presentation
    r0 = evaluate_word(phi, pres.relator)
    r0_inv = np.array([r0[0], -r0[1], -r0[2], -r0[3]])
    cols = []
    for i in range(len(phi)):
        for a in range(3):
            step = np.zeros(3)
            step[a] = h
            vals = []
            for sgn in (1, -1):
                moved = phi.copy()
                moved[i] = qnormalize(qmul(qexp(sgn * step), phi[i]))
                # right-trivialized: r(moved) r0^-1 = exp(t dr(u) + ...)
                vals.append(qmul(evaluate_word(moved, pres.relator), r0_inv)[1:])
            cols.append((vals[0] - vals[1]) / (2 * h))
    return np.array(cols).T


def test_word_reduction_and_relator():
    assert reduce_word((1, 2, -2, -1, 3)) == (3,)
    assert presentation(1).relator == (1, 2, -1, -2)
    assert presentation(3).relator == (1, 2, -1, -2, 3, 4, -3, -4, 5, 6, -5, -6)
    assert len(presentation(4).relator) == 16


def test_fox_derivative_of_commutator():
    # d[x,y]/dx = 1 - x y x^-1, d[x,y]/dy = x - x y x^-1 y^-1
    assert fox_derivative((1, 2, -1, -2), 1) == {(): 1, (1, 2, -1): -1}
    assert fox_derivative((1, 2, -1, -2), 2) == {(1,): 1, (1, 2, -1, -2): -1}


def test_relator_at_trivial_and_commuting_images():
    assert evaluate_relator(enumerate_central(2)[0]) == GroupElement.identity()
    a = GroupElement.from_array(qexp(np.array([0.4, 0.0, 0.0])))
    b = GroupElement.from_array(qexp(np.array([-1.3, 0.0, 0.0])))
    assert evaluate_relator(Representation((a, b))).distance(GroupElement.identity()) < 1e-15


def test_relator_of_i_and_j():
    i = GroupElement(0.0, 1.0, 0.0, 0.0)
    j = GroupElement(0.0, 0.0, 1.0, 0.0)
    assert evaluate_relator(Representation((i, j))).as_array().tolist() == [-1.0, 0.0, 0.0, 0.0]


def test_relator_equivariance():
    rng = np.random.default_rng(0)
    for _ in range(50):
        rep = random_rep(rng, 2)
        g = GroupElement.from_array(rng.normal(size=4))
        lhs = evaluate_relator(conjugate(rep, g))
        rhs = g * evaluate_relator(rep) * g.inverse()
        assert lhs.distance(rhs) < 1e-10


@pytest.mark.parametrize("genus", [1, 2, 3])
def test_derivative_matches_finite_differences(genus):
    rng = np.random.default_rng(genus)
    for _ in range(5):
        rep = random_rep(rng, genus)
        analytic = relator_derivative(rep)
        numeric = finite_difference_derivative(rep)
        rel = np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic)
        assert rel < 1e-5


def test_derivative_is_zero_at_central_points():
    for rep in enumerate_central(2):
        assert not np.any(relator_derivative(rep))


def test_derivative_ranks_by_stratum():
    z = solve_flat(2, "Z", seed=42)
    t = torus_representation([0.3, 1.0, 2.2, -0.4])
    assert np.linalg.matrix_rank(relator_derivative(z), tol=1e-8) == 3
    assert np.linalg.matrix_rank(relator_derivative(t), tol=1e-8) == 2
    # torus: the image is the plane orthogonal to e3
    assert np.allclose(relator_derivative(t)[2], 0.0)
    assert np.allclose(finite_difference_derivative(t), relator_derivative(t), atol=1e-6)


def test_enumerate_central_counts():
    for genus, count in ((1, 4), (2, 16), (3, 64)):
        reps = enumerate_central(genus)
        assert len(reps) == count
        assert all(r.residual == 0.0 for r in reps)


def test_orbit_type_witnesses():
    minus = Representation(tuple(GroupElement(-1.0, 0.0, 0.0, 0.0) for _ in range(4)))
    assert orbit_type(minus) == StratumLabel.G
    assert orbit_type(torus_representation([0.0, np.pi, 0.5, 0.0])) == StratumLabel.T
    assert orbit_type(solve_flat(2, "Z", seed=1)) == StratumLabel.Z


def test_orbit_type_requires_flatness():
    with pytest.raises(ValueError):
        orbit_type(Representation((GroupElement(0.0, 1.0, 0.0, 0.0), GroupElement(0.0, 0.0, 1.0, 0.0))))


def test_conjugation_preserves_residual_and_class():
    rng = np.random.default_rng(3)
    for _ in range(100):
        rep = random_rep(rng, 2)
        g = GroupElement.from_array(rng.normal(size=4))
        assert abs(conjugate(rep, g).residual - rep.residual) < 1e-12
    g = GroupElement.from_array([0.3, -0.2, 0.9, 0.1])
    for stratum in StratumLabel:
        rep = solve_flat(2, stratum, seed=5)
        assert orbit_type(conjugate(rep, g)) == stratum
    assert conjugate(rep, GroupElement.identity()) == rep


@pytest.mark.parametrize("genus", [2, 3, 4])
def test_solver_finds_irreducibles(genus):
    rep = solve_flat(genus, StratumLabel.Z, seed=42)
    assert rep.residual <= 1e-10
    assert orbit_type(rep) == StratumLabel.Z


def test_solver_other_targets():
    g = solve_flat(3, "G", seed=9)
    assert g.residual == 0.0 and orbit_type(g) == StratumLabel.G
    t = solve_flat(2, "T", seed=9)
    assert t.residual < 1e-15 and orbit_type(t) == StratumLabel.T
    # torus images are rotations about e3
    for q in t.as_array():
        assert abs(q[1]) < 1e-15 and abs(q[2]) < 1e-15


def test_solver_preconditions_and_budget():
    with pytest.raises(ValueError):
        solve_flat(1, "Z")
    with pytest.raises(ValueError):
        solve_flat(1, "T")
    with pytest.raises(SolverError) as err:
        solve_flat(2, "Z", seed=0, budget=3, attempts=1)
    assert err.value.residual > 1e-10


def test_solver_is_deterministic():
    a = solve_flat(2, "Z", seed=7)
    b = solve_flat(2, "Z", seed=7)
    assert a == b


def test_json_round_trip():
    rep = solve_flat(2, "Z", seed=42)
    data = json.loads(rep.to_json())
    assert set(data) == {"genus", "images", "residual"}
    back = Representation.from_json(rep.to_json())
    assert np.allclose(back.as_array(), rep.as_array(), atol=1e-15)
    with pytest.raises(ValueError):
        Representation.from_dict({"genus": 3, "images": data["images"]})


def test_rotation_matrix_of_relator_derivative_blocks():
    # genus 1, generator y: dr/dy = x - [x,y], so the block is Ad(x) - Ad(r)
    rng = np.random.default_rng(11)
    rep = random_rep(rng, 1)
    phi = rep.as_array()
    r = evaluate_word(phi, presentation(1).relator)
    block = relator_derivative(rep)[:, 3:]
    assert np.allclose(block, rotation_matrix(phi[0]) - rotation_matrix(r))
