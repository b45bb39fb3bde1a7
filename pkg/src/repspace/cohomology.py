"""Group cohomology H*(pi, g_phi) of a surface group with adjoint coefficients.

Cochains are vectors in R^{6g}: block i holds the value u(x_i) in su(2) on the
i-th generator.  A 1-cochain extends to words by u(ab) = u(a) + Ad(phi(a)) u(b),
which is exactly the kernel of the right-trivialized derivative of the word map.

The pairing on H^1 evaluates the cup product (u v)[a|b] = <u(a), Ad(phi(a)) v(b)>
on the fundamental 2-cycle of the one-relator presentation,

    c = sum_k [P_{k-1} | l_k]  -  sum_{l_k inverse} [x_k | x_k^-1],

where r = l_1 ... l_m and P_k = l_1 ... l_k.  The second sum makes c a cycle in
the normalized bar complex.  Orientation and scale of c, and of the invariant
form, are conventions; only ranks, kernels and vanishing statements are
convention independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from repspace.lie import (
    DEFAULT_RANK_TOL,
    AlgebraVector,
    GroupElement,
    RankReport,
    ad_matrix,
    bracket_array,
    kernel_basis,
    qconj,
    qmul,
    range_basis,
    rank_report,
    rotation_matrix,
)
from repspace.words import (
    CLASSIFY_TOL,
    Representation,
    StratumLabel,
    orbit_type,
    relator_derivative,
)

INCLUSION_TOL = 1e-8


class InconsistentRepresentation(ValueError):
    """The representation is too far from flat for the cohomology to make sense."""


def _require_flat(rep: Representation, tol: float = CLASSIFY_TOL) -> None:
    if rep.residual > tol:
        raise InconsistentRepresentation(
            f"residual {rep.residual:.3e} exceeds {tol}; not a point of Hom(pi, SU(2))"
        )


def _generator_rotations(rep: Representation) -> list[np.ndarray]:
    return [rotation_matrix(q) for q in rep.as_array()]


def h0_matrix(rep: Representation) -> np.ndarray:
    """Stacked maps v -> Ad(phi(x_i)) v - v; its kernel is H^0."""
    return np.vstack([r - np.eye(3) for r in _generator_rotations(rep)])


def coboundary_matrix(rep: Representation) -> np.ndarray:
    """The map v -> (v - Ad(phi(x_i)) v)_i from su(2) to 1-cochains."""
    return np.vstack([np.eye(3) - r for r in _generator_rotations(rep)])


def h0_space(rep: Representation, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    _require_flat(rep)
    return kernel_basis(h0_matrix(rep), tol)


def cocycles(rep: Representation, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    _require_flat(rep)
    return kernel_basis(relator_derivative(rep), tol)


def coboundaries(rep: Representation, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    _require_flat(rep)
    b1 = range_basis(coboundary_matrix(rep), tol)
    if b1.shape[1]:
        leak = float(np.linalg.norm(relator_derivative(rep) @ b1))
        if leak > INCLUSION_TOL:
            raise InconsistentRepresentation(
                f"coboundaries are not cocycles (defect {leak:.3e}); residual too large?"
            )
    return b1


@dataclass(frozen=True)
class CohomologyData:
    genus: int
    stratum: StratumLabel
    h0_dim: int
    h1_dim: int
    h2_dim: int
    h0_basis: np.ndarray = field(repr=False)
    z1_basis: np.ndarray = field(repr=False)
    b1_basis: np.ndarray = field(repr=False)
    h1_basis: np.ndarray = field(repr=False)
    rank_reports: dict[str, RankReport] = field(repr=False, default_factory=dict)

    @property
    def euler_characteristic(self) -> int:
        return self.h0_dim - self.h1_dim + self.h2_dim

    @property
    def min_gap(self) -> float:
        return min(r.gap for r in self.rank_reports.values())


def compute_cohomology(rep: Representation, tol: float = DEFAULT_RANK_TOL) -> CohomologyData:
    _require_flat(rep)
    dr = relator_derivative(rep)
    reports = {
        "h0": rank_report(h0_matrix(rep), tol),
        "dr": rank_report(dr, tol),
        "b1": rank_report(coboundary_matrix(rep), tol),
    }
    h0 = h0_space(rep, tol)
    z1 = cocycles(rep, tol)
    b1 = coboundaries(rep, tol)
    if b1.shape[1]:
        coords = kernel_basis(b1.T @ z1, tol)
        h1 = z1 @ coords
    else:
        h1 = z1
    h0_dim = h0.shape[1]
    return CohomologyData(
        genus=rep.genus,
        stratum=orbit_type(rep),
        h0_dim=h0_dim,
        h1_dim=h1.shape[1],
        # Poincare duality through the pairing
        h2_dim=h0_dim,
        h0_basis=h0,
        z1_basis=z1,
        b1_basis=b1,
        h1_basis=h1,
        rank_reports=reports,
    )


# ---------------------------------------------------------------------------
# cup products on the fundamental cycle


def _letter_value(phi: np.ndarray, u: np.ndarray, letter: int) -> np.ndarray:
    k = abs(letter) - 1
    uk = u[3 * k : 3 * k + 3]
    if letter > 0:
        return uk
    return -rotation_matrix(qconj(phi[k])) @ uk


def _cycle_terms(rep: Representation, u: np.ndarray, v: np.ndarray):
    """Yield (u(P_{k-1}), Ad(P_{k-1}) v(l_k), sign) for every chain term of the cycle."""
    phi = rep.as_array()
    prefix = np.array([1.0, 0.0, 0.0, 0.0])
    u_prefix = np.zeros(3)
    for letter in rep.presentation.relator:
        rot = rotation_matrix(prefix)
        yield u_prefix, rot @ _letter_value(phi, v, letter), 1.0
        if letter < 0:
            # -[x | x^-1] contributes -<u(x), Ad(x) v(x^-1)> = +<u(x), v(x)>
            k = -letter - 1
            yield u[3 * k : 3 * k + 3], -v[3 * k : 3 * k + 3], -1.0
        u_prefix = u_prefix + rot @ _letter_value(phi, u, letter)
        q = phi[abs(letter) - 1]
        prefix = qmul(prefix, q if letter > 0 else qconj(q))


def _check_cocycle(rep: Representation, u: np.ndarray, tol: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (6 * rep.genus,):
        raise ValueError(f"cochain must have length {6 * rep.genus}")
    defect = float(np.linalg.norm(relator_derivative(rep) @ u))
    if defect > tol * max(1.0, float(np.linalg.norm(u))):
        raise ValueError(f"not a cocycle (defect {defect:.3e})")
    return u


def symplectic_pairing(rep: Representation, u, v, tol: float = INCLUSION_TOL) -> float:
    u = _check_cocycle(rep, u, tol)
    v = _check_cocycle(rep, v, tol)
    return float(sum(s * (a @ b) for a, b, s in _cycle_terms(rep, u, v)))


def pairing_matrix(rep: Representation, data: CohomologyData | None = None) -> np.ndarray:
    data = data or compute_cohomology(rep)
    h = data.h1_basis
    n = h.shape[1]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = symplectic_pairing(rep, h[:, i], h[:, j])
            out[j, i] = -out[i, j]
    return out


def theta(rep: Representation, u, data: CohomologyData | None = None) -> AlgebraVector:
    """Half the cup-square of u with bracket coefficients, as an element of H^0.

    H^2 is identified with the dual of H^0 through the pairing, and H^0 with its
    dual through the invariant form, so the class is returned as a vector in the
    stabilizer algebra.  At a central point it equals sum_i [u(x_i), u(y_i)].
    """
    u = _check_cocycle(rep, u, INCLUSION_TOL)
    data = data or compute_cohomology(rep)
    total = np.zeros(3)
    for a, b, sign in _cycle_terms(rep, u, u):
        total += sign * bracket_array(a, b)
    h0 = data.h0_basis
    return AlgebraVector.from_array(0.5 * (h0 @ (h0.T @ total)))


def act_on_cochain(g: GroupElement, u) -> np.ndarray:
    """Ad(g) applied blockwise; for g in the stabilizer this maps cocycles to cocycles."""
    rot = rotation_matrix(g.as_array())
    u = np.asarray(u, dtype=float)
    return np.concatenate([rot @ u[3 * k : 3 * k + 3] for k in range(len(u) // 3)])


@dataclass(frozen=True)
class LambdaAnalysis:
    kernel_dim: int
    image_dim: int
    is_isomorphism: bool

    def to_dict(self) -> dict:
        return {"kernel": self.kernel_dim, "image": self.image_dim}


def fixed_subspace(data: CohomologyData, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Coordinates (in the H^1 basis) of the vectors fixed by the stabilizer.

    The stabilizer of a flat SU(2) representation is the center, a maximal torus
    or SU(2); the last two are connected, so invariance under the infinitesimal
    generators (a basis of H^0) is invariance under the group.
    """
    h1 = data.h1_basis
    n = h1.shape[1]
    if n == 0 or data.h0_dim == 0:
        return np.eye(n)
    blocks = []
    for w in data.h0_basis.T:
        ad = np.kron(np.eye(h1.shape[0] // 3), ad_matrix(w))
        blocks.append(h1.T @ ad @ h1)
    return kernel_basis(np.vstack(blocks), tol)


def lambda_analysis(rep: Representation, data: CohomologyData | None = None) -> LambdaAnalysis:
    data = data or compute_cohomology(rep)
    fixed = fixed_subspace(data).shape[1]
    kernel = data.h1_dim - fixed
    return LambdaAnalysis(kernel, data.h1_dim - kernel, kernel == 0)


def cohomology_summary(rep: Representation, tol: float = DEFAULT_RANK_TOL) -> dict:
    data = compute_cohomology(rep, tol)
    pm = pairing_matrix(rep, data)
    pairing_rank = rank_report(pm, tol).rank if pm.size else 0
    return {
        "genus": data.genus,
        "stratum": data.stratum.value,
        "h0": data.h0_dim,
        "h1": data.h1_dim,
        "h2": data.h2_dim,
        "pairing_rank": pairing_rank,
        "lambda": lambda_analysis(rep, data).to_dict(),
    }
