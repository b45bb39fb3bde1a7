"""SU(2) as unit quaternions, its Lie algebra su(2), and rank-revealing linear algebra.

Conventions used throughout the package:

* su(2) is identified with the pure imaginary quaternions, basis e1=i, e2=j, e3=k.
  The bracket is the quaternion commutator, so [e_i, e_j] = 2 eps_ijk e_k.
* The invariant form makes {e1, e2, e3} orthonormal.
* exp(v) = cos|v| + sin|v| v/|v|, hence Ad(exp(t e3)) rotates e1 toward e2 by 2t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-8
# singular values below this are roundoff for the O(1)-scaled matrices used here
RANK_FLOOR = 1e-12


class BranchError(ValueError):
    """Raised by log_map at -identity, where the logarithm is not unique."""


# ---------------------------------------------------------------------------
# raw quaternion arithmetic on length-4 arrays (w, x, y, z)


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def qconj(a: np.ndarray) -> np.ndarray:
    return np.array([a[0], -a[1], -a[2], -a[3]])


def qnormalize(a: np.ndarray) -> np.ndarray:
    return a / math.sqrt(float(a @ a))


def qexp(v: np.ndarray) -> np.ndarray:
    theta = math.sqrt(float(v @ v))
    if theta < 1e-300:
        return np.array([1.0, 0.0, 0.0, 0.0])
    s = math.sin(theta) / theta
    return np.array([math.cos(theta), s * v[0], s * v[1], s * v[2]])


def qlog(a: np.ndarray) -> np.ndarray:
    w = float(a[0])
    v = np.asarray(a[1:], dtype=float)
    s = math.sqrt(float(v @ v))
    if s < 1e-14 and w < 0:
        raise BranchError("log is undefined at -identity")
    if s == 0.0:
        return np.zeros(3)
    theta = math.atan2(s, w)
    return v * (theta / s)


def rotation_matrix(a: np.ndarray) -> np.ndarray:
    """Matrix of Ad(a) acting on su(2) coordinates (c1, c2, c3)."""
    w, x, y, z = a
    return np.array(
        [
            [w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z],
        ]
    )


def distance_to_identity(a: np.ndarray) -> float:
    """Quaternion norm |a - 1|, computed without cancellation near the identity."""
    v2 = float(a[1] * a[1] + a[2] * a[2] + a[3] * a[3])
    w = float(a[0])
    if w > 0:
        # w - 1 = -|v|^2 / (1 + w) for unit quaternions
        dw = -v2 / (1.0 + w)
    else:
        dw = w - 1.0
    return math.sqrt(dw * dw + v2)


def bracket_array(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return 2.0 * np.cross(u, v)


def ad_matrix(u: np.ndarray) -> np.ndarray:
    """Matrix of v -> [u, v]."""
    a, b, c = u
    return 2.0 * np.array([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class GroupElement:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def identity(cls) -> GroupElement:
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, a, normalize: bool = True) -> GroupElement:
        a = np.asarray(a, dtype=float)
        if normalize:
            a = qnormalize(a)
        return cls(*(float(c) for c in a))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def inverse(self) -> GroupElement:
        return GroupElement(self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return group_mul(self, other)

    def distance(self, other: GroupElement) -> float:
        return float(np.linalg.norm(self.as_array() - other.as_array()))


@dataclass(frozen=True)
class AlgebraVector:
    c1: float
    c2: float
    c3: float

    @classmethod
    def from_array(cls, a) -> AlgebraVector:
        return cls(*(float(c) for c in a))

    @classmethod
    def basis(cls, k: int) -> AlgebraVector:
        a = np.zeros(3)
        a[k - 1] = 1.0
        return cls.from_array(a)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def __add__(self, other: AlgebraVector) -> AlgebraVector:
        return AlgebraVector.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: AlgebraVector) -> AlgebraVector:
        return AlgebraVector.from_array(self.as_array() - other.as_array())

    def __mul__(self, t: float) -> AlgebraVector:
        return AlgebraVector.from_array(t * self.as_array())

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    return GroupElement.from_array(qmul(a.as_array(), b.as_array()))


def exp_map(v: AlgebraVector) -> GroupElement:
    return GroupElement.from_array(qexp(v.as_array()))


def log_map(g: GroupElement) -> AlgebraVector:
    return AlgebraVector.from_array(qlog(g.as_array()))


def adjoint(g: GroupElement, v: AlgebraVector) -> AlgebraVector:
    a = g.as_array()
    pure = np.array([0.0, v.c1, v.c2, v.c3])
    return AlgebraVector.from_array(qmul(qmul(a, pure), qconj(a))[1:])


def bracket(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    return AlgebraVector.from_array(bracket_array(u.as_array(), v.as_array()))


def inner(u: AlgebraVector, v: AlgebraVector) -> float:
    return float(u.as_array() @ v.as_array())


# ---------------------------------------------------------------------------
# rank-revealing factorizations


@dataclass(frozen=True)
class RankReport:
    """Numerical rank together with the spectral gap that certifies it.

    ``gap`` is the ratio between the smallest kept and the largest discarded
    singular value; it is infinite when nothing is discarded or nothing is kept.
    """

    rank: int
    singular_values: tuple[float, ...]
    tol: float
    gap: float


def _check_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    return m


def rank_report(m, tol: float = DEFAULT_RANK_TOL, floor: float = RANK_FLOOR) -> RankReport:
    """Count singular values above tol * s_max, ignoring those below an absolute floor.

    Without the floor a matrix that is zero up to roundoff (Ad(g) - I at a
    conjugated central point) would get full rank from pure noise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = _check_matrix(m)
    s = np.linalg.svd(m, compute_uv=False)
    smax = float(s[0]) if len(s) else 0.0
    rank = int(np.sum(s > max(tol * smax, floor)))
    if 0 < rank < len(s) and s[rank] > 0:
        gap = float(s[rank - 1] / s[rank])
    else:
        gap = math.inf
    return RankReport(rank, tuple(float(x) for x in s), tol, gap)


def numeric_rank(m, tol: float = DEFAULT_RANK_TOL) -> int:
    return rank_report(m, tol).rank


def kernel_basis(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``m``."""
    m = _check_matrix(m)
    r = numeric_rank(m, tol)
    _, _, vt = np.linalg.svd(m, full_matrices=True)
    return vt[r:].T.copy()


def range_basis(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical column space of ``m``."""
    m = _check_matrix(m)
    r = numeric_rank(m, tol)
    u, _, _ = np.linalg.svd(m, full_matrices=True)
    return u[:, :r].copy()
