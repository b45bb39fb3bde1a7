"""Canonical Poisson brackets, invariant generators and momentum maps, in exact arithmetic.

The bracket convention is fixed once and for all:

    {f, h} = sum_j  df/dp_j dh/dq_j  -  df/dq_j dh/dp_j,

so {q, p} = -1.  Comparisons with brackets quoted elsewhere are made up to one
global constant, which is measured rather than assumed.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from repspace import exact
from repspace.poly import RationalPolynomial, as_fraction, poly_sum

# The cone table {x,y} = 2 rho, {x,rho} = 2y, {y,rho} = -2x, keyed by generator pairs.
REFERENCE_CONE_TABLE: dict[tuple[str, str], tuple[Fraction, str]] = {
    ("x1", "x2"): (Fraction(2), "rho"),
    ("x1", "rho"): (Fraction(2), "x2"),
    ("x2", "rho"): (Fraction(-2), "x1"),
}


class ClosureError(ValueError):
    def __init__(self, pair: tuple[str, str]):
        super().__init__(f"bracket of {pair[0]} and {pair[1]} leaves the generator span")
        self.pair = pair


# ---------------------------------------------------------------------------
# phase spaces


@dataclass(frozen=True)
class PhaseSpace:
    """Cotangent bundle of (R^d)^n with coordinates q{i}_{a}, p{i}_{a}."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need at least one particle and one dimension")

    @property
    def variables(self) -> tuple[str, ...]:
        qs = tuple(f"q{i}_{a}" for i in range(1, self.n + 1) for a in range(1, self.d + 1))
        ps = tuple(f"p{i}_{a}" for i in range(1, self.n + 1) for a in range(1, self.d + 1))
        return qs + ps

    def q(self, i: int, a: int) -> RationalPolynomial:
        return RationalPolynomial.variable(self.variables, f"q{i}_{a}")

    def p(self, i: int, a: int) -> RationalPolynomial:
        return RationalPolynomial.variable(self.variables, f"p{i}_{a}")

    def vector(self, label: str) -> list[RationalPolynomial]:
        """Components of the vector q{i} or p{i}."""
        kind, i = label[0], int(label[1:])
        make = self.q if kind == "q" else self.p
        return [make(i, a) for a in range(1, self.d + 1)]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f"q{i}" for i in range(1, self.n + 1)) + tuple(
            f"p{i}" for i in range(1, self.n + 1)
        )

    def zero(self) -> RationalPolynomial:
        return RationalPolynomial.zero(self.variables)

    def constant(self, c) -> RationalPolynomial:
        return RationalPolynomial.constant(self.variables, c)

    def point(self, vectors: dict[str, Sequence]) -> dict[str, object]:
        """Coordinate assignment from label -> vector values."""
        out = {}
        for label in self.labels:
            vals = vectors[label]
            for a, v in enumerate(vals, start=1):
                out[f"{label[0]}{label[1:]}_{a}"] = v
        return out


def conjugate_pairs(variables: Sequence[str]) -> list[tuple[str, str]]:
    names = set(variables)
    return [(v, "p" + v[1:]) for v in variables if v.startswith("q") and "p" + v[1:] in names]


def canonical_bracket(f: RationalPolynomial, h: RationalPolynomial) -> RationalPolynomial:
    if f.variables != h.variables:
        raise ValueError("brackets need both functions on the same phase space")
    out = RationalPolynomial.zero(f.variables)
    for q, p in conjugate_pairs(f.variables):
        out = out + f.derivative(p) * h.derivative(q) - f.derivative(q) * h.derivative(p)
    return out


def dot(u: Sequence[RationalPolynomial], v: Sequence[RationalPolynomial]) -> RationalPolynomial:
    return poly_sum((a * b for a, b in zip(u, v)), u[0].variables)


def cross(u: Sequence[RationalPolynomial], v: Sequence[RationalPolynomial]) -> list[RationalPolynomial]:
    return [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]


def det2(u: Sequence[RationalPolynomial], v: Sequence[RationalPolynomial]) -> RationalPolynomial:
    return u[0] * v[1] - u[1] * v[0]


def det3(u, v, w) -> RationalPolynomial:
    return dot(cross(u, v), w)


# ---------------------------------------------------------------------------
# invariant sets


@dataclass(frozen=True)
class InvariantSet:
    group: str
    space: PhaseSpace
    generators: dict[str, RationalPolynomial]
    momentum: tuple[RationalPolynomial, ...]
    # generators that survive on the zero locus of the momentum
    reduced: tuple[str, ...] = field(default=())

    @property
    def reduced_generators(self) -> dict[str, RationalPolynomial]:
        names = self.reduced or tuple(self.generators)
        return {k: self.generators[k] for k in names}

    def commutes_with_momentum(self) -> bool:
        return all(
            canonical_bracket(g, m).is_zero() for g in self.generators.values() for m in self.momentum
        )


def planar_invariants() -> InvariantSet:
    """One particle in the plane under simultaneous rotation of q and p."""
    s = PhaseSpace(1, 2)
    q, p = s.vector("q1"), s.vector("p1")
    qq, pp, qp = dot(q, q), dot(p, p), dot(q, p)
    mu = det2(q, p)
    gens = {"x1": qq - pp, "x2": 2 * qp, "rho": qq + pp, "mu": mu}
    return InvariantSet("SO(2)", s, gens, (mu,), reduced=("x1", "x2", "rho"))


def dot_name(a: str, b: str) -> str:
    return f"{a}.{b}"


def spatial_invariants(n: int = 2) -> InvariantSet:
    """Dot products of n particles in R^3; momentum is the total angular momentum."""
    s = PhaseSpace(n, 3)
    labels = s.labels
    gens = {
        dot_name(a, b): dot(s.vector(a), s.vector(b))
        for a, b in combinations_with_replacement(labels, 2)
    }
    return InvariantSet("O(3)", s, gens, tuple(angular_momentum(s)))


def angular_momentum(space: PhaseSpace) -> list[RationalPolynomial]:
    """Total angular momentum: one component in the plane, three in space."""
    pairs = [(space.vector(f"q{i}"), space.vector(f"p{i}")) for i in range(1, space.n + 1)]
    if space.d == 2:
        return [poly_sum((det2(q, p) for q, p in pairs), space.variables)]
    mom = [space.zero() for _ in range(3)]
    for q, p in pairs:
        mom = [m + c for m, c in zip(mom, cross(q, p))]
    return mom


# ---------------------------------------------------------------------------
# tables and Lie structure


class SpanSolver:
    """Exact coordinates with respect to a fixed set of linearly independent polynomials.

    The pivot monomials are found once; each query is then a small matrix-vector
    product followed by an exact reconstruction check.
    """

    def __init__(self, basis: Sequence[RationalPolynomial]):
        self.basis = list(basis)
        monos = sorted({m for b in self.basis for m in b.terms})
        rows = [[b.coefficient(m) for b in self.basis] for m in monos]
        pivots = exact.pivot_rows(rows)
        if len(pivots) != len(self.basis):
            raise ValueError("basis polynomials are linearly dependent")
        self.monomials = [monos[i] for i in pivots]
        self.inverse = exact.inverse([rows[i] for i in pivots])

    def coordinates(self, poly: RationalPolynomial) -> list[Fraction] | None:
        rhs = [poly.coefficient(m) for m in self.monomials]
        coeffs = [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) for row in self.inverse]
        recon = poly_sum((b.scale(c) for b, c in zip(self.basis, coeffs) if c != 0), poly.variables)
        return coeffs if recon == poly else None


def express_in_span(
    poly: RationalPolynomial, basis: Sequence[RationalPolynomial]
) -> list[Fraction] | None:
    """Coefficients c with poly = sum c_k basis_k, or None if poly is outside the span."""
    monos = sorted({m for b in basis for m in b.terms} | set(poly.terms))
    if not monos:
        return [Fraction(0)] * len(basis)
    rows = [[b.coefficient(m) for b in basis] for m in monos]
    rhs = [poly.coefficient(m) for m in monos]
    return exact.solve(rows, rhs)


def bracket_table(generators: dict[str, RationalPolynomial]) -> dict[tuple[str, str], RationalPolynomial]:
    names = list(generators)
    return {
        (a, b): canonical_bracket(generators[a], generators[b])
        for i, a in enumerate(names)
        for b in names[i + 1 :]
    }


@dataclass(frozen=True)
class LieStructure:
    """Structure constants: {g_i, g_j} = sum_k constants[i][j][k] g_k."""

    names: tuple[str, ...]
    constants: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.names)

    def bracket_of(self, i: int, j: int) -> tuple[Fraction, ...]:
        return self.constants[i][j]

    def jacobi_defect(self) -> int:
        """Number of (i, j, k, m) entries where the Jacobi identity fails; 0 means exact."""
        n, c = self.dim, self.constants
        bad = 0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for m in range(n):
                        s = sum(
                            c[j][k][l] * c[i][l][m] + c[k][i][l] * c[j][l][m] + c[i][j][l] * c[k][l][m]
                            for l in range(n)
                        )
                        if s != 0:
                            bad += 1
        return bad

    def antisymmetric(self) -> bool:
        n, c = self.dim, self.constants
        return all(c[i][j][k] == -c[j][i][k] for i in range(n) for j in range(n) for k in range(n))

    def ad(self, i: int) -> list[list[Fraction]]:
        # column j holds the coordinates of {g_i, g_j}
        n = self.dim
        return [[self.constants[i][j][k] for j in range(n)] for k in range(n)]

    def killing_form(self) -> list[list[Fraction]]:
        n = self.dim
        ads = [self.ad(i) for i in range(n)]
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = exact.matmul(ads[i], ads[j])
                out[i][j] = out[j][i] = sum((prod[k][k] for k in range(n)), Fraction(0))
        return out

    def killing_signature(self, tol: float = 1e-9) -> tuple[int, int, int]:
        """(positive, negative, zero) eigenvalue counts of the Killing matrix."""
        k = np.array([[float(x) for x in row] for row in self.killing_form()])
        ev = np.linalg.eigvalsh(k)
        scale = max(1.0, float(np.max(np.abs(ev))))
        pos = int(np.sum(ev > tol * scale))
        neg = int(np.sum(ev < -tol * scale))
        return pos, neg, len(ev) - pos - neg

    def to_dict(self) -> dict:
        table = {}
        for i, a in enumerate(self.names):
            for j in range(i + 1, self.dim):
                coeffs = {
                    self.names[k]: str(c) for k, c in enumerate(self.constants[i][j]) if c != 0
                }
                table[f"{a},{self.names[j]}"] = coeffs
        return {"generators": list(self.names), "brackets": table}


def closure_to_lie_algebra(
    invariants: InvariantSet | dict[str, RationalPolynomial], names: Sequence[str] | None = None
) -> LieStructure:
    gens = invariants.reduced_generators if isinstance(invariants, InvariantSet) else invariants
    if names is not None:
        gens = {k: gens[k] for k in names}
    keys = tuple(gens)
    basis = [gens[k] for k in keys]
    for b in basis:
        if not (b.is_homogeneous() and b.degree() == 2):
            raise ValueError("closure needs homogeneous quadratic generators")
    n = len(keys)
    zero = tuple(Fraction(0) for _ in range(n))
    c = [[zero] * n for _ in range(n)]
    solver = SpanSolver(basis)
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = solver.coordinates(canonical_bracket(basis[i], basis[j]))
            if coeffs is None:
                raise ClosureError((keys[i], keys[j]))
            c[i][j] = tuple(coeffs)
            c[j][i] = tuple(-x for x in coeffs)
    return LieStructure(keys, tuple(tuple(row) for row in c))


def table_in_generators(structure: LieStructure) -> dict[tuple[str, str], RationalPolynomial]:
    """Brackets rewritten as linear polynomials in the generator names."""
    ring = structure.names
    gens = RationalPolynomial.gens(ring)
    out = {}
    for i, a in enumerate(ring):
        for j in range(i + 1, len(ring)):
            out[(a, ring[j])] = poly_sum(
                (g * c for g, c in zip(gens, structure.constants[i][j]) if c != 0), ring
            )
    return out


def proportionality_constant(
    table: dict[tuple[str, str], RationalPolynomial],
    reference: dict[tuple[str, str], tuple[Fraction, str]] = REFERENCE_CONE_TABLE,
) -> Fraction | None:
    """The unique c with reference = c * table entrywise, or None if no such c exists."""
    constant: Fraction | None = None
    for pair, (coeff, gen) in reference.items():
        entry = table[pair]
        ring = entry.variables
        target = RationalPolynomial.variable(ring, gen).scale(coeff)
        if entry.is_zero():
            return None
        mono, c_entry = next(iter(entry.terms.items()))
        ratio = target.coefficient(mono) / c_entry
        if ratio == 0 or entry.scale(ratio) != target:
            return None
        if constant is None:
            constant = ratio
        elif constant != ratio:
            return None
    return constant


# ---------------------------------------------------------------------------
# momentum maps


def _gaussian(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, tuple):
        return as_fraction(x[0]), as_fraction(x[1])
    if isinstance(x, complex):
        return as_fraction(x.real), as_fraction(x.imag)
    return as_fraction(x), Fraction(0)


def _skew_hermitian(xi) -> list[list[tuple[Fraction, Fraction]]]:
    m = [[_gaussian(x) for x in row] for row in xi]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("xi must be square")
    for j in range(n):
        for k in range(n):
            a, b = m[j][k]
            c, d = m[k][j]
            if a != -c or b != d:
                raise ValueError("xi must be skew-hermitian")
    return m


def unitary_moment(xi, space: PhaseSpace | None = None) -> RationalPolynomial:
    """(xi o mu)(z) = (i/2) sum_{j,k} xi_jk conj(z_j) z_k with z_j = q_j + i p_j.

    ``xi`` is a skew-hermitian matrix whose entries are ints, Fractions, complex
    numbers or (re, im) pairs.  Coordinates are those of a single particle in
    C^m, i.e. ``PhaseSpace(1, m)``.
    """
    m = _skew_hermitian(xi)
    space = space or PhaseSpace(1, len(m))
    if space.n != 1 or space.d != len(m):
        raise ValueError("unitary_moment works on a single particle in C^m")
    q = space.vector("q1")
    p = space.vector("p1")
    out = space.zero()
    for j in range(len(m)):
        for k in range(len(m)):
            a, b = m[j][k]
            if a == 0 and b == 0:
                continue
            # conj(z_j) z_k = R + i I
            real = q[j] * q[k] + p[j] * p[k]
            imag = q[j] * p[k] - p[j] * q[k]
            # (i/2)(a + ib)(R + iI) has real part -(aI + bR)/2
            out = out - (imag.scale(a) + real.scale(b)).scale(Fraction(1, 2))
    return out


def linear_action(xi, f: RationalPolynomial, space: PhaseSpace) -> RationalPolynomial:
    """For a linear function f, the linear function z -> df(xi z)."""
    m = _skew_hermitian(xi)
    q = space.vector("q1")
    p = space.vector("p1")
    out = space.zero()
    for j in range(len(m)):
        fq = f.coefficient(q[j].sorted_terms()[0][0])
        fp = f.coefficient(p[j].sorted_terms()[0][0])
        for k in range(len(m)):
            a, b = m[j][k]
            # (xi z)_j = sum_k (a + ib)(q_k + i p_k)
            re = q[k].scale(a) - p[k].scale(b)
            im = q[k].scale(b) + p[k].scale(a)
            out = out + re.scale(fq) + im.scale(fp)
    return out


SP4_J = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))
# Killing form of sp(4, R) is 6 tr(XY)
SP4_KILLING_SCALE = 6


def _as_exact_or_float(values):
    if all(isinstance(v, (int, Fraction)) for v in values):
        return [Fraction(v) for v in values]
    return [float(v) for v in values]


def sp4_moment(configuration: Sequence) -> list[list]:
    """Moment map of Sp(4, R) on R^3 (x) R^4, identified with sp(4) by the Killing form.

    ``configuration`` lists q1, q2, p1, p2 in R^3 (12 numbers).  With G the Gram
    matrix of these four vectors, <mu, xi> = 1/2 sum omega(xi z, z) = -tr(G J xi)/2,
    so mu corresponds to M = -G J / 12.  Rational input gives exact output.
    """
    vals = _as_exact_or_float(configuration)
    if len(vals) != 12:
        raise ValueError("configuration must hold 12 coordinates (q1, q2, p1, p2 in R^3)")
    vecs = [vals[3 * k : 3 * k + 3] for k in range(4)]
    gram = [[sum(a * b for a, b in zip(u, v)) for v in vecs] for u in vecs]
    scale = Fraction(-1, 2 * SP4_KILLING_SCALE) if isinstance(vals[0], Fraction) else -1 / 12
    return [
        [scale * sum(gram[i][k] * SP4_J[k][j] for k in range(4)) for j in range(4)] for i in range(4)
    ]


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def in_sp4(m) -> bool:
    """M^T J + J M == 0 (exact for exact entries)."""
    mt = [list(r) for r in zip(*m)]
    lhs = _mat_mul(mt, SP4_J)
    rhs = _mat_mul(SP4_J, m)
    return all(lhs[i][j] + rhs[i][j] == 0 for i in range(4) for j in range(4))


def matrix_square(m):
    return _mat_mul(m, m)


# ---------------------------------------------------------------------------
# zero-locus samples in exact arithmetic


def random_fraction(rng: np.random.Generator, num: int = 9, den: int = 5) -> Fraction:
    return Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))


def rational_unit_vector(t: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def planar_zero_locus_sample(rng: np.random.Generator) -> tuple[list[Fraction], list[Fraction]]:
    """A point (q, p) in R^2 x R^2 with det(q, p) = 0: both along one rational unit vector."""
    u = rational_unit_vector(random_fraction(rng))
    a, b = random_fraction(rng), random_fraction(rng)
    return [a * u[0], a * u[1]], [b * u[0], b * u[1]]


def zero_momentum_configuration(rng: np.random.Generator, n: int = 2) -> list[list[Fraction]]:
    """Rational q1..qn, p1..pn in R^3 with sum q_i x p_i = 0, returned as [q1..qn, p1..pn]."""

    def vec():
        return [random_fraction(rng) for _ in range(3)]

    def cr(u, v):
        return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]

    qs, ps = [], []
    total = [Fraction(0)] * 3
    for _ in range(n - 1):
        q, p = vec(), vec()
        qs.append(q)
        ps.append(p)
        total = [t + c for t, c in zip(total, cr(q, p))]
    if all(t == 0 for t in total):
        q = vec()
        p = [random_fraction(rng) * x for x in q]
    else:
        # q in the plane orthogonal to the running total L, p = -(L x q)/|q|^2 + s q
        while True:
            q = cr(total, vec())
            if any(q):
                break
        q2 = sum(x * x for x in q)
        lq = cr(total, q)
        s = random_fraction(rng)
        p = [-a / q2 + s * b for a, b in zip(lq, q)]
    qs.append(q)
    ps.append(p)
    return qs + ps


def generic_configuration(rng: np.random.Generator, n: int = 2) -> list[list[Fraction]]:
    return [[random_fraction(rng) for _ in range(3)] for _ in range(2 * n)]


def _planar_invariant_values(q, p) -> tuple[Fraction, Fraction, Fraction]:
    qq = q[0] * q[0] + q[1] * q[1]
    pp = p[0] * p[0] + p[1] * p[1]
    qp = q[0] * p[0] + q[1] * p[1]
    return qq - pp, 2 * qp, qq + pp


def _rotation_between(first, second) -> tuple[float, float]:
    """Angle rotating the point ``first`` (q, p) onto ``second``, and the worst residual."""
    q1, p1 = [float(x) for x in first[0]], [float(x) for x in first[1]]
    q2, p2 = [float(x) for x in second[0]], [float(x) for x in second[1]]
    # pick the longer of the two vectors to read the angle from
    src, dst = (q1, q2) if math.hypot(*q1) >= math.hypot(*p1) else (p1, p2)
    angle = math.atan2(dst[1], dst[0]) - math.atan2(src[1], src[0])
    c, s = math.cos(angle), math.sin(angle)

    def rot(v):
        return [c * v[0] - s * v[1], s * v[0] + c * v[1]]

    err = max(
        max(abs(a - b) for a, b in zip(rot(q1), q2)),
        max(abs(a - b) for a, b in zip(rot(p1), p2)),
    )
    return angle, err


@dataclass(frozen=True)
class KempfNessReport:
    pairs: int
    max_rotation_error: float
    cone_identity_exact: bool
    invariants_match: bool

    def passed(self, tol: float = 1e-9) -> bool:
        return self.cone_identity_exact and self.invariants_match and self.max_rotation_error <= tol


def kempf_ness_check(samples: int = 100, seed: int = 0) -> KempfNessReport:
    """Pairs of zero-locus points with equal (x1, x2) differ by a rotation, and rho is determined.

    The second point of each pair is built independently from the first (same
    square root of x1 + i x2 up to sign, fresh direction), so the rotation has to
    be recovered, not read off from the construction.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    cone_ok = True
    match = True
    for _ in range(samples):
        q, p = planar_zero_locus_sample(rng)
        while not any(q) and not any(p):
            q, p = planar_zero_locus_sample(rng)
        u_norm2 = q[0] * q[0] + q[1] * q[1] + p[0] * p[0] + p[1] * p[1]
        sign = 1 if rng.integers(2) else -1
        v = rational_unit_vector(random_fraction(rng))
        # rebuild (a v, b v) from the invariants alone: a^2, b^2 from rho +- x1, sign of ab from x2
        x1, x2, rho = _planar_invariant_values(q, p)
        a_sq = (rho + x1) / 2
        b_sq = (rho - x1) / 2
        a = _rational_sqrt(a_sq)
        b = _rational_sqrt(b_sq)
        if a * b * 2 != x2:
            b = -b
        q2 = [sign * a * v[0], sign * a * v[1]]
        p2 = [sign * b * v[0], sign * b * v[1]]
        y1, y2, rho2 = _planar_invariant_values(q2, p2)
        match = match and (y1, y2) == (x1, x2) and rho2 == rho and u_norm2 == rho
        cone_ok = cone_ok and rho * rho == x1 * x1 + x2 * x2 and rho >= 0
        cone_ok = cone_ok and rho2 * rho2 == y1 * y1 + y2 * y2
        _, err = _rotation_between((q, p), (q2, p2))
        worst = max(worst, err)
    return KempfNessReport(samples, worst, cone_ok, match)


def _rational_sqrt(x: Fraction) -> Fraction:
    num = math.isqrt(x.numerator)
    den = math.isqrt(x.denominator)
    if num * num != x.numerator or den * den != x.denominator:
        raise ValueError(f"{x} is not a rational square")
    return Fraction(num, den)
