"""Poisson models of the local structure near each stratum, and the singularity detectors.

A PoissonModel is a finitely generated Poisson algebra written in terms of
named generators: a bracket table of polynomials in the generators, relations
cutting out the locus, and inequalities (read as ``f >= 0``).  Models built
from invariant theory also carry their Hilbert map, the generators written as
polynomials on the ambient phase space, and a sampler for the momentum zero
locus, so that tables and relations can be checked against the ambient data.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations

import numpy as np

from repspace import exact
from repspace.cohomology import cohomology_summary
from repspace.lie import numeric_rank
from repspace.poisson import (
    PhaseSpace,
    closure_to_lie_algebra,
    det2,
    det3,
    dot,
    planar_invariants,
    planar_zero_locus_sample,
    random_fraction,
    table_in_generators,
    zero_momentum_configuration,
)
from repspace.poly import RationalPolynomial, is_exact, poly_sum
from repspace.words import StratumLabel, solve_flat

FEASIBILITY_TOL = 1e-10

Sampler = Callable[[np.random.Generator], dict[str, Fraction]]


class InfeasiblePoint(ValueError):
    """The point violates a relation or an inequality of the model."""


def _tag(poly: RationalPolynomial, tag: str) -> RationalPolynomial:
    # a suffix keeps the leading q/p that pairs conjugate coordinates
    return RationalPolynomial(tuple(v + tag for v in poly.variables), poly.terms)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def _sparse_term(poly: RationalPolynomial):
    if not poly.terms:
        return None
    mono, c = next(iter(poly.terms.items()))
    coeff = c.numerator if c.denominator == 1 else c
    return [(k, e) for k, e in enumerate(mono) if e], coeff


def determinant(matrix: Sequence[Sequence[RationalPolynomial]]) -> RationalPolynomial:
    """Leibniz expansion; entries that are single terms (e.g. Gram entries) take a fast path."""
    n = len(matrix)
    ring = matrix[0][0].variables
    if all(len(e.terms) <= 1 for row in matrix for e in row):
        entries = [
            [_sparse_term(e) for e in row] for row in matrix
        ]
        terms: dict[tuple[int, ...], Fraction] = {}
        for perm in permutations(range(n)):
            coeff = _permutation_sign(perm)
            mono = [0] * len(ring)
            for i, j in enumerate(perm):
                entry = entries[i][j]
                if entry is None:
                    break
                coeff *= entry[1]
                for k, e in entry[0]:
                    mono[k] += e
            else:
                key = tuple(mono)
                terms[key] = terms.get(key, 0) + coeff
        return RationalPolynomial(ring, terms)
    out = RationalPolynomial.zero(ring)
    for perm in permutations(range(n)):
        term = RationalPolynomial.constant(ring, _permutation_sign(perm))
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
        out = out + term
    return out


@dataclass(frozen=True)
class PoissonModel:
    names: tuple[str, ...]
    # {g_i, g_j} for i < j in name order; absent pairs bracket to zero
    table: dict[tuple[str, str], RationalPolynomial]
    relations: tuple[RationalPolynomial, ...] = ()
    inequalities: tuple[RationalPolynomial, ...] = ()
    hilbert: dict[str, RationalPolynomial] | None = field(default=None, repr=False)
    sampler: Sampler | None = field(default=None, repr=False, compare=False)
    description: str = ""

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        pos = {n: i for i, n in enumerate(self.names)}
        for (a, b), poly in self.table.items():
            if pos[a] >= pos[b]:
                raise ValueError(f"table key ({a}, {b}) is not in generator order")
            if poly.variables != self.names:
                raise ValueError(f"bracket ({a}, {b}) is not a polynomial in the generators")
        for poly in self.relations + self.inequalities:
            if poly.variables != self.names:
                raise ValueError("relations and inequalities must be polynomials in the generators")

    @property
    def size(self) -> int:
        return len(self.names)

    def generator(self, name: str) -> RationalPolynomial:
        return RationalPolynomial.variable(self.names, name)

    def bracket_of(self, a: str, b: str) -> RationalPolynomial:
        if a == b:
            return RationalPolynomial.zero(self.names)
        if (a, b) in self.table:
            return self.table[(a, b)]
        if (b, a) in self.table:
            return -self.table[(b, a)]
        if a not in self.names or b not in self.names:
            raise KeyError(f"unknown generator in ({a}, {b})")
        return RationalPolynomial.zero(self.names)

    def bracket(self, f: RationalPolynomial, h: RationalPolynomial) -> RationalPolynomial:
        """Extend the table as a biderivation."""
        df = {n: f.derivative(n) for n in f.support()}
        dh = {n: h.derivative(n) for n in h.support()}
        out = RationalPolynomial.zero(self.names)
        for a, fa in df.items():
            for b, hb in dh.items():
                entry = self.bracket_of(a, b)
                if not entry.is_zero():
                    out = out + fa * hb * entry
        return out

    def jacobiator(self, a: str, b: str, c: str) -> RationalPolynomial:
        ga, gb, gc = self.generator(a), self.generator(b), self.generator(c)
        return (
            self.bracket(ga, self.bracket(gb, gc))
            + self.bracket(gb, self.bracket(gc, ga))
            + self.bracket(gc, self.bracket(ga, gb))
        )

    # -- evaluation ----------------------------------------------------------

    def _values(self, point) -> list:
        if isinstance(point, dict):
            return [point[n] for n in self.names]
        vals = list(point)
        if len(vals) != self.size:
            raise ValueError(f"expected {self.size} generator values, got {len(vals)}")
        return vals

    def is_member(self, point, tol: float = FEASIBILITY_TOL) -> bool:
        vals = self._values(point)
        for r in self.relations:
            if abs(float(r.evaluate(vals))) > tol:
                return False
        return all(float(g.evaluate(vals)) >= -tol for g in self.inequalities)

    def require_member(self, point, tol: float = FEASIBILITY_TOL) -> list:
        vals = self._values(point)
        if not self.is_member(vals, tol):
            raise InfeasiblePoint(f"point is not on the model locus: {vals}")
        return vals

    def bracket_matrix(self, point) -> list[list]:
        vals = self._values(point)
        n = self.size
        zero = Fraction(0) if all(is_exact(v) for v in vals) else 0.0
        out = [[zero] * n for _ in range(n)]
        pos = {name: i for i, name in enumerate(self.names)}
        for (a, b), poly in self.table.items():
            v = poly.evaluate(vals)
            out[pos[a]][pos[b]] = v
            out[pos[b]][pos[a]] = -v
        return out

    def relation_jacobian(self, point) -> list[list]:
        vals = self._values(point)
        return [r.gradient(vals) for r in self.relations]

    # -- structure -----------------------------------------------------------

    def permuted(self, order: Sequence[str]) -> PoissonModel:
        """The same model with generators listed in another order."""
        order = tuple(order)
        if sorted(order) != sorted(self.names):
            raise ValueError("order must be a permutation of the generator names")
        pos = {n: i for i, n in enumerate(order)}
        table = {}
        for (a, b), poly in self.table.items():
            poly = poly.embed(order)
            if pos[a] < pos[b]:
                table[(a, b)] = poly
            else:
                table[(b, a)] = -poly
        return PoissonModel(
            order,
            table,
            tuple(r.embed(order) for r in self.relations),
            tuple(g.embed(order) for g in self.inequalities),
            self.hilbert and {k: self.hilbert[k] for k in order},
            self.sampler,
            self.description,
        )

    def ambient_variables(self) -> tuple[str, ...]:
        if not self.hilbert:
            raise ValueError("model has no Hilbert map")
        return next(iter(self.hilbert.values())).variables

    def hilbert_image(self, ambient_point: dict) -> list:
        if not self.hilbert:
            raise ValueError("model has no Hilbert map")
        return [self.hilbert[n].evaluate(ambient_point) for n in self.names]

    def sample(self, rng: np.random.Generator) -> list:
        """A point of the locus: the Hilbert image of a sampled zero-locus point."""
        if self.sampler is None:
            raise ValueError("model has no zero-locus sampler")
        return self.hilbert_image(self.sampler(rng))


def product(first: PoissonModel, second: PoissonModel, description: str = "") -> PoissonModel:
    """Product Poisson model; generator names must be disjoint, factors Poisson-commute."""
    names = first.names + second.names
    table = {k: v.embed(names) for k, v in first.table.items()}
    table.update({k: v.embed(names) for k, v in second.table.items()})
    relations = tuple(r.embed(names) for r in first.relations + second.relations)
    inequalities = tuple(g.embed(names) for g in first.inequalities + second.inequalities)
    hilbert = sampler = None
    if first.hilbert and second.hilbert:
        ambient = tuple(v + "@1" for v in first.ambient_variables()) + tuple(
            v + "@2" for v in second.ambient_variables()
        )
        hilbert = {k: _tag(v, "@1").embed(ambient) for k, v in first.hilbert.items()}
        hilbert.update({k: _tag(v, "@2").embed(ambient) for k, v in second.hilbert.items()})
        if first.sampler and second.sampler:
            s1, s2 = first.sampler, second.sampler

            def sampler(rng):
                out = {k + "@1": v for k, v in s1(rng).items()}
                out.update({k + "@2": v for k, v in s2(rng).items()})
                return out

    return PoissonModel(names, table, relations, inequalities, hilbert, sampler, description)


# ---------------------------------------------------------------------------
# elementary models


def darboux_model(pairs: int, prefix: str = "") -> PoissonModel:
    """R^{2k} with {q_i, p_i} = -1, matching the canonical bracket convention."""
    space = PhaseSpace(pairs, 1)
    names = tuple(f"{prefix}q{i}" for i in range(1, pairs + 1)) + tuple(
        f"{prefix}p{i}" for i in range(1, pairs + 1)
    )
    table = {
        (f"{prefix}q{i}", f"{prefix}p{i}"): RationalPolynomial.constant(names, -1)
        for i in range(1, pairs + 1)
    }
    hilbert = {f"{prefix}{v[:-2]}": RationalPolynomial.variable(space.variables, v) for v in space.variables}

    def sampler(rng):
        return {v: random_fraction(rng) for v in space.variables}

    return PoissonModel(names, table, (), (), hilbert, sampler, f"Darboux R^{2 * pairs}")


def cone_model() -> PoissonModel:
    """Reduced space of one particle in the plane: x1^2 + x2^2 = rho^2, rho >= 0."""
    inv = planar_invariants()
    structure = closure_to_lie_algebra(inv)
    names = structure.names
    x1, x2, rho = RationalPolynomial.gens(names)
    hilbert = {k: inv.generators[k] for k in names}

    def sampler(rng):
        q, p = planar_zero_locus_sample(rng)
        return inv.space.point({"q1": q, "p1": p})

    return PoissonModel(
        names,
        table_in_generators(structure),
        (x1 * x1 + x2 * x2 - rho * rho,),
        (rho,),
        hilbert,
        sampler,
        "planar cone",
    )


# ---------------------------------------------------------------------------
# invariants of several vectors: generators and brackets from gradients


class VectorInvariantAlgebra:
    """Dot products and determinants of the vectors q1..qn, p1..pn in R^d.

    Brackets are computed from gradients: for invariants f, h,

        {f, h} = sum_i  grad_{p_i} f . grad_{q_i} h  -  grad_{q_i} f . grad_{p_i} h,

    and every dot product of gradient terms is again an invariant (a dot product,
    a determinant, or for d = 3 a product of two dot products).  So the table is
    produced directly as polynomials in the generators.
    """

    def __init__(self, n: int, d: int, determinants: bool):
        if d not in (2, 3):
            raise ValueError("only planar and spatial vectors are supported")
        self.n, self.d = n, d
        self.space = PhaseSpace(n, d)
        self.labels = self.space.labels
        self._pos = {v: i for i, v in enumerate(self.labels)}
        keys: list[tuple] = [("dot", a, b) for a, b in combinations_with_replacement(self.labels, 2)]
        if determinants:
            keys += [("det", *c) for c in combinations(self.labels, d)]
        self.keys = tuple(keys)
        self.names = tuple(self.name(k) for k in keys)
        self._index = {k: i for i, k in enumerate(keys)}

    @staticmethod
    def name(key: tuple) -> str:
        if key[0] == "dot":
            return f"{key[1]}.{key[2]}"
        return "det(" + ",".join(key[1:]) + ")"

    def generator(self, key: tuple) -> RationalPolynomial:
        return RationalPolynomial.variable(self.names, self.name(key))

    def _dot(self, a: str, b: str) -> RationalPolynomial:
        if self._pos[a] > self._pos[b]:
            a, b = b, a
        return self.generator(("dot", a, b))

    def _det(self, *labels: str) -> RationalPolynomial:
        if len(set(labels)) < len(labels):
            return RationalPolynomial.zero(self.names)
        order = sorted(range(len(labels)), key=lambda i: self._pos[labels[i]])
        key = ("det", *(labels[i] for i in order))
        if key not in self._index:
            raise KeyError(f"determinant {self.name(key)} is not a generator of this algebra")
        return self.generator(key).scale(_permutation_sign(order))

    # gradient atoms: ("v", x) is the vector x, ("rot", x) is (x2, -x1),
    # ("cross", x, y) is x cross y
    def gradient(self, key: tuple) -> dict[str, list[tuple[int, tuple]]]:
        out: dict[str, list[tuple[int, tuple]]] = {}

        def add(slot, coeff, atom):
            out.setdefault(slot, []).append((coeff, atom))

        if key[0] == "dot":
            _, a, b = key
            add(a, 1, ("v", b))
            add(b, 1, ("v", a))
        elif self.d == 2:
            _, a, b = key
            add(a, 1, ("rot", b))
            add(b, -1, ("rot", a))
        else:
            _, a, b, c = key
            add(a, 1, ("cross", b, c))
            add(b, 1, ("cross", c, a))
            add(c, 1, ("cross", a, b))
        return out

    def _pair(self, s: tuple, t: tuple) -> RationalPolynomial:
        if s[0] == "v" and t[0] == "v":
            return self._dot(s[1], t[1])
        if s[0] == "rot" and t[0] == "rot":
            return self._dot(s[1], t[1])
        if s[0] == "v" and t[0] == "rot":
            return self._det(s[1], t[1])
        if s[0] == "rot" and t[0] == "v":
            return self._det(t[1], s[1])
        if s[0] == "v" and t[0] == "cross":
            return self._det(s[1], t[1], t[2])
        if s[0] == "cross" and t[0] == "v":
            return self._det(t[1], s[1], s[2])
        # (a x b).(c x d) = (a.c)(b.d) - (a.d)(b.c)
        _, a, b = s
        _, c, e = t
        return self._dot(a, c) * self._dot(b, e) - self._dot(a, e) * self._dot(b, c)

    @staticmethod
    def _omega(s: str, t: str) -> int:
        # coefficient of grad_s f . grad_t h in {f, h}
        if s[1:] != t[1:]:
            return 0
        if s[0] == "p" and t[0] == "q":
            return 1
        if s[0] == "q" and t[0] == "p":
            return -1
        return 0

    def bracket(self, k1: tuple, k2: tuple) -> RationalPolynomial:
        g1, g2 = self.gradient(k1), self.gradient(k2)
        out = RationalPolynomial.zero(self.names)
        for s, terms1 in g1.items():
            for t, terms2 in g2.items():
                w = self._omega(s, t)
                if not w:
                    continue
                for c1, a1 in terms1:
                    for c2, a2 in terms2:
                        out = out + self._pair(a1, a2).scale(w * c1 * c2)
        return out

    def table(self) -> dict[tuple[str, str], RationalPolynomial]:
        out = {}
        for i, k1 in enumerate(self.keys):
            for k2 in self.keys[i + 1 :]:
                poly = self.bracket(k1, k2)
                if not poly.is_zero():
                    out[(self.name(k1), self.name(k2))] = poly
        return out

    def hilbert(self) -> dict[str, RationalPolynomial]:
        s = self.space
        out = {}
        for key in self.keys:
            vecs = [s.vector(x) for x in key[1:]]
            if key[0] == "dot":
                out[self.name(key)] = dot(*vecs)
            elif self.d == 2:
                out[self.name(key)] = det2(*vecs)
            else:
                out[self.name(key)] = det3(*vecs)
        return out

    def gram(self) -> list[list[RationalPolynomial]]:
        return [[self._dot(a, b) for b in self.labels] for a in self.labels]


def _planar_zero_momentum(rng: np.random.Generator, n: int) -> list[list[Fraction]]:
    """Rational q1..qn, p1..pn in R^2 with sum det(q_i, p_i) = 0."""

    def vec():
        return [random_fraction(rng) for _ in range(2)]

    qs, ps = [], []
    total = Fraction(0)
    for _ in range(n - 1):
        q, p = vec(), vec()
        qs.append(q)
        ps.append(p)
        total += q[0] * p[1] - q[1] * p[0]
    q = vec()
    while not any(q):
        q = vec()
    # det(q, t q + c (-q2, q1)) = c |q|^2
    c = -total / (q[0] * q[0] + q[1] * q[1])
    t = random_fraction(rng)
    p = [t * q[0] - c * q[1], t * q[1] + c * q[0]]
    return qs + [q] + ps + [p]


def planar_reduced_model(particles: int) -> PoissonModel:
    """Reduced space of m particles in the plane with total angular momentum zero.

    For a single particle this is the cone.  For m >= 2 the generators are all
    dot products and 2x2 determinants of the 2m vectors; relations are the
    vanishing momentum (linear) and the Lagrange identities
    (a.a)(b.b) - (a.b)^2 - det(a, b)^2 = 0.
    """
    if particles < 1:
        raise ValueError("need at least one particle")
    if particles == 1:
        return cone_model()
    alg = VectorInvariantAlgebra(particles, 2, determinants=True)
    ring = alg.names
    momentum = poly_sum((alg._det(f"q{i}", f"p{i}") for i in range(1, particles + 1)), ring)
    lagrange = tuple(
        alg._dot(a, a) * alg._dot(b, b) - alg._dot(a, b) ** 2 - alg._det(a, b) ** 2
        for a, b in combinations(alg.labels, 2)
    )
    lengths = tuple(alg._dot(a, a) for a in alg.labels)
    space = alg.space

    def sampler(rng):
        vecs = _planar_zero_momentum(rng, particles)
        return space.point(dict(zip(alg.labels, vecs)))

    return PoissonModel(
        ring,
        alg.table(),
        (momentum,) + lagrange,
        lengths,
        alg.hilbert(),
        sampler,
        f"{particles} particles in the plane, angular momentum zero",
    )


def spatial_reduced_model(particles: int) -> PoissonModel:
    """Reduced space of l particles in R^3 with total angular momentum zero.

    Generators: the dot products of q1..ql, p1..pl, and for l >= 3 also the
    triple determinants.  For l = 2 each determinant equals mu . v for a vector
    v and so vanishes on the zero locus; this recovers the ten generators of the
    two-particle case.  Relations:

    * the Gram matrix has rank at most 3 (all 4x4 minors),
    * G J G = 0, where J is the standard symplectic form on the particle index
      (this is mu = 0 read through the Gram matrix),
    * |mu|^2 = 0 written in dot products,
    * for l >= 3: sum_i det(q_i, p_i, v) = mu . v = 0 for each vector v, and
      det(a, b, c)^2 = det Gram(a, b, c).
    """
    if particles < 2:
        raise ValueError("the spatial model needs at least two particles")
    alg = VectorInvariantAlgebra(particles, 3, determinants=particles >= 3)
    ring = alg.names
    labels = alg.labels
    gram = alg.gram()
    n = len(labels)
    relations: list[RationalPolynomial] = []
    if particles >= 3:
        for v in labels:
            relations.append(
                poly_sum((alg._det(f"q{i}", f"p{i}", v) for i in range(1, particles + 1)), ring)
            )
    for rows in combinations(range(n), 4):
        for cols in combinations(range(n), 4):
            relations.append(determinant([[gram[i][j] for j in cols] for i in rows]))
    # J_{q_i p_i} = 1, J_{p_i q_i} = -1, so column p_i of G J is G_{., q_i} and column q_i is -G_{., p_i}
    partner = {lab: labels.index(("p" if lab[0] == "q" else "q") + lab[1:]) for lab in labels}
    gj = [
        [gram[a][partner[lab]] if lab[0] == "p" else -gram[a][partner[lab]] for lab in labels]
        for a in range(n)
    ]
    for a in range(n):
        for b in range(a + 1, n):
            relations.append(poly_sum((gj[a][c] * gram[c][b] for c in range(n)), ring))
    mu_sq = RationalPolynomial.zero(ring)
    for i in range(1, particles + 1):
        for j in range(1, particles + 1):
            qi, pi, qj, pj = f"q{i}", f"p{i}", f"q{j}", f"p{j}"
            mu_sq = mu_sq + alg._dot(qi, qj) * alg._dot(pi, pj) - alg._dot(qi, pj) * alg._dot(pi, qj)
    relations.append(mu_sq)
    if particles >= 3:
        for trip in combinations(labels, 3):
            g3 = determinant([[alg._dot(a, b) for b in trip] for a in trip])
            relations.append(alg._det(*trip) ** 2 - g3)
    lengths = tuple(alg._dot(a, a) for a in labels)
    space = alg.space

    def sampler(rng):
        vecs = zero_momentum_configuration(rng, particles)
        return space.point(dict(zip(labels, vecs)))

    return PoissonModel(
        ring,
        alg.table(),
        tuple(r for r in relations if not r.is_zero()),
        lengths,
        alg.hilbert(),
        sampler,
        f"{particles} particles in space, angular momentum zero",
    )


# ---------------------------------------------------------------------------
# local models per stratum


@dataclass(frozen=True)
class LocalModelSpec:
    genus: int
    stratum: StratumLabel
    model: PoissonModel = field(repr=False)
    h1_dim: int
    top_dimension: int
    free_dimension: int

    @property
    def base_point(self) -> list[Fraction]:
        return [Fraction(0)] * self.model.size


@lru_cache(maxsize=None)
def local_model(genus: int, stratum: StratumLabel | str) -> LocalModelSpec:
    stratum = StratumLabel(stratum)
    if genus < 2:
        raise ValueError("local models are defined for genus >= 2")
    top = 6 * genus - 6
    if stratum == StratumLabel.Z:
        model = darboux_model(3 * (genus - 1))
        return LocalModelSpec(genus, stratum, model, top, top, top)
    if stratum == StratumLabel.T:
        model = product(
            darboux_model(genus, prefix="t"),
            planar_reduced_model(genus - 1),
            f"C^{genus} x reduced planar system of {genus - 1} particles",
        )
        return LocalModelSpec(genus, stratum, model, top + 2, top, 2 * genus)
    model = spatial_reduced_model(genus)
    return LocalModelSpec(genus, stratum, model, top + 6, top, 0)


# ---------------------------------------------------------------------------
# detectors


def _all_exact(vals) -> bool:
    return all(is_exact(v) for v in vals)


def _cotangent_basis(model: PoissonModel, vals) -> tuple[list[list], bool]:
    """Columns spanning the kernel of the relation Jacobian at the point."""
    jac = model.relation_jacobian(vals)
    n = model.size
    rows = [r for r in jac if any(x != 0 for x in r)]
    if _all_exact(vals):
        return exact.nullspace(rows, n), True
    if not rows:
        return [[float(i == j) for j in range(n)] for i in range(n)], False
    from repspace.lie import kernel_basis

    k = kernel_basis(np.array(rows, dtype=float))
    return [list(col) for col in k.T], False


def zariski_tangent_dim(model: PoissonModel, point, tol: float = FEASIBILITY_TOL) -> int:
    vals = model.require_member(point, tol)
    rows = [r for r in model.relation_jacobian(vals) if any(x != 0 for x in r)]
    if not rows:
        return model.size
    if _all_exact(vals):
        return model.size - exact.rank(rows)
    return model.size - numeric_rank(np.array(rows, dtype=float))


def poisson_rank_at(model: PoissonModel, point, tol: float = FEASIBILITY_TOL) -> int:
    """Rank of the bracket matrix as a form on the Zariski cotangent space at the point.

    With N spanning the kernel of the relation Jacobian, this is rank(N^T Pi N).
    """
    vals = model.require_member(point, tol)
    basis, is_exact_basis = _cotangent_basis(model, vals)
    if not basis:
        return 0
    pi = model.bracket_matrix(vals)
    if is_exact_basis:
        nt = basis
        n = exact.transpose(basis)
        restricted = exact.matmul(exact.matmul(nt, pi), n)
        if all(x == 0 for row in restricted for x in row):
            return 0
        return exact.rank(restricted)
    nmat = np.array(basis, dtype=float).T
    restricted = nmat.T @ np.array(pi, dtype=float) @ nmat
    if not np.any(restricted):
        return 0
    return numeric_rank(restricted)


def semialgebraic_member(model: PoissonModel, point, tol: float = FEASIBILITY_TOL) -> bool:
    try:
        return model.is_member(point, tol)
    except (ValueError, KeyError):
        return False


def linear_span_dim(model: PoissonModel, samples: int = 60, seed: int = 0) -> int:
    """Rank of the generator values over sampled zero-locus points, in exact arithmetic.

    This is the number of linearly independent generator functions on the locus.
    For generators that are homogeneous of degree >= 2 it certifies the tangent
    dimension at the base point from the ambient side.
    """
    rng = np.random.default_rng(seed)
    rows = [model.sample(rng) for _ in range(samples)]
    return exact.rank(rows)


# ---------------------------------------------------------------------------
# reports

REPORT_COLUMNS = (
    "genus",
    "stratum",
    "h0",
    "h1",
    "h2",
    "lambda_kernel",
    "lambda_image",
    "poisson_rank",
    "tangent_dim",
)


def stratum_row(genus: int, stratum: StratumLabel | str, seed: int = 0) -> dict:
    stratum = StratumLabel(stratum)
    rep = solve_flat(genus, stratum, seed=seed)
    summary = cohomology_summary(rep)
    spec = local_model(genus, stratum)
    base = spec.base_point
    return {
        "genus": genus,
        "stratum": stratum.value,
        "h0": summary["h0"],
        "h1": summary["h1"],
        "h2": summary["h2"],
        "lambda_kernel": summary["lambda"]["kernel"],
        "lambda_image": summary["lambda"]["image"],
        "poisson_rank": poisson_rank_at(spec.model, base),
        "tangent_dim": zariski_tangent_dim(spec.model, base),
    }


def _row_task(args):
    return stratum_row(*args)


def stratum_report(genus: int, seed: int = 0, jobs: int = 1) -> list[dict]:
    if not 2 <= genus <= 4:
        raise ValueError("stratum reports cover genus 2..4")
    tasks = [(genus, s, seed) for s in (StratumLabel.Z, StratumLabel.T, StratumLabel.G)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_task, tasks))
    return [_row_task(t) for t in tasks]


def report_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in REPORT_COLUMNS})
    return buf.getvalue()


def cone_point(theta: float, rho: float) -> list[float]:
    """A point of the upper cone in polar form."""
    return [rho * math.cos(theta), rho * math.sin(theta), rho]
