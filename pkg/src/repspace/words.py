"""Word map of the standard surface-group presentation, its derivative, and flat solutions.

Generators are numbered 1..2g in the order x1, y1, x2, y2, ...; a word is a tuple
of nonzero ints with -k standing for the inverse of generator k.  The relator is
[x1, y1] ... [xg, yg] with [a, b] = a b a^-1 b^-1.

Tangent vectors are right-trivialized: a perturbation of generator i in the
direction u_i is A_i -> exp(t u_i) A_i.  With this convention the derivative of
the word map is dr(u) = sum_i Ad(rho(dr/dx_i)) u_i, where dr/dx_i is the Fox
derivative and rho extends the representation linearly to the group ring.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from repspace.lie import (
    GroupElement,
    distance_to_identity,
    qconj,
    qexp,
    qmul,
    qnormalize,
    rotation_matrix,
)

CLASSIFY_TOL = 1e-8
SOLVE_TOL = 1e-10
STEP_BUDGET = 100_000

Word = tuple[int, ...]


class StratumLabel(str, enum.Enum):
    """Conjugacy class of the stabilizer: center, maximal torus, or all of SU(2)."""

    Z = "Z"
    T = "T"
    G = "G"


class SolverError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (final residual {residual:.3e})")
        self.residual = residual


# ---------------------------------------------------------------------------
# free group words and Fox calculus


def reduce_word(word: Word) -> Word:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def invert_word(word: Word) -> Word:
    return tuple(-letter for letter in reversed(word))


def commutator_word(a: Word, b: Word) -> Word:
    return reduce_word(a + b + invert_word(a) + invert_word(b))


def fox_derivative(word: Word, gen: int) -> dict[Word, int]:
    """Fox derivative d(word)/d(gen) as a group-ring element {word: coefficient}.

    Uses d(uv) = du + u dv, d(x)/dx = 1 and d(x^-1)/dx = -x^-1.
    """
    if gen <= 0:
        raise ValueError("differentiate with respect to a positive generator index")
    result: dict[Word, int] = {}
    prefix: Word = ()
    for letter in word:
        if letter == gen:
            key = reduce_word(prefix)
            result[key] = result.get(key, 0) + 1
        prefix = prefix + (letter,)
        if letter == -gen:
            key = reduce_word(prefix)
            result[key] = result.get(key, 0) - 1
    return {w: c for w, c in result.items() if c != 0}


@dataclass(frozen=True)
class Presentation:
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be at least 1")

    @property
    def n_generators(self) -> int:
        return 2 * self.genus

    @cached_property
    def relator(self) -> Word:
        word: Word = ()
        for i in range(self.genus):
            word += commutator_word((2 * i + 1,), (2 * i + 2,))
        return word

    @cached_property
    def fox_derivatives(self) -> tuple[dict[Word, int], ...]:
        return tuple(fox_derivative(self.relator, k) for k in range(1, self.n_generators + 1))

    @cached_property
    def _fox_prefix_terms(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # every word in a Fox derivative of the relator is one of its prefixes
        prefixes = {self.relator[:k]: k for k in range(len(self.relator) + 1)}
        return tuple(
            tuple(sorted((prefixes[w], c) for w, c in d.items())) for d in self.fox_derivatives
        )


@lru_cache(maxsize=None)
def presentation(genus: int) -> Presentation:
    return Presentation(genus)


# ---------------------------------------------------------------------------
# representations


def _letter_image(phi: np.ndarray, letter: int) -> np.ndarray:
    q = phi[abs(letter) - 1]
    return q if letter > 0 else qconj(q)


def evaluate_word(phi: np.ndarray, word: Word) -> np.ndarray:
    out = np.array([1.0, 0.0, 0.0, 0.0])
    for letter in word:
        out = qmul(out, _letter_image(phi, letter))
    return out


def _prefix_products(phi: np.ndarray, word: Word) -> list[np.ndarray]:
    out = [np.array([1.0, 0.0, 0.0, 0.0])]
    for letter in word:
        out.append(qmul(out[-1], _letter_image(phi, letter)))
    return out


def _relator_and_derivative(phi: np.ndarray, pres: Presentation) -> tuple[np.ndarray, np.ndarray]:
    prefixes = _prefix_products(phi, pres.relator)
    rotations: dict[int, np.ndarray] = {}
    jac = np.zeros((3, 3 * pres.n_generators))
    for i, terms in enumerate(pres._fox_prefix_terms):
        block = np.zeros((3, 3))
        for k, coeff in terms:
            if k not in rotations:
                rotations[k] = rotation_matrix(prefixes[k])
            block += coeff * rotations[k]
        jac[:, 3 * i : 3 * i + 3] = block
    return prefixes[-1], jac


@dataclass(frozen=True)
class Representation:
    """Images (A1, B1, ..., Ag, Bg) of the standard generators in SU(2)."""

    images: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.images) == 0 or len(self.images) % 2:
            raise ValueError("a representation needs an even, positive number of images")
        for g in self.images:
            if abs(g.norm() - 1.0) > 1e-9:
                raise ValueError(f"image {g} is not a unit quaternion")

    @classmethod
    def from_array(cls, phi) -> Representation:
        phi = np.asarray(phi, dtype=float).reshape(-1, 4)
        return cls(tuple(GroupElement.from_array(q) for q in phi))

    @property
    def genus(self) -> int:
        return len(self.images) // 2

    @property
    def presentation(self) -> Presentation:
        return presentation(self.genus)

    def as_array(self) -> np.ndarray:
        return np.array([g.as_array() for g in self.images])

    @property
    def residual(self) -> float:
        return distance_to_identity(evaluate_word(self.as_array(), self.presentation.relator))

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "images": [[g.w, g.x, g.y, g.z] for g in self.images],
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Representation:
        rep = cls(tuple(GroupElement(*map(float, q)) for q in data["images"]))
        if "genus" in data and int(data["genus"]) != rep.genus:
            raise ValueError("genus does not match the number of images")
        return rep

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> Representation:
        return cls.from_dict(json.loads(text))


def evaluate_relator(rep: Representation) -> GroupElement:
    q = evaluate_word(rep.as_array(), rep.presentation.relator)
    return GroupElement.from_array(q)


def relator_derivative(rep: Representation) -> np.ndarray:
    """Right-trivialized differential of the word map, a 3 x 6g matrix."""
    return _relator_and_derivative(rep.as_array(), rep.presentation)[1]


def conjugate(rep: Representation, g: GroupElement) -> Representation:
    a = g.as_array()
    ainv = qconj(a)
    return Representation.from_array([qmul(qmul(a, q), ainv) for q in rep.as_array()])


def _is_central(q: np.ndarray, tol: float) -> bool:
    return min(np.linalg.norm(q - [1, 0, 0, 0]), np.linalg.norm(q + [1, 0, 0, 0])) <= tol


def orbit_type(rep: Representation, tol: float = CLASSIFY_TOL) -> StratumLabel:
    if rep.residual > tol:
        raise ValueError(f"not a flat representation: residual {rep.residual:.3e} > {tol}")
    phi = rep.as_array()
    if all(_is_central(q, tol) for q in phi):
        return StratumLabel.G
    for i in range(len(phi)):
        for j in range(i + 1, len(phi)):
            comm = qmul(qmul(phi[i], phi[j]), qmul(qconj(phi[i]), qconj(phi[j])))
            if distance_to_identity(comm) > tol:
                return StratumLabel.Z
    return StratumLabel.T


def enumerate_central(genus: int) -> list[Representation]:
    presentation(genus)
    reps = []
    for signs in product((1.0, -1.0), repeat=2 * genus):
        reps.append(Representation(tuple(GroupElement(s, 0.0, 0.0, 0.0) for s in signs)))
    return reps


def torus_representation(angles) -> Representation:
    """Images exp(theta_k e3); abelian, so the relator holds exactly."""
    return Representation.from_array([qexp(np.array([0.0, 0.0, t])) for t in angles])


# ---------------------------------------------------------------------------
# solver


def _objective(q: np.ndarray) -> float:
    d = distance_to_identity(q)
    return d * d


def descend(
    phi: np.ndarray,
    pres: Presentation,
    tol: float = SOLVE_TOL,
    budget: int = STEP_BUDGET,
) -> tuple[np.ndarray, float, int]:
    """Projected gradient descent on |r(phi) - e|^2 over products of unit quaternions.

    Returns the final images, residual and the number of steps taken.
    """
    n = pres.n_generators
    phi = np.array([qnormalize(q) for q in phi])
    r, jac = _relator_and_derivative(phi, pres)
    f = _objective(r)
    step = 0.5
    for it in range(budget):
        if math.sqrt(f) <= tol:
            return phi, math.sqrt(f), it
        # d/dt |exp(t xi) r - e|^2 = 2 <xi, Im r>
        grad = 2.0 * jac.T @ r[1:]
        g2 = float(grad @ grad)
        if g2 == 0.0:
            break
        while True:
            u = -step * grad
            trial = np.array([qnormalize(qmul(qexp(u[3 * i : 3 * i + 3]), phi[i])) for i in range(n)])
            r_trial = evaluate_word(trial, pres.relator)
            f_trial = _objective(r_trial)
            if f_trial <= f - 1e-4 * step * g2 or f_trial == 0.0:
                break
            step *= 0.5
            if step < 1e-20:
                return phi, math.sqrt(f), it
        phi = trial
        r, jac = _relator_and_derivative(phi, pres)
        f = f_trial
        step = min(step * 2.0, 10.0)
    return phi, math.sqrt(f), budget


def solve_flat(
    genus: int,
    target: StratumLabel | str,
    seed: int = 0,
    tol: float = SOLVE_TOL,
    budget: int = STEP_BUDGET,
    attempts: int = 5,
) -> Representation:
    target = StratumLabel(target)
    if target != StratumLabel.G and genus < 2:
        raise ValueError(f"target {target.value} requires genus >= 2")
    pres = presentation(genus)
    rng = np.random.default_rng(seed)

    if target == StratumLabel.G:
        reps = enumerate_central(genus)
        return reps[int(rng.integers(len(reps)))]

    if target == StratumLabel.T:
        while True:
            angles = rng.uniform(0.0, 2 * math.pi, size=2 * genus)
            if np.max(np.abs(np.sin(angles))) > 0.1:
                break
        return torus_representation(angles)

    last = math.inf
    for _ in range(attempts):
        start = rng.normal(size=(pres.n_generators, 4))
        # aim well below tol so that renormalizing the images cannot push it over
        phi, residual, _ = descend(start, pres, tol * 1e-2, budget)
        last = residual
        if residual > tol:
            continue
        rep = Representation.from_array(phi)
        # normalization inside from_array can move the residual by an ulp
        if rep.residual <= tol and orbit_type(rep) == StratumLabel.Z:
            return rep
    raise SolverError(f"no irreducible solution after {attempts} starts", last)
