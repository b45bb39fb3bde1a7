"""Exact multivariate polynomials over the rationals."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from numbers import Rational

Monomial = tuple[int, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class RationalPolynomial:
    """Sparse polynomial: map from exponent vectors over ``variables`` to Fractions.

    Instances are treated as immutable.  Arithmetic between polynomials requires
    identical variable tuples; use :meth:`embed` to move between rings.
    """

    __slots__ = ("variables", "terms", "_index")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        n = len(self.variables)
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n:
                raise ValueError(f"monomial {mono} does not match {n} variables")
            c = as_fraction(c)
            if c != 0:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if clean[mono] == 0:
                    del clean[mono]
        self.terms = clean
        self._index = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> RationalPolynomial:
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> RationalPolynomial:
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> RationalPolynomial:
        variables = tuple(variables)
        mono = [0] * len(variables)
        mono[cls._position(variables, name)] = 1
        return cls(variables, {tuple(mono): 1})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> list[RationalPolynomial]:
        return [cls.variable(variables, v) for v in variables]

    @staticmethod
    def _position(variables: tuple[str, ...], name: str) -> int:
        try:
            return variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def index(self, name: str) -> int:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.variables)}
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.variables))

    def support(self) -> set[str]:
        return {self.variables[i] for m in self.terms for i, e in enumerate(m) if e}

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> RationalPolynomial:
        if isinstance(other, RationalPolynomial):
            if other.variables != self.variables:
                raise ValueError("polynomials live in different rings")
            return other
        return RationalPolynomial.constant(self.variables, as_fraction(other))

    def __add__(self, other) -> RationalPolynomial:
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return RationalPolynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> RationalPolynomial:
        return RationalPolynomial(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> RationalPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalPolynomial:
        return self._coerce(other) - self

    def scale(self, c) -> RationalPolynomial:
        c = as_fraction(c)
        return RationalPolynomial(self.variables, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> RationalPolynomial:
        if not isinstance(other, RationalPolynomial):
            return self.scale(other)
        other = self._coerce(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return RationalPolynomial(self.variables, terms)

    def __rmul__(self, other) -> RationalPolynomial:
        return self.scale(other)

    def __truediv__(self, c) -> RationalPolynomial:
        return self.scale(1 / as_fraction(c))

    def __pow__(self, k: int) -> RationalPolynomial:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = RationalPolynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus and evaluation -------------------------------------------

    def derivative(self, name: str) -> RationalPolynomial:
        i = self.index(name)
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                dm = list(m)
                dm[i] = e - 1
                terms[tuple(dm)] = c * e
        return RationalPolynomial(self.variables, terms)

    def _point(self, point) -> Sequence:
        if isinstance(point, Mapping):
            missing = [v for v in self.variables if v not in point]
            if missing:
                raise KeyError(f"no value for variables {missing}")
            return [point[v] for v in self.variables]
        point = list(point)
        if len(point) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(point)}")
        return point

    def evaluate(self, point):
        """Evaluate at a point; exact when all coordinates are int or Fraction."""
        vals = self._point(point)
        exact = all(is_exact(v) for v in vals)
        total = Fraction(0) if exact else 0.0
        for m, c in self.terms.items():
            term = c if exact else float(c)
            for i, e in enumerate(m):
                if e:
                    if vals[i] == 0:
                        break
                    term = term * vals[i] ** e
            else:
                total = total + term
        return total

    def gradient(self, point) -> list:
        """All first partial derivatives at a point, in variable order."""
        vals = self._point(point)
        exact = all(is_exact(v) for v in vals)
        grad = [Fraction(0) if exact else 0.0 for _ in vals]
        for m, c in self.terms.items():
            cc = c if exact else float(c)
            support = [(i, e) for i, e in enumerate(m) if e]
            zeros = sum(1 for i, e in support if vals[i] == 0 and e > 0)
            if zeros > 1:
                continue
            for i, e in support:
                term = cc * e
                for j, f in support:
                    p = f - 1 if j == i else f
                    if p:
                        if vals[j] == 0:
                            break
                        term = term * vals[j] ** p
                else:
                    grad[i] = grad[i] + term
        return grad

    def substitute(self, mapping: Mapping[str, RationalPolynomial]) -> RationalPolynomial:
        """Replace every variable by a polynomial; all images must share one ring."""
        images = [mapping[v] for v in self.variables]
        if not images:
            raise ValueError("cannot substitute into a polynomial without variables")
        target = images[0].variables
        out = RationalPolynomial.zero(target)
        powers: dict[tuple[int, int], RationalPolynomial] = {}
        for m, c in self.terms.items():
            term = RationalPolynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = images[i] ** e
                    term = term * powers[(i, e)]
            out = out + term
        return out

    def embed(self, variables: Sequence[str]) -> RationalPolynomial:
        """The same polynomial viewed in a ring whose variables include ours."""
        variables = tuple(variables)
        pos = [RationalPolynomial._position(variables, v) for v in self.variables]
        n = len(variables)
        terms = {}
        for m, c in self.terms.items():
            nm = [0] * n
            for p, e in zip(pos, m):
                nm[p] = e
            terms[tuple(nm)] = c
        return RationalPolynomial(variables, terms)

    # -- printing -----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        # graded, then lexicographic in variable order, highest first
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def _monomial_text(self, m: Monomial) -> str:
        parts = []
        for v, e in zip(self.variables, m):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            mono = self._monomial_text(m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"RationalPolynomial({str(self)!r})"


def poly_sum(polys: Iterable[RationalPolynomial], variables: Sequence[str]) -> RationalPolynomial:
    out = RationalPolynomial.zero(variables)
    for p in polys:
        out = out + p
    return out
