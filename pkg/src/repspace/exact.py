"""Exact linear algebra over Q, backed by sympy's DomainMatrix."""

from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from repspace.poly import as_fraction


def _to_qq(x):
    f = as_fraction(x)
    return QQ(f.numerator, f.denominator)


def _from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def domain_matrix(rows) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        raise ValueError("empty matrix")
    return DomainMatrix([[_to_qq(x) for x in r] for r in rows], (len(rows), len(rows[0])), QQ)


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return domain_matrix(rows).rank()


def nullspace(rows, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}; an empty row list means the whole space."""
    rows = [list(r) for r in rows]
    if not rows:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = domain_matrix(rows).nullspace().to_Matrix()
    return [[Fraction(int(x.p), int(x.q)) for x in ns.row(i)] for i in range(ns.rows)]


def solve(rows, rhs) -> list[Fraction] | None:
    """One solution of A x = b, or None when the system is inconsistent."""
    rows = [list(r) for r in rows]
    n = len(rows[0])
    aug = domain_matrix([r + [b] for r, b in zip(rows, rhs)])
    red, pivots = aug.rref()
    if n in pivots:
        return None
    red = red.to_list()
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = _from_qq(red[i][n]) / _from_qq(red[i][p])
    return x


def pivot_rows(rows) -> list[int]:
    """Indices of a maximal set of linearly independent rows, earliest first."""
    _, pivots = domain_matrix(rows).transpose().rref()
    return list(pivots)


def inverse(rows) -> list[list[Fraction]]:
    inv = domain_matrix(rows).inv().to_list()
    return [[_from_qq(x) for x in r] for r in inv]


def matmul(a, b) -> list[list[Fraction]]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def transpose(a) -> list[list]:
    return [list(c) for c in zip(*a)]
