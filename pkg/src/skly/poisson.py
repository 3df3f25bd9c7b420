"""Exact Poisson brackets on the rank-2 coordinates t0..t3.

The reference bracket is the Jacobian (Nambu) bracket

    {f, g} = det d(C1, C2, f, g) / d(t0, t1, t2, t3)

built from two Casimirs.  Everything here is exact in Q[J31, J32][t].
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Mapping, Sequence

import numpy as np

from .errors import VariableMismatch
from .polynomial import J, ParamPolynomial, t


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(rows: Sequence[Sequence[ParamPolynomial]]) -> ParamPolynomial:
    """Leibniz expansion of a square matrix of polynomials."""
    n = len(rows)
    total = ParamPolynomial.zero(rows[0][0].variables, rows[0][0].params)
    for perm in permutations(range(n)):
        term = ParamPolynomial.constant(_perm_sign(perm), total.variables, total.params)
        for i, j in enumerate(perm):
            entry = rows[i][j]
            if entry.is_zero():
                break
            term = term * entry
        else:
            total = total + term
    return total


def sklyanin_casimirs() -> tuple[ParamPolynomial, ParamPolynomial]:
    """The two determinant components t0^2 + J31 t1^2 + J32 t2^2 and t1^2 + t2^2 + t3^2."""
    c1 = t(0) ** 2 + J("J31") * t(1) ** 2 + J("J32") * t(2) ** 2
    c2 = t(1) ** 2 + t(2) ** 2 + t(3) ** 2
    return c1, c2


def jacobian_bracket(c1: ParamPolynomial, c2: ParamPolynomial,
                     f: ParamPolynomial, g: ParamPolynomial) -> ParamPolynomial:
    polys = (c1, c2, f, g)
    for p in polys[1:]:
        if p.variables != c1.variables or p.params != c1.params:
            raise VariableMismatch("jacobian_bracket inputs use different variables")
    if c1.nvars != 4:
        raise VariableMismatch("the Jacobian bracket needs exactly four variables")
    return determinant([p.gradient() for p in polys])


@dataclass(frozen=True)
class QuadraticBivector:
    """Antisymmetric 4x4 matrix of polynomials; entry (a, b) is {t_a, t_b}."""

    components: tuple[tuple[ParamPolynomial, ...], ...]

    def __post_init__(self):
        comps = tuple(tuple(row) for row in self.components)
        n = len(comps)
        if any(len(row) != n for row in comps):
            raise ValueError("bivector components must form a square matrix")
        for a in range(n):
            if not comps[a][a].is_zero():
                raise ValueError(f"diagonal entry ({a},{a}) is not zero")
            for b in range(a + 1, n):
                if comps[a][b] != -comps[b][a]:
                    raise ValueError(f"entries ({a},{b}) and ({b},{a}) are not antisymmetric")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_upper(cls, upper: Mapping[tuple[int, int], ParamPolynomial], n: int = 4) -> "QuadraticBivector":
        zero = ParamPolynomial.zero()
        rows = [[zero] * n for _ in range(n)]
        for (a, b), p in upper.items():
            rows[a][b] = p
            rows[b][a] = -p
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_casimirs(cls, c1: ParamPolynomial, c2: ParamPolynomial) -> "QuadraticBivector":
        coords = [t(i) for i in range(4)]
        upper = {}
        for a, b in combinations(range(4), 2):
            entry = jacobian_bracket(c1, c2, coords[a], coords[b])
            if not entry.is_homogeneous(2):
                raise ValueError(f"entry ({a},{b}) is not quadratic; Casimirs must be quadratic")
            upper[(a, b)] = entry
        return cls.from_upper(upper)

    @property
    def size(self) -> int:
        return len(self.components)

    def bracket(self, f: ParamPolynomial, g: ParamPolynomial) -> ParamPolynomial:
        """{f, g} = sum_ab df/dt_a * pi^{ab} * dg/dt_b."""
        total = ParamPolynomial.zero(f.variables, f.params)
        df, dg = f.gradient(), g.gradient()
        for a in range(self.size):
            if df[a].is_zero():
                continue
            for b in range(self.size):
                pi = self.components[a][b]
                if pi.is_zero() or dg[b].is_zero():
                    continue
                total = total + df[a] * pi * dg[b]
        return total

    def evaluate(self, tvals: Sequence, params: Mapping[str, object] | Sequence | None = None) -> np.ndarray:
        """Numeric matrix of the bivector at t with numeric parameter values."""
        n = self.size
        out = np.zeros((n, n), dtype=complex)
        for a in range(n):
            for b in range(n):
                if not self.components[a][b].is_zero():
                    out[a, b] = complex(self.components[a][b](tvals, params))
        return out

    def to_text(self) -> dict[str, str]:
        return {f"{{t{a},t{b}}}": self.components[a][b].to_text()
                for a, b in combinations(range(self.size), 2)}


def sklyanin_bivector() -> QuadraticBivector:
    return QuadraticBivector.from_casimirs(*sklyanin_casimirs())


def schouten_jacobi_residual(b: QuadraticBivector) -> list[ParamPolynomial]:
    """Jacobiators {t_a,{t_b,t_c}} + cyclic for every a < b < c.

    The list is all zero exactly when the bivector is Poisson.
    """
    coords = [t(i) for i in range(b.size)]
    out = []
    for i, j, k in combinations(range(b.size), 3):
        total = (b.bracket(coords[i], b.components[j][k])
                 + b.bracket(coords[j], b.components[k][i])
                 + b.bracket(coords[k], b.components[i][j]))
        out.append(total)
    return out


def casimir_residual(b: QuadraticBivector, f: ParamPolynomial) -> list[ParamPolynomial]:
    """The brackets {f, t_a} for a = 0..3."""
    return [b.bracket(f, t(a)) for a in range(b.size)]
