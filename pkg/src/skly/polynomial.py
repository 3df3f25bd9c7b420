"""Sparse multivariate polynomials over Q extended by formal parameters.

A :class:`ParamPolynomial` lives in Q[J31, J32][t0, t1, t2, t3].  Terms are
stored flat, keyed by the exponent tuple ``(t-exponents..., J-exponents...)``,
with exact :class:`fractions.Fraction` coefficients and no stored zeros.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import ParseError, VariableMismatch

T_VARS = ("t0", "t1", "t2", "t3")
J_PARAMS = ("J31", "J32")


def _grlex_key(exps: Sequence[int]):
    return (sum(exps), tuple(exps))


class ParamPolynomial:
    __slots__ = ("terms", "variables", "params")

    def __init__(
        self,
        terms: Mapping[tuple[int, ...], object] | None = None,
        variables: tuple[str, ...] = T_VARS,
        params: tuple[str, ...] = J_PARAMS,
    ):
        self.variables = tuple(variables)
        self.params = tuple(params)
        width = len(self.variables) + len(self.params)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != width or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for {width} symbols")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, variables=T_VARS, params=J_PARAMS) -> "ParamPolynomial":
        width = len(variables) + len(params)
        return cls({(0,) * width: c}, variables, params)

    @classmethod
    def var(cls, name: str, variables=T_VARS, params=J_PARAMS) -> "ParamPolynomial":
        symbols = tuple(variables) + tuple(params)
        exps = [0] * len(symbols)
        exps[symbols.index(name)] = 1
        return cls({tuple(exps): 1}, variables, params)

    @classmethod
    def zero(cls, variables=T_VARS, params=J_PARAMS) -> "ParamPolynomial":
        return cls({}, variables, params)

    # -- helpers --------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.variables + self.params

    def _check(self, other: "ParamPolynomial") -> None:
        if self.variables != other.variables or self.params != other.params:
            raise VariableMismatch(
                f"{self.variables}+{self.params} vs {other.variables}+{other.params}"
            )

    def _coerce(self, other) -> "ParamPolynomial":
        if isinstance(other, ParamPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPolynomial.constant(other, self.variables, self.params)
        raise TypeError(f"cannot combine ParamPolynomial with {type(other).__name__}")

    def _new(self, terms) -> "ParamPolynomial":
        return ParamPolynomial(terms, self.variables, self.params)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = ParamPolynomial.constant(1, self.variables, self.params)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPolynomial.constant(other, self.variables, self.params)
        if not isinstance(other, ParamPolynomial):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.params == other.params
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, self.params, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus and structure -------------------------------------------------

    def diff(self, var: int | str) -> "ParamPolynomial":
        """Partial derivative with respect to a variable (index or name)."""
        i = self.symbols.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return self._new(out)

    def gradient(self) -> list["ParamPolynomial"]:
        return [self.diff(i) for i in range(self.nvars)]

    def t_degrees(self) -> set[int]:
        return {sum(e[: self.nvars]) for e in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        """True if every term has total t-degree ``degree`` (the zero polynomial qualifies)."""
        return self.t_degrees() <= {degree}

    def coefficient(self, t_exponents: Sequence[int]) -> "ParamPolynomial":
        """Coefficient of a t-monomial, as a polynomial in the parameters only."""
        t_exponents = tuple(t_exponents)
        k = self.nvars
        out = {}
        for e, c in self.terms.items():
            if e[:k] == t_exponents:
                out[(0,) * k + e[k:]] = c
        return self._new(out)

    def substitute_params(self, values: Mapping[str, object]) -> "ParamPolynomial":
        """Substitute exact values (int/Fraction) for some parameters."""
        k = self.nvars
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for j, name in enumerate(self.params):
                if name in values:
                    c = c * Fraction(values[name]) ** e[k + j]
                    e2[k + j] = 0
            e2 = tuple(e2)
            out[e2] = out.get(e2, Fraction(0)) + c
        return self._new(out)

    def __call__(self, t: Sequence, params: Mapping[str, object] | Sequence | None = None):
        """Numeric (or exact) evaluation at t with parameter values."""
        if params is None:
            params = {}
        if not isinstance(params, Mapping):
            params = dict(zip(self.params, params))
        values = list(t) + [params.get(name, 0) for name in self.params]
        if len(values) != len(self.symbols):
            raise VariableMismatch(f"expected {self.nvars} coordinates, got {len(t)}")
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(values, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    # -- canonical ordering and text ---------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lex order on t (descending), then graded-lex on the parameters."""
        k = self.nvars
        return sorted(
            self.terms.items(),
            key=lambda item: (_grlex_key(item[0][:k]), _grlex_key(item[0][k:])),
            reverse=True,
        )

    def to_text(self) -> str:
        """Canonical text, e.g. ``(-1/2)*t0^2 + (4)*J32*t2*t3``."""
        if not self.terms:
            return "0"
        k = self.nvars
        pieces = []
        for e, c in self.sorted_terms():
            factors = [f"({c})"]
            order = list(range(k, len(e))) + list(range(k))
            for i in order:
                if e[i] == 1:
                    factors.append(self.symbols[i])
                elif e[i] > 1:
                    factors.append(f"{self.symbols[i]}^{e[i]}")
            pieces.append("*".join(factors))
        return " + ".join(pieces)

    __str__ = to_text

    def __repr__(self):
        return f"ParamPolynomial({self.to_text()!r})"

    _TERM = re.compile(r"\s*\((-?\d+(?:/\d+)?)\)((?:\*[A-Za-z]\w*(?:\^\d+)?)*)\s*")

    @classmethod
    def from_text(cls, text: str, variables=T_VARS, params=J_PARAMS) -> "ParamPolynomial":
        symbols = tuple(variables) + tuple(params)
        if text.strip() == "0":
            return cls({}, variables, params)
        terms: dict[tuple[int, ...], Fraction] = {}
        pos = 0
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m:
                raise ParseError("malformed polynomial term", text, pos, text[pos:pos + 8])
            exps = [0] * len(symbols)
            for factor in filter(None, m.group(2).split("*")):
                name, _, power = factor.partition("^")
                if name not in symbols:
                    raise ParseError(f"unknown symbol {name!r}", text, m.start(2), name)
                exps[symbols.index(name)] += int(power or 1)
            e = tuple(exps)
            terms[e] = terms.get(e, Fraction(0)) + Fraction(m.group(1))
            pos = m.end()
            if pos < len(text):
                if text.startswith("+", pos):
                    pos += 1
                else:
                    raise ParseError("expected '+' between terms", text, pos, text[pos])
        return cls(terms, variables, params)


def t(i: int) -> ParamPolynomial:
    return ParamPolynomial.var(T_VARS[i])


def J(name: str) -> ParamPolynomial:
    return ParamPolynomial.var(name)


def random_polynomial(rng, degree: int, max_coeff: int = 5, density: float = 0.6,
                      homogeneous: bool = True) -> ParamPolynomial:
    """Random polynomial in t with small integer coefficients (parameters absent)."""
    width = len(T_VARS) + len(J_PARAMS)
    terms = {}
    degrees = [degree] if homogeneous else range(degree + 1)
    for exps in product(range(degree + 1), repeat=len(T_VARS)):
        if sum(exps) in degrees and rng.random() < density:
            c = int(rng.integers(-max_coeff, max_coeff + 1))
            terms[tuple(exps) + (0,) * (width - len(T_VARS))] = c
    return ParamPolynomial(terms)

