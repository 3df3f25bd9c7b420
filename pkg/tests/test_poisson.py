from itertools import combinations

import numpy as np
import pytest
import sympy as sp

from skly.errors import VariableMismatch
from skly.poisson import (
    QuadraticBivector,
    casimir_residual,
    determinant,
    jacobian_bracket,
    schouten_jacobi_residual,
    sklyanin_bivector,
    sklyanin_casimirs,
)
from skly.polynomial import J, ParamPolynomial, random_polynomial, t

T = sp.symbols("t0 t1 t2 t3")
J31, J32 = sp.symbols("J31 J32")


def to_sympy(p: ParamPolynomial):
    syms = list(T) + [J31, J32]
    total = sp.Integer(0)
    for e, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s**k
        total += term
    return sp.expand(total)


def sympy_bracket(matrix, f, g):
    return sp.expand(sum(sp.diff(f, T[a]) * matrix[a, b] * sp.diff(g, T[b])
                         for a in range(4) for b in range(4)))


def test_bracket_matches_cofactor_oracle():
    c1 = T[0] ** 2 + J31 * T[1] ** 2 + J32 * T[2] ** 2
    c2 = T[1] ** 2 + T[2] ** 2 + T[3] ** 2
    b = sklyanin_bivector()
    for a, bb in combinations(range(4), 2):
        rows = [[sp.diff(f, x) for x in T] for f in (c1, c2, T[a], T[bb])]
        want = sp.expand(sp.Matrix(rows).det())
        assert sp.expand(to_sympy(b.components[a][bb]) - want) == 0


def test_reference_entries():
    b = sklyanin_bivector()
    assert b.components[0][1] == 4 * J("J32") * t(2) * t(3)
    assert b.components[2][3] == 4 * t(0) * t(1)
    for a, c in combinations(range(4), 2):
        assert b.components[a][c].is_homogeneous(2)


def test_jacobiator_and_casimirs_exactly_zero():
    b = sklyanin_bivector()
    assert all(r.is_zero() for r in schouten_jacobi_residual(b))
    for c in sklyanin_casimirs():
        assert all(r.is_zero() for r in casimir_residual(b, c))


def test_bracket_axioms_random():
    rng = np.random.default_rng(3)
    for _ in range(5):
        c1, c2 = random_polynomial(rng, 2), random_polynomial(rng, 2)
        f, g, h = (random_polynomial(rng, 3, density=0.3) for _ in range(3))
        br = lambda x, y: jacobian_bracket(c1, c2, x, y)  # noqa: E731
        assert br(f, g) == -br(g, f)
        assert br(f + 2 * h, g) == br(f, g) + 2 * br(h, g)
        assert br(f * h, g) == f * br(h, g) + h * br(f, g)
        assert br(c1, f).is_zero() and br(c2, f).is_zero()


def test_jacobi_for_random_casimir_pairs():
    rng = np.random.default_rng(17)
    for _ in range(20):
        c1, c2 = random_polynomial(rng, 2), random_polynomial(rng, 2)
        b = QuadraticBivector.from_casimirs(c1, c2)
        assert all(r.is_zero() for r in schouten_jacobi_residual(b))


def test_non_poisson_bivector_detected():
    b = QuadraticBivector.from_upper({(0, 1): t(2) ** 2, (0, 2): t(0) * t(1)})
    res = schouten_jacobi_residual(b)
    assert any(not r.is_zero() for r in res)
    # independent check by brute differentiation
    m = sp.zeros(4, 4)
    m[0, 1], m[1, 0] = T[2] ** 2, -T[2] ** 2
    m[0, 2], m[2, 0] = T[0] * T[1], -T[0] * T[1]
    for (i, j, k), r in zip(combinations(range(4), 3), res):
        want = (sympy_bracket(m, T[i], m[j, k]) + sympy_bracket(m, T[j], m[k, i])
                + sympy_bracket(m, T[k], m[i, j]))
        assert sp.expand(to_sympy(r) - want) == 0


def test_casimir_examples():
    b = sklyanin_bivector()
    assert any(not r.is_zero() for r in casimir_residual(b, t(0) ** 2))
    zero_bivector = QuadraticBivector.from_upper({})
    assert all(r.is_zero() for r in casimir_residual(zero_bivector, t(0) ** 3))


def test_rejects_non_antisymmetric():
    rows = [[ParamPolynomial.zero()] * 4 for _ in range(4)]
    rows[0][1] = t(0) ** 2
    with pytest.raises(ValueError):
        QuadraticBivector(tuple(tuple(r) for r in rows))


def test_rejects_non_quadratic_casimirs():
    with pytest.raises(ValueError):
        QuadraticBivector.from_casimirs(t(0) ** 3, t(1) ** 2)


def test_variable_mismatch():
    x = ParamPolynomial.var("x", variables=("x", "y", "z", "w"))
    with pytest.raises(VariableMismatch):
        jacobian_bracket(t(0), t(1), x, t(2))


def test_determinant_small():
    a, b, c, d = (t(i) for i in range(4))
    assert determinant([[a, b], [c, d]]) == a * d - b * c
    assert determinant([[a]]) == a


def test_numeric_evaluation():
    b = sklyanin_bivector()
    m = b.evaluate((1, 2, 3, 4), {"J31": 2.0, "J32": 5.0})
    assert np.allclose(m, -m.T)
    assert m[0, 1] == 4 * 5.0 * 3 * 4
    assert list(b.to_text())[0] == "{t0,t1}"
