"""Numerical rank-2 elliptic bracket with a simple pole at the origin.

Points of the phase space are matrix-valued functions

    phi(lam) = t0*I + (1/i) * sum_a t_a * w_a(lam) * sigma_a

and the bracket of two linear coordinates is obtained by a Cech-style
recipe: multiply phi by a covector on a small annulus around the origin,
take the trace-free part, project the principal part to the unique global
section with the same poles, and recombine.  The result is expanded in the
basis {I, (1/i) w_a sigma_a} by least squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .elliptic import (
    LatticeCurve,
    _sample_points,
    default_radius,
    j_constants,
    laurent_coefficients,
    w_derivatives,
    w_functions,
)
from .errors import FitResidualExceeded, InvalidInput, SingularMatch
from .poisson import sklyanin_bivector

IDENTITY = np.eye(2, dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

ALGEBRAIC_TOL = 1e-8
FIT_TOL = 1e-7
CROSS_TOL = 1e-6
MATCH_COND_LIMIT = 1e8
FIT_POINTS = 12
FIT_SEED = 7


@dataclass(frozen=True)
class EndomorphismPoint:
    """Coordinates (t0, t1, t2, t3) of a section phi on a given curve."""

    t: tuple[complex, complex, complex, complex]
    curve: LatticeCurve = field(default_factory=LatticeCurve)

    def __post_init__(self):
        t = tuple(complex(x) for x in self.t)
        if len(t) != 4:
            raise InvalidInput(f"expected four coordinates, got {len(t)}")
        object.__setattr__(self, "t", t)

    def scaled(self, c: complex) -> "EndomorphismPoint":
        return EndomorphismPoint(tuple(c * x for x in self.t), self.curve)


def _as_points(lam) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(lam) == 0
    return np.atleast_1d(np.asarray(lam, dtype=complex)), scalar


def phi_matrix(p: EndomorphismPoint, lam):
    """Value of phi at lam; a 2x2 matrix, or a stack of them for array input."""
    z, scalar = _as_points(lam)
    w = w_functions(z, p.curve)
    out = np.broadcast_to(p.t[0] * IDENTITY, (len(z), 2, 2)).copy()
    for a in range(3):
        out += (p.t[a + 1] / 1j) * w[a][:, None, None] * PAULI[a]
    return out[0] if scalar else out


def det_identity_residual(p: EndomorphismPoint, lam, jconst=None):
    """det phi(lam) minus the closed form in t, the J constants and w3(lam)."""
    z, scalar = _as_points(lam)
    _, J31, J32 = jconst if jconst is not None else j_constants(p.curve)
    t0, t1, t2, t3 = p.t
    w3 = w_functions(z, p.curve)[2]
    closed = t0**2 + J31 * t1**2 + J32 * t2**2 + (t1**2 + t2**2 + t3**2) * w3**2
    res = np.linalg.det(phi_matrix(p, z)) - closed
    return complex(res[0]) if scalar else res


def pr(a: np.ndarray) -> np.ndarray:
    """Trace-free part of a (stack of) 2x2 matrices."""
    tr = np.trace(a, axis1=-2, axis2=-1)
    return a - tr[..., None, None] / 2 * IDENTITY


def pauli_coordinates(m: np.ndarray) -> np.ndarray:
    """Coordinates c_a with m = sum c_a sigma_a for trace-free m; last axis has length 3."""
    return np.stack([np.trace(m @ s, axis1=-2, axis2=-1) / 2 for s in PAULI], axis=-1)


# ---------------------------------------------------------------------------
# covectors


@dataclass(frozen=True)
class CovectorRep:
    """Finite Laurent tail {order: 2x2 coefficient} in the local coordinate at the origin."""

    laurent_tail: tuple[tuple[int, np.ndarray], ...]
    label: str = "custom"

    def __call__(self, zeta) -> np.ndarray:
        z, scalar = _as_points(zeta)
        out = np.zeros((len(z), 2, 2), dtype=complex)
        for n, c in self.laurent_tail:
            out += (z**n)[:, None, None] * c
        return out[0] if scalar else out


def basis_covectors() -> list[CovectorRep]:
    """psi^0 = I/(2 zeta) and psi^a = (i/2) sigma_a, dual to the coordinates t0..t3."""
    out = [CovectorRep(((-1, 0.5 * IDENTITY),), "psi0")]
    for a in range(3):
        out.append(CovectorRep(((0, 0.5j * PAULI[a]),), f"psi{a + 1}"))
    return out


def endomorphism_basis(curve: LatticeCurve) -> list[Callable]:
    """The sections e_0 = I and e_a = (1/i) w_a sigma_a as vectorized functions of lam."""
    def e0(z):
        z = np.atleast_1d(z)
        return np.broadcast_to(IDENTITY, (len(z), 2, 2))

    def make(a):
        def e(z):
            z = np.atleast_1d(z)
            return (w_functions(z, curve)[a] / 1j)[:, None, None] * PAULI[a]
        return e

    return [e0] + [make(a) for a in range(3)]


def pairing(psi: CovectorRep, section: Callable, curve: LatticeCurve) -> complex:
    """Residue at the origin of tr(psi * section)."""
    def integrand(z):
        return np.trace(psi(z) @ section(z), axis1=-2, axis2=-1)
    return complex(laurent_coefficients(integrand, 0j, [-1], radius=default_radius(curve))[0])


def pairing_matrix(curve: LatticeCurve) -> np.ndarray:
    basis = endomorphism_basis(curve)
    return np.array([[pairing(psi, e, curve) for e in basis] for psi in basis_covectors()])


# ---------------------------------------------------------------------------
# principal parts and the projector onto global sections


@dataclass(frozen=True)
class PrincipalPart:
    """Coefficients of zeta^-2 and zeta^-1 of a trace-free 2x2 function at the origin."""

    minus2: np.ndarray
    minus1: np.ndarray
    tol: float = ALGEBRAIC_TOL

    def __post_init__(self):
        for name in ("minus2", "minus1"):
            m = np.asarray(getattr(self, name), dtype=complex)
            if m.shape != (2, 2):
                raise InvalidInput(f"{name} must be a 2x2 matrix")
            scale = max(1.0, float(np.abs(m).max()))
            if abs(np.trace(m)) > self.tol * scale:
                raise InvalidInput(f"{name} is not trace-free (trace {np.trace(m):.3g})")
            object.__setattr__(self, name, m)

    @classmethod
    def of(cls, f: Callable, curve: LatticeCurve, tol: float = ALGEBRAIC_TOL) -> "PrincipalPart":
        c = laurent_coefficients(f, 0j, [-2, -1], radius=default_radius(curve))
        return cls(c[0], c[1], tol)

    @classmethod
    def zero(cls) -> "PrincipalPart":
        z = np.zeros((2, 2), dtype=complex)
        return cls(z, z)

    def vector(self) -> np.ndarray:
        return np.concatenate([pauli_coordinates(self.minus2), pauli_coordinates(self.minus1)])


def pole_basis(curve: LatticeCurve) -> list[Callable]:
    """Trace-free sections with at most a double pole at the origin: w_a sigma_a, then w_a' sigma_a."""
    def make(a, deriv):
        def f(z):
            z = np.atleast_1d(z)
            vals = (w_derivatives if deriv else w_functions)(z, curve)[a]
            return vals[:, None, None] * PAULI[a]
        return f

    return [make(a, False) for a in range(3)] + [make(a, True) for a in range(3)]


@lru_cache(maxsize=16)
def _matching_matrix(curve: LatticeCurve) -> np.ndarray:
    cols = [PrincipalPart.of(f, curve).vector() for f in pole_basis(curve)]
    return np.array(cols).T


def split_p_plus(pp: PrincipalPart, curve: LatticeCurve) -> np.ndarray:
    """Six coefficients over pole_basis of the global section whose principal part is pp."""
    a = _matching_matrix(curve)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > MATCH_COND_LIMIT:
        raise SingularMatch(f"principal-part matching system has condition number {cond:.3g}")
    return np.linalg.solve(a, pp.vector())


def section_from_coefficients(coeffs: Sequence[complex], curve: LatticeCurve) -> Callable:
    basis = pole_basis(curve)

    def section(z):
        z = np.atleast_1d(z)
        out = np.zeros((len(z), 2, 2), dtype=complex)
        for c, f in zip(coeffs, basis):
            if c != 0:
                out += c * f(z)
        return out

    return section


def p_plus(f: Callable, curve: LatticeCurve) -> Callable:
    """Global section matching the principal part of f at the origin."""
    return section_from_coefficients(split_p_plus(PrincipalPart.of(f, curve), curve), curve)


# ---------------------------------------------------------------------------
# the bivector


def poi3_section(p: EndomorphismPoint, psi: CovectorRep) -> Callable:
    """lam -> -P+(pr(phi psi)) phi + phi P+(pr(psi phi))."""
    curve = p.curve
    left = p_plus(lambda z: pr(phi_matrix(p, np.atleast_1d(z)) @ psi(z)), curve)
    right = p_plus(lambda z: pr(psi(z) @ phi_matrix(p, np.atleast_1d(z))), curve)

    def section(z):
        z = np.atleast_1d(z)
        ph = phi_matrix(p, z)
        return -left(z) @ ph + ph @ right(z)

    return section


@dataclass(frozen=True)
class Poi3Result:
    matrix: np.ndarray
    fit_residual: float


def fit_points(curve: LatticeCurve, n: int = FIT_POINTS) -> np.ndarray:
    return _sample_points(curve, n, seed=FIT_SEED)


def poi3_fit(p: EndomorphismPoint, n_points: int = FIT_POINTS, fit_tol: float = FIT_TOL) -> Poi3Result:
    """Bivector entries and the worst relative least-squares residual of the basis expansion."""
    if not any(p.t):
        raise InvalidInput("the bivector is evaluated at nonzero t only")
    pts = fit_points(p.curve, n_points)
    design = np.stack([e(pts).reshape(len(pts), 4) for e in endomorphism_basis(p.curve)], axis=-1)
    design = design.reshape(-1, 4)
    out = np.zeros((4, 4), dtype=complex)
    worst = 0.0
    for alpha, psi in enumerate(basis_covectors()):
        target = poi3_section(p, psi)(pts).reshape(-1)
        coef, *_ = np.linalg.lstsq(design, target, rcond=None)
        scale = max(1.0, float(np.abs(target).max()))
        worst = max(worst, float(np.abs(design @ coef - target).max()) / scale)
        out[alpha] = coef
    if worst > fit_tol:
        raise FitResidualExceeded(f"basis expansion residual {worst:.3g} exceeds {fit_tol:g}")
    return Poi3Result(out, worst)


def bivector_poi3(p: EndomorphismPoint, n_points: int = FIT_POINTS, fit_tol: float = FIT_TOL) -> np.ndarray:
    """4x4 matrix whose (alpha, beta) entry is the bracket {t_alpha, t_beta} at p."""
    return poi3_fit(p, n_points, fit_tol).matrix


def poi3_laurent(p: EndomorphismPoint, alpha: int, orders: Sequence[int] = (-3, -2, -1)) -> np.ndarray:
    """Laurent coefficients at the origin of the section built from the covector psi^alpha."""
    section = poi3_section(p, basis_covectors()[alpha])
    return laurent_coefficients(section, 0j, list(orders), radius=default_radius(p.curve))


# ---------------------------------------------------------------------------
# comparison with the exact Jacobian bracket


def jacobian_matrix_numeric(t: Sequence[complex], jconst) -> np.ndarray:
    """The exact Jacobian bracket matrix evaluated at t with numeric (J31, J32)."""
    _, J31, J32 = jconst
    return sklyanin_bivector().evaluate(list(t), {"J31": J31, "J32": J32})


def proportionality(measured: np.ndarray, reference: np.ndarray) -> tuple[complex, float]:
    """Best scalar s with measured ~ s * reference, and the relative deviation."""
    ref = reference.reshape(-1)
    mes = measured.reshape(-1)
    s = np.vdot(ref, mes) / np.vdot(ref, ref)
    dev = float(np.abs(mes - s * ref).max() / max(np.abs(mes).max(), 1e-300))
    return complex(s), dev


def global_scalar(points: Sequence[EndomorphismPoint]) -> tuple[complex, float]:
    """One scalar fitted jointly over every point, with the worst relative deviation."""
    if not points:
        raise InvalidInput("need at least one point")
    jconst = j_constants(points[0].curve)
    measured = np.stack([bivector_poi3(p) for p in points])
    reference = np.stack([jacobian_matrix_numeric(p.t, jconst) for p in points])
    s, _ = proportionality(measured, reference)
    dev = max(
        float(np.abs(m - s * r).max() / max(np.abs(m).max(), 1e-300))
        for m, r in zip(measured, reference)
    )
    return s, dev


def casimir_gradients(t: Sequence[complex], jconst) -> np.ndarray:
    """Rows: gradients of t0^2 + J31 t1^2 + J32 t2^2 and t1^2 + t2^2 + t3^2."""
    _, J31, J32 = jconst
    t0, t1, t2, t3 = t
    return np.array([
        [2 * t0, 2 * J31 * t1, 2 * J32 * t2, 0],
        [0, 2 * t1, 2 * t2, 2 * t3],
    ], dtype=complex)


def casimir_defect(p: EndomorphismPoint, matrix: np.ndarray | None = None, jconst=None) -> float:
    """Largest |dC . column| over both Casimirs and all columns, relative to the bivector scale."""
    jconst = jconst if jconst is not None else j_constants(p.curve)
    m = bivector_poi3(p) if matrix is None else matrix
    g = casimir_gradients(p.t, jconst)
    scale = max(1.0, float(np.abs(m).max()) * float(np.abs(g).max()))
    return float(np.abs(g @ m).max()) / scale
