"""Complex elliptic curve arithmetic.

Jacobi elliptic functions are evaluated as theta quotients in the nome
``q = exp(i*pi*tau)``.  A :class:`LatticeCurve` fixes the lattice
``Z + Z*tau`` of the covering torus and a subdivision ``s``; the curve itself
is ``C / ((1/s) * Lattice)``.  In the coordinate ``z`` on the covering torus
the three normalized functions are::

    w_1(z) = rho / sn(4Kz),  w_2(z) = rho * dn(4Kz) / sn(4Kz),  w_3(z) = rho * cn(4Kz) / sn(4Kz)

with ``rho = 4K`` so that each has residue 1 at ``z = 0``.  They are periodic
under ``Z + Z*tau`` and have simple poles at the four half-lattice points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    CurveMismatch,
    NonconstantDifference,
    NonconvergentSeries,
    PoleEvaluation,
    QuadratureDivergence,
)

SERIES_RTOL = 1e-16
MAX_SERIES_TERMS = 400
POINT_TOL = 1e-9
POLE_TOL = 1e-10
QUAD_SAMPLES = 256
QUAD_TOL = 1e-10


# ---------------------------------------------------------------------------
# theta functions and Jacobi functions


def _thetas(v, tau: complex, max_terms: int = MAX_SERIES_TERMS):
    """Return (theta1, theta2, theta3, theta4)(v | tau) as complex arrays.

    Convention: theta1(v) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)v), q = exp(i pi tau).
    """
    v = np.asarray(v, dtype=complex)
    im_tau = tau.imag
    if im_tau <= 0:
        raise ValueError("tau must have positive imaginary part")
    vmax = float(np.max(np.abs(v.imag))) if v.size else 0.0
    th1 = np.zeros_like(v)
    th2 = np.zeros_like(v)
    th3 = np.ones_like(v)
    th4 = np.ones_like(v)
    for n in range(max_terms):
        h = (n + 0.5) ** 2
        a = cmath.exp(1j * math.pi * tau * h)
        odd = (2 * n + 1) * v
        sign = -1.0 if n % 2 else 1.0
        th1 = th1 + 2 * sign * a * np.sin(odd)
        th2 = th2 + 2 * a * np.cos(odd)
        if n >= 1:
            b = cmath.exp(1j * math.pi * tau * n * n)
            c = np.cos(2 * n * v)
            th3 = th3 + 2 * b * c
            th4 = th4 + 2 * sign * b * c
        # |next term| <= exp(-pi Im(tau) m^2 + 2 m |Im v|) with m ~ n + 1
        m = n + 1
        if -math.pi * im_tau * m * m + (2 * m + 1) * vmax < math.log(SERIES_RTOL) - 2:
            return th1, th2, th3, th4
    raise NonconvergentSeries(f"theta series did not converge in {max_terms} terms")


def _reduce(z, w1: complex, w2: complex):
    """Reduce z modulo the lattice w1*Z + w2*Z; returns (reduced z, distance to lattice)."""
    z = np.asarray(z, dtype=complex)
    b = np.round(z.imag / w2.imag)
    z = z - b * w2
    a = np.round(z.real / w1.real)
    z = z - a * w1
    # the nearest lattice point is among the nine neighbours of the rounded one
    best = np.full(z.shape, np.inf)
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            best = np.minimum(best, np.abs(z - i * w1 - j * w2))
    return z, best


def _sncndn_torus(z, tau: complex, max_terms: int = MAX_SERIES_TERMS):
    """sn, cn, dn of 4K*z where K is the quarter period attached to tau."""
    z, _ = _reduce(z, 1.0 + 0j, tau)
    t0 = _thetas(np.zeros(1), tau, max_terms)
    th2_0, th3_0, th4_0 = t0[1][0], t0[2][0], t0[3][0]
    t1, t2, t3, t4 = _thetas(2 * math.pi * z, tau, max_terms)
    sn = (th3_0 / th2_0) * t1 / t4
    cn = (th4_0 / th2_0) * t2 / t4
    dn = (th4_0 / th3_0) * t3 / t4
    return sn, cn, dn


def _theta_constants(tau: complex):
    t = _thetas(np.zeros(1), tau)
    return t[1][0], t[2][0], t[3][0]


def modulus_from_tau(tau: complex) -> complex:
    th2, th3, _ = _theta_constants(tau)
    return complex(th2**2 / th3**2)


def tau_from_modulus(k: complex, max_iter: int = 60) -> complex:
    """Half-period ratio iK'/K for the modulus k.

    Starts from the classical nome series and refines by Newton iteration on
    k = theta2(0)^2 / theta3(0)^2.
    """
    k = complex(k)
    if k == 0 or k == 1 or k == -1:
        raise ValueError("degenerate modulus has no finite half-period ratio")
    kp = cmath.sqrt(1 - k * k)
    skp = cmath.sqrt(kp)
    eps = 0.5 * (1 - skp) / (1 + skp)
    q = eps + 2 * eps**5 + 15 * eps**9 + 150 * eps**13 + 1707 * eps**17
    if q == 0:
        raise ValueError("modulus too small for a representable nome")
    tau = cmath.log(q) / (1j * math.pi)
    for _ in range(max_iter):
        f = modulus_from_tau(tau) - k
        h = 1e-7 * max(1.0, abs(tau))
        df = (modulus_from_tau(tau + h) - modulus_from_tau(tau - h)) / (2 * h)
        step = f / df
        tau = tau - step
        if tau.imag <= 0:
            raise NonconvergentSeries("Newton iteration for the nome left the upper half plane")
        if abs(step) < 1e-15 * max(1.0, abs(tau)):
            return tau
    raise NonconvergentSeries("nome refinement did not converge")


def quarter_period(tau: complex) -> complex:
    """K = (pi/2) * theta3(0)^2."""
    _, th3, _ = _theta_constants(tau)
    return complex(math.pi / 2 * th3**2)


def jacobi_sn_cn_dn(lam, k: complex, max_terms: int = MAX_SERIES_TERMS):
    """Jacobi sn, cn, dn at ``lam`` (scalar or array) for modulus ``k``.

    Raises PoleEvaluation within POLE_TOL of a pole (lam = iK' mod the periods)
    and NonconvergentSeries if the theta series exhausts ``max_terms``.
    """
    scalar = np.isscalar(lam)
    u = np.asarray(lam, dtype=complex)
    k = complex(k)
    if k == 0:
        out = np.sin(u), np.cos(u), np.ones_like(u)
    elif k in (1, -1):
        out = np.tanh(u), 1 / np.cosh(u), 1 / np.cosh(u)
    else:
        tau = tau_from_modulus(k)
        K = quarter_period(tau)
        z = u / (4 * K)
        zr, _ = _reduce(z, 1.0 + 0j, tau)
        _, dist = _reduce(zr - tau / 4, 0.5 + 0j, tau / 2)
        if np.any(dist * abs(4 * K) < POLE_TOL):
            raise PoleEvaluation(f"sn/cn/dn have a pole at lambda={lam!r}")
        out = _sncndn_torus(zr, tau, max_terms)
    if scalar:
        return tuple(complex(x) for x in out)
    return out


# ---------------------------------------------------------------------------
# curves, points, divisors


@dataclass(frozen=True)
class LatticeCurve:
    """The curve C/((1/s) Lattice) with Lattice = Z + Z*tau.

    ``modulus_k`` is derived from tau; the Jacobi functions attached to the
    curve have half-period ratio exactly tau.
    """

    tau: complex = 1.2j
    subdivision: int = 2

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if self.tau.imag <= 0:
            raise ValueError("tau must have positive imaginary part")
        if self.subdivision < 1:
            raise ValueError("subdivision must be a positive integer")

    @cached_property
    def modulus_k(self) -> complex:
        return modulus_from_tau(self.tau)

    @cached_property
    def nome(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)

    @cached_property
    def quarter_period(self) -> complex:
        return quarter_period(self.tau)

    @cached_property
    def rho(self) -> complex:
        # w_1 = rho / sn(4Kz) ~ rho / (4Kz) near 0, so residue 1 forces rho = 4K
        return 4 * self.quarter_period

    @property
    def periods(self) -> tuple[complex, complex]:
        """Basis of the covering lattice Z + Z*tau."""
        return (1.0 + 0j, self.tau)

    @property
    def curve_periods(self) -> tuple[complex, complex]:
        s = self.subdivision
        return (1.0 / s + 0j, self.tau / s)

    @cached_property
    def torsion_points(self) -> tuple[complex, ...]:
        """The s^2 points i/s + j*tau/s of the covering torus lying over e."""
        s = self.subdivision
        return tuple(i / s + j * self.tau / s for j in range(s) for i in range(s))

    @cached_property
    def half_periods(self) -> tuple[complex, complex, complex]:
        """Nonzero 2-torsion points of the covering torus, in the order (1/2, tau/2, (1+tau)/2)."""
        return (0.5 + 0j, self.tau / 2, (1 + self.tau) / 2)

    def point(self, z) -> "CurvePoint":
        return CurvePoint(z, self)

    @property
    def origin(self) -> "CurvePoint":
        return CurvePoint(0j, self)

    def reduce(self, z):
        return _reduce(z, *self.curve_periods)

    def lattice_distance(self, z) -> float:
        """Distance from z to the curve lattice (1/s) Lattice."""
        return float(self.reduce(z)[1])


@dataclass(frozen=True, eq=False)
class CurvePoint:
    """A point of the curve, stored as a fundamental-domain representative."""

    z: complex
    curve: LatticeCurve

    def __post_init__(self):
        zr, _ = self.curve.reduce(complex(self.z))
        w1, w2 = self.curve.curve_periods
        zr = complex(zr)
        # shift into the half-open parallelogram [0,1) w1 + [0,1) w2
        b = zr.imag / w2.imag
        b_int = math.floor(b + 1e-12)
        zr -= b_int * w2
        a = (zr.real - (zr.imag / w2.imag) * w2.real) / w1.real
        zr -= math.floor(a + 1e-12) * w1
        object.__setattr__(self, "z", zr)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.curve == other.curve and self.curve.lattice_distance(self.z - other.z) < POINT_TOL

    # every point of a curve hashes alike, which keeps hashing consistent with
    # the tolerance-based equality above
    def __hash__(self):
        return hash(self.curve)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        _same_curve(self.curve, other.curve)
        return CurvePoint(self.z + other.z, self.curve)

    def __neg__(self) -> "CurvePoint":
        return CurvePoint(-self.z, self.curve)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return self + (-other)

    def __repr__(self):
        return f"CurvePoint({self.z:.12g})"


def _same_curve(a: LatticeCurve, b: LatticeCurve) -> None:
    if a != b:
        raise CurveMismatch(f"objects live on different curves: {a} vs {b}")


@dataclass(frozen=True)
class Divisor:
    """Finite formal sum of distinct curve points with integer multiplicities."""

    curve: LatticeCurve
    entries: tuple[tuple[CurvePoint, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        entries = tuple((p, int(m)) for p, m in self.entries)
        for i, (p, _) in enumerate(entries):
            _same_curve(p.curve, self.curve)
            for q, _ in entries[i + 1:]:
                if p == q:
                    raise ValueError(f"divisor entries must be distinct points; {p} repeats")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_points(cls, curve: LatticeCurve, items: Iterable) -> "Divisor":
        """Build from (point, multiplicity) pairs or bare points, merging repeats.

        Points may be CurvePoint instances or complex coordinates.
        """
        merged: list[list] = []
        for item in items:
            if isinstance(item, tuple):
                p, m = item
            else:
                p, m = item, 1
            if not isinstance(p, CurvePoint):
                p = CurvePoint(p, curve)
            for slot in merged:
                if slot[0] == p:
                    slot[1] += m
                    break
            else:
                merged.append([p, m])
        return cls(curve, tuple((p, m) for p, m in merged if m != 0))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def weighted_sum(self) -> complex:
        return sum((m * p.z for p, m in self.entries), 0j)

    def __add__(self, other: "Divisor") -> "Divisor":
        _same_curve(self.curve, other.curve)
        return Divisor.from_points(self.curve, list(self.entries) + list(other.entries))

    def scale(self, r: int) -> "Divisor":
        return Divisor.from_points(self.curve, [(p, r * m) for p, m in self.entries])

    def multiplicity(self, p: CurvePoint) -> int:
        for q, m in self.entries:
            if q == p:
                return m
        return 0


def abel_jacobi_equivalent(d1: Divisor, d2: Divisor, tol: float = POINT_TOL) -> bool:
    """Linear equivalence on the curve: equal degree and equal point sum mod the lattice."""
    _same_curve(d1.curve, d2.curve)
    if d1.degree != d2.degree:
        return False
    return d1.curve.lattice_distance(d1.weighted_sum() - d2.weighted_sum()) < tol


# ---------------------------------------------------------------------------
# the normalized functions w_a


def _check_poles(z, curve: LatticeCurve) -> None:
    _, dist = _reduce(z, 0.5 + 0j, curve.tau / 2)
    if np.any(dist < POLE_TOL):
        raise PoleEvaluation(f"w_a have poles at the half-lattice points; got lambda={z!r}")


def w_functions(lam, curve: LatticeCurve):
    """(w1, w2, w3) at lam (scalar or array, covering-torus coordinate)."""
    scalar = np.isscalar(lam)
    z = np.asarray(lam, dtype=complex)
    _check_poles(z, curve)
    sn, cn, dn = _sncndn_torus(z, curve.tau)
    rho = curve.rho
    w = (rho / sn, rho * dn / sn, rho * cn / sn)
    if scalar:
        return tuple(complex(x) for x in w)
    return w


def w_derivatives(lam, curve: LatticeCurve):
    """(w1', w2', w3') with respect to lam; with rho = 4K these are -w_b*w_c."""
    w1, w2, w3 = w_functions(lam, curve)
    return (-w2 * w3, -w1 * w3, -w1 * w2)


def _sample_points(curve: LatticeCurve, n: int, seed: int = 0) -> np.ndarray:
    """Deterministic points of the fundamental domain kept away from the half periods."""
    rng = np.random.default_rng(seed)
    out = []
    tau = curve.tau
    while len(out) < n:
        a, b = rng.uniform(0, 1, size=2)
        z = a + b * tau
        _, dist = _reduce(z, 0.5 + 0j, tau / 2)
        if dist > 0.05:
            out.append(z)
    return np.array(out)


def j_constants(curve: LatticeCurve, samples: int = 16, tol: float = 1e-9):
    """Return (J21, J31, J32) with w_a^2 - w_b^2 = J_ba.

    The constants are averaged over sample points; J21 is returned as
    J31 - J32 exactly.
    """
    z = _sample_points(curve, samples, seed=1234)
    w1, w2, w3 = w_functions(z, curve)
    d31 = w1**2 - w3**2
    d32 = w2**2 - w3**2
    for name, d in (("J31", d31), ("J32", d32)):
        spread = float(np.max(np.abs(d - d.mean())))
        if spread > tol * max(1.0, float(np.abs(d.mean()))):
            raise NonconstantDifference(f"{name} varies by {spread:.3g} across samples")
    J31 = complex(d31.mean())
    J32 = complex(d32.mean())
    return J31 - J32, J31, J32


def torsion_label_points(curve: LatticeCurve) -> dict[int, complex]:
    """Point of the curve (as a quarter-lattice coordinate) where w_a vanishes, for a = 1, 2, 3.

    w_a^2 descends to the curve with a double zero at one nonzero 2-torsion
    point; this is the point attached to the Pauli index a.
    """
    tau = curve.tau
    candidates = (0.25 + 0j, tau / 4, (1 + tau) / 4)
    out = {}
    for a in (1, 2, 3):
        vals = [abs(w_functions(c, curve)[a - 1]) for c in candidates]
        out[a] = candidates[int(np.argmin(vals))]
    return out


# ---------------------------------------------------------------------------
# Laurent coefficients by contour quadrature


def laurent_coefficients(
    f: Callable,
    center=0j,
    orders: Sequence[int] | range = range(-2, 1),
    radius: float = 0.1,
    n_samples: int = QUAD_SAMPLES,
    tol: float = QUAD_TOL,
) -> np.ndarray:
    """Laurent coefficients c_n of ``f`` around ``center`` by the trapezoid rule.

    ``f`` must accept an array of points and return an array whose leading
    axis matches (trailing axes, e.g. 2x2 matrices, are carried through).
    The estimate with ``n_samples`` points is compared against ``2*n_samples``;
    a disagreement above ``tol`` (relative to max(1, |c_n|)) raises
    QuadratureDivergence.  Returns the finer estimate, shape (len(orders), ...).
    """
    if isinstance(center, CurvePoint):
        center = center.z
    orders = list(orders)

    def estimate(n):
        theta = 2 * math.pi * np.arange(n) / n
        zeta = radius * np.exp(1j * theta)
        vals = np.asarray(f(center + zeta), dtype=complex)
        extra = (1,) * (vals.ndim - 1)
        out = []
        for m in orders:
            weight = (zeta ** (-m)).reshape((n,) + extra)
            out.append(np.mean(vals * weight, axis=0))
        return np.array(out)

    coarse = estimate(n_samples)
    fine = estimate(2 * n_samples)
    scale = np.maximum(1.0, np.abs(fine))
    err = float(np.max(np.abs(fine - coarse) / scale)) if fine.size else 0.0
    if err > tol:
        raise QuadratureDivergence(f"Laurent quadrature changed by {err:.3g} on doubling (tol {tol:g})")
    return fine


def default_radius(curve: LatticeCurve) -> float:
    """A contour radius well inside the disc free of other poles around e."""
    tau = curve.tau
    nearest = min(abs(p) for p in (0.5, tau / 2, (1 + tau) / 2, (1 - tau) / 2))
    return 0.2 * nearest
