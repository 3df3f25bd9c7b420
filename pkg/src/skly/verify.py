"""Verification suites: each returns a list of checks with measured value and tolerance."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable

import numpy as np

from .config import RunConfig
from .elliptic import (
    LatticeCurve,
    _sample_points,
    default_radius,
    j_constants,
    jacobi_sn_cn_dn,
    laurent_coefficients,
    w_functions,
)
from .fm import (
    ChargeVector,
    apply_word,
    continued_fraction,
    pair_invariants,
    reconstruct_fraction,
    solve_fo_correspondence,
    source_charges,
)
from .poisson import casimir_residual, schouten_jacobi_residual, sklyanin_bivector, sklyanin_casimirs
from .sklyanin import (
    EndomorphismPoint,
    bivector_poi3,
    casimir_defect,
    det_identity_residual,
    jacobian_matrix_numeric,
    poi3_fit,
    proportionality,
)
from .symmetric import lr_oracle_agreement


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": _clean(self.measured),
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _clean(x: float) -> float:
    return float(f"{x:.6g}")


def _check(name: str, measured: float, tol: float, detail: str = "", strict: bool = False) -> Check:
    passed = measured == 0 if strict else measured < tol
    return Check(name, float(measured), tol, bool(passed), detail)


def _random_t(rng: np.random.Generator) -> tuple[complex, ...]:
    return tuple(rng.normal(size=4) + 1j * rng.normal(size=4))


def suite_jacobi(cfg: RunConfig) -> list[Check]:
    res = schouten_jacobi_residual(sklyanin_bivector())
    triples = ["(0,1,2)", "(0,1,3)", "(0,2,3)", "(1,2,3)"]
    return [_check(f"jacobiator {tr}", len(r.terms), 0, f"terms: {r.to_text()}", strict=True)
            for tr, r in zip(triples, res)]


def suite_casimir(cfg: RunConfig) -> list[Check]:
    b = sklyanin_bivector()
    out = []
    for name, c in zip(("C1", "C2"), sklyanin_casimirs()):
        res = casimir_residual(b, c)
        nonzero = sum(len(r.terms) for r in res)
        out.append(_check(f"{{{name}, t_a}} = 0", nonzero, 0, c.to_text(), strict=True))
    return out


def suite_det_identity(cfg: RunConfig) -> list[Check]:
    curve = LatticeCurve(cfg.tau)
    n = cfg.samples or 100
    rng = np.random.default_rng(cfg.seed)
    jconst = j_constants(curve)
    lams = _sample_points(curve, n, seed=cfg.seed + 1)
    worst = 0.0
    for lam in lams:
        p = EndomorphismPoint(_random_t(rng), curve)
        worst = max(worst, abs(det_identity_residual(p, lam, jconst)))
    return [_check(f"det identity over {n} samples", worst, cfg.tol("det"))]


def suite_elliptic(cfg: RunConfig) -> list[Check]:
    curve = LatticeCurve(cfg.tau)
    radius = default_radius(curve)
    out = []
    for a in range(3):
        res = laurent_coefficients(lambda z, a=a: w_functions(z, curve)[a], 0j, [-1], radius=radius)[0]
        out.append(_check(f"residue of w{a + 1} at 0", abs(res - 1), cfg.tol("residue")))
    J21, J31, J32 = j_constants(curve)
    z = _sample_points(curve, 50, seed=cfg.seed + 2)
    w = w_functions(z, curve)
    for (i, j), target in (((0, 2), J31), ((1, 2), J32), ((0, 1), J21)):
        diff = w[i] ** 2 - w[j] ** 2
        spread = float(np.max(np.abs(diff - target)))
        scale = max(1.0, abs(target))
        out.append(_check(f"w{i + 1}^2 - w{j + 1}^2 constant", spread / scale, cfg.tol("jconst"),
                          f"relative to |J|={abs(target):.6g}"))
    out.append(_check("J31 - J32 - J21 exactly", abs(J31 - J32 - J21), 0, strict=True))
    k = curve.modulus_k
    sn, cn, dn = jacobi_sn_cn_dn(z, k)
    out.append(_check("sn^2 + cn^2 = 1", float(np.max(np.abs(sn**2 + cn**2 - 1))), cfg.tol("jconst")))
    out.append(_check("dn^2 + k^2 sn^2 = 1", float(np.max(np.abs(dn**2 + k**2 * sn**2 - 1))), cfg.tol("jconst")))
    wp = w_functions(z + 1, curve)
    wm = w_functions(-z, curve)
    per = max(float(np.max(np.abs(wp[a] - w[a]) / np.maximum(1, np.abs(w[a])))) for a in range(3))
    odd = max(float(np.max(np.abs(wm[a] + w[a]) / np.maximum(1, np.abs(w[a])))) for a in range(3))
    out.append(_check("w_a periodic under 1", per, cfg.tol("jconst")))
    out.append(_check("w_a odd", odd, cfg.tol("jconst")))
    return out


def _poi3_sample(args):
    t, curve, jconst, cfg = args
    p = EndomorphismPoint(t, curve)
    fit = poi3_fit(p, fit_tol=cfg.tol("fit"))
    m = fit.matrix
    scale = max(1.0, float(np.abs(m).max()))
    c = complex(0.7, -1.3)
    hom = bivector_poi3(p.scaled(c))
    return {
        "matrix": m,
        "reference": jacobian_matrix_numeric(t, jconst),
        "fit": fit.fit_residual,
        "antisym": float(np.abs(m + m.T).max()) / scale,
        "homog": float(np.abs(hom - c * c * m).max()) / max(1.0, float(np.abs(hom).max())),
        "casimir": casimir_defect(p, m, jconst),
    }


def suite_poi3_cross(cfg: RunConfig) -> list[Check]:
    curve = LatticeCurve(cfg.tau)
    n = cfg.samples or 20
    rng = np.random.default_rng(cfg.seed)
    jconst = j_constants(curve)
    ts = [_random_t(rng) for _ in range(n)]
    jobs = [(t, curve, jconst, cfg) for t in ts]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_poi3_sample, jobs))
    else:
        results = [_poi3_sample(j) for j in jobs]
    identity = bivector_poi3(EndomorphismPoint((1, 0, 0, 0), curve))
    measured = np.stack([r["matrix"] for r in results])
    reference = np.stack([r["reference"] for r in results])
    s, _ = proportionality(measured, reference)
    dev = max(float(np.abs(m - s * r).max() / np.abs(m).max()) for m, r in zip(measured, reference))
    detail = f"scalar = {round(s.real, 10) + 0.0:.10g}{round(s.imag, 10) + 0.0:+.10g}j"
    return [
        _check("basis fit residual", max(r["fit"] for r in results), cfg.tol("fit")),
        _check("antisymmetry", max(r["antisym"] for r in results), cfg.tol("algebraic")),
        _check("vanishes at t=(1,0,0,0)", float(np.abs(identity).max()), cfg.tol("algebraic")),
        _check("degree-2 homogeneity", max(r["homog"] for r in results), cfg.tol("fit")),
        _check("Casimir directional derivatives", max(r["casimir"] for r in results), cfg.tol("fit")),
        _check("proportional to Jacobian bracket", dev, cfg.tol("cross"), detail),
    ]


def suite_lr_oracle(cfg: RunConfig, max_size: int = 6) -> list[Check]:
    checked, problems = lr_oracle_agreement(max_size)
    return [_check(f"LR vs Schur products, |mu|+|nu| <= {max_size}", len(problems), 0,
                   f"{checked} coefficients compared" + (f"; first: {problems[0]}" if problems else ""),
                   strict=True)]


def suite_fm(cfg: RunConfig) -> list[Check]:
    bad_inv, bad_word, bad_xi, count = 0, 0, 0, 0
    for r in range(2, 8):
        for d in range(1, r):
            if gcd(r, d) != 1:
                continue
            for k in range(1, 4):
                count += 1
                sol = solve_fo_correspondence(r, d, k)
                e, e_d = source_charges(r, d, k)
                if tuple(pair_invariants(e, e_d)) != tuple(sol.expected):
                    bad_inv += 1
                if apply_word(sol.word, e_d) != ChargeVector(0, -1):
                    bad_word += 1
                if tuple(sol.invariants) != tuple(sol.expected):
                    bad_xi += 1
    bad_cf = 0
    for r in range(2, 31):
        for d in range(1, r):
            if gcd(d, r) == 1:
                terms = continued_fraction(d, r)
                if reconstruct_fraction(terms) != Fraction(d, r) or min(terms) < 2:
                    bad_cf += 1
    return [
        _check("invariants of (E, E(D)) = (kr^2, 1-rkn)", bad_inv, 0, f"{count} cases", strict=True),
        _check("word sends E(D) to (0,-1)", bad_word, 0, f"{count} cases", strict=True),
        _check("xi has matching invariants", bad_xi, 0, f"{count} cases", strict=True),
        _check("continued fractions reconstruct, r <= 30", bad_cf, 0, strict=True),
    ]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "jacobi": suite_jacobi,
    "casimir": suite_casimir,
    "det-identity": suite_det_identity,
    "poi3-cross": suite_poi3_cross,
    "elliptic": suite_elliptic,
    "lr-oracle": suite_lr_oracle,
    "fm": suite_fm,
}
