"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import numpy as np

from . import fm, leaves
from .config import RunConfig, base_config, parse_complex, parse_tolerance
from .elliptic import LatticeCurve, j_constants, torsion_label_points
from .errors import SklyError
from .parsing import parse_charge, parse_coordinates, parse_divisor, parse_torsion
from .poisson import sklyanin_bivector
from .sklyanin import (
    EndomorphismPoint,
    det_identity_residual,
    jacobian_matrix_numeric,
    poi3_fit,
    proportionality,
)
from .torsion import TorsionType
from .verify import SUITES

SCHEMA_VERSION = "v1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# output


def _num(z: complex, digits: int = 12) -> list[float]:
    z = complex(z)
    return [round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0]


def _matrix(m: np.ndarray) -> list:
    return [[_num(x) for x in row] for row in m]


def _envelope(name: str, **data) -> dict:
    return {"schema": f"skly/{name}/{SCHEMA_VERSION}", **data}


def _fmt(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in value.items()) + "}"
    if value is None:
        return "-"
    return str(value)


def render_table(payload: dict) -> str:
    lines = []
    for key, value in payload.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            cols = list(value[0].keys())
            rows = [[_fmt(rec.get(c)) for c in cols] for rec in value]
            widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
            lines.append(f"{key}:")
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
            for r in rows:
                lines.append("  " + "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
        else:
            lines.append(f"{key}: {_fmt(value)}")
    return "\n".join(lines)


def emit(cfg: RunConfig, payload: dict) -> None:
    if cfg.json:
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(render_table(payload) + "\n")


def _torsion_record(t: TorsionType) -> dict:
    return {"torsion": t.to_text(), "length": t.length, "l_max": t.l_max}


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        fn = SUITES[name]
        result = fn(cfg, max_size=args.max_size) if name == "lr-oracle" else fn(cfg)
        checks.extend({"suite": name, **c.to_json()} for c in result)
    passed = all(c["passed"] for c in checks)
    emit(cfg, _envelope("verify-report", suite=args.suite, passed=passed, checks=checks))
    return 0 if passed else 1


def cmd_leaves(args, cfg: RunConfig) -> int:
    curve = LatticeCurve(cfg.tau)
    what = args.leaves_cmd
    if what == "strata":
        types = leaves.enumerate_strata(args.r, args.k, budget=args.budget)
        emit(cfg, _envelope("leaf-types", r=args.r, k=args.k, count=len(types),
                            records=[t.to_json() for t in types]))
    elif what == "rank2":
        fams = leaves.rank2_families(args.n)
        emit(cfg, _envelope("rank2-families", n=args.n, count=len(fams),
                            families=[f.to_json() for f in fams]))
    elif what == "fiber":
        zeros = parse_divisor(args.divisor, curve)
        types = leaves.leaves_over_casimir_fiber(zeros, args.r, budget=args.budget)
        emit(cfg, _envelope("torsion-types", query=f"fiber {args.divisor}", r=args.r,
                            count=len(types), records=[_torsion_record(t) for t in types]))
    elif what == "product":
        t1 = parse_torsion(args.t1, curve)
        t2 = parse_torsion(args.t2, curve)
        types = leaves.product_decompose(t1, t2, args.r)
        emit(cfg, _envelope("torsion-types", query=f"product {args.t1} {args.t2}", r=args.r,
                            count=len(types), records=[_torsion_record(t) for t in types]))
    elif what == "census":
        fams = leaves.sklyanin_leaf_census(curve)
        labels = {str(a): _num(z) for a, z in sorted(torsion_label_points(curve).items())}
        emit(cfg, _envelope("census", tau=_num(cfg.tau), pauli_labels=labels,
                            convention="J31 = w1^2 - w3^2, J32 = w2^2 - w3^2",
                            families=[f.to_json() for f in fams]))
    elif what == "dim":
        torsion = parse_torsion(args.torsion, curve)
        if args.line_degree is None:
            h0, h1 = None, leaves.CokernelType(torsion)
        else:
            kdeg = args.kernel_degree
            if kdeg is None:
                kdeg = leaves.kernel_degree(args.k, args.line_degree, torsion.length)
            h0, h1 = leaves.line_bundle(kdeg, "K"), leaves.CokernelType(torsion, args.line_degree)
        dim = leaves.leaf_dimension(h0, h1, args.r, args.k)
        emit(cfg, _envelope("leaf-dimension", torsion=torsion.to_text(), r=args.r, k=args.k,
                            line_degree=args.line_degree,
                            kernel_degree=None if h0 is None else h0.degree, leaf_dim=dim))
    return 0


def cmd_fm(args, cfg: RunConfig) -> int:
    what = args.fm_cmd
    if what == "solve":
        sol = fm.solve_fo_correspondence(args.r, args.d, args.k)
        emit(cfg, _envelope("fm-solve", r=args.r, d=args.d, k=args.k, **sol.to_json(),
                            xi_note="xi has degree r^2 k and rank rkn-1"))
    elif what == "invariants":
        v1, v2 = parse_charge(args.v1), parse_charge(args.v2)
        inv = fm.pair_invariants(v1, v2)
        emit(cfg, _envelope("fm-invariants", v1=[v1.deg, v1.rank], v2=[v2.deg, v2.rank], **inv.to_json()))
    elif what == "cfrac":
        terms = fm.continued_fraction(args.d, args.r)
        emit(cfg, _envelope("fm-cfrac", d=args.d, r=args.r, terms=terms))
    return 0


def cmd_sklyanin(args, cfg: RunConfig) -> int:
    curve = LatticeCurve(cfg.tau)
    what = args.skl_cmd
    if what == "bracket":
        if args.emit == "symbolic":
            emit(cfg, _envelope("bracket", emit="symbolic", entries=sklyanin_bivector().to_text()))
            return 0
        t = parse_coordinates(args.t) if args.t else _default_t(cfg)
        p = EndomorphismPoint(t, curve)
        fit = poi3_fit(p, fit_tol=cfg.tol("fit"))
        ref = jacobian_matrix_numeric(t, j_constants(curve))
        s, dev = proportionality(fit.matrix, ref)
        emit(cfg, _envelope("bracket", emit="numeric", t=[_num(x) for x in t],
                            matrix=_matrix(fit.matrix), reference=_matrix(ref),
                            scalar=_num(s, 10), deviation=float(f"{dev:.3g}"),
                            fit_residual=float(f"{fit.fit_residual:.3g}")))
    elif what == "det":
        t = parse_coordinates(args.t) if args.t else _default_t(cfg)
        lam = parse_complex(args.lam)
        res = det_identity_residual(EndomorphismPoint(t, curve), lam)
        emit(cfg, _envelope("det-identity", t=[_num(x) for x in t], lam=_num(lam),
                            residual=float(f"{abs(res):.3g}"), tolerance=cfg.tol("det"),
                            passed=abs(res) < cfg.tol("det")))
    elif what == "jconst":
        J21, J31, J32 = j_constants(curve)
        labels = {str(a): _num(z) for a, z in sorted(torsion_label_points(curve).items())}
        emit(cfg, _envelope("jconst", tau=_num(cfg.tau), modulus_k=_num(curve.modulus_k),
                            rho=_num(curve.rho), J21=_num(J21), J31=_num(J31), J32=_num(J32),
                            pauli_labels=labels))
    return 0


def _default_t(cfg: RunConfig) -> tuple[complex, ...]:
    rng = np.random.default_rng(cfg.seed)
    return tuple(complex(x) for x in rng.normal(size=4) + 1j * rng.normal(size=4))


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("global options")
    g.add_argument("--tau", default=argparse.SUPPRESS, help="half-period ratio, e.g. 1.2j")
    g.add_argument("--tol", action="append", default=argparse.SUPPRESS,
                   help="tolerance override LAYER=VALUE (repeatable) or one value for all layers")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    g.add_argument("--samples", type=int, default=argparse.SUPPRESS)
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="skly", description="Elliptic Poisson brackets and symplectic leaves.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=[*SUITES, "all"])
    v.add_argument("--max-size", type=int, default=6, help="largest |mu|+|nu| for lr-oracle")
    v.set_defaults(func=cmd_verify)

    lv = sub.add_parser("leaves", parents=[common], help="leaf classification")
    lsub = lv.add_subparsers(dest="leaves_cmd", required=True, parser_class=_Parser)
    s = lsub.add_parser("strata", parents=[common])
    s.add_argument("-r", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--budget", type=int)
    s = lsub.add_parser("rank2", parents=[common])
    s.add_argument("-n", type=int, required=True)
    s = lsub.add_parser("fiber", parents=[common])
    s.add_argument("divisor", help="e.g. 2*p+q or 2*[0.1+0.2j]")
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--budget", type=int)
    s = lsub.add_parser("product", parents=[common])
    s.add_argument("t1", help="quotient type, e.g. p:(1)")
    s.add_argument("t2", help="sub type, e.g. p:(1)")
    s.add_argument("-r", type=int, required=True)
    lsub.add_parser("census", parents=[common])
    s = lsub.add_parser("dim", parents=[common])
    s.add_argument("torsion", help="torsion part of the cokernel, e.g. p:(1)+q:(1) or 0")
    s.add_argument("-r", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--line-degree", type=int, help="degree of the line bundle in the cokernel")
    s.add_argument("--kernel-degree", type=int, help="degree of the kernel line bundle")
    lv.set_defaults(func=cmd_leaves)

    f = sub.add_parser("fm", parents=[common], help="Fourier-Mukai charge calculus")
    fsub = f.add_subparsers(dest="fm_cmd", required=True, parser_class=_Parser)
    s = fsub.add_parser("solve", parents=[common])
    s.add_argument("-r", type=int, required=True)
    s.add_argument("-d", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s = fsub.add_parser("invariants", parents=[common])
    s.add_argument("v1", help="deg,rank")
    s.add_argument("v2", help="deg,rank")
    s = fsub.add_parser("cfrac", parents=[common])
    s.add_argument("d", type=int)
    s.add_argument("r", type=int)
    f.set_defaults(func=cmd_fm)

    k = sub.add_parser("sklyanin", parents=[common], help="numeric bracket and elliptic data")
    ksub = k.add_subparsers(dest="skl_cmd", required=True, parser_class=_Parser)
    s = ksub.add_parser("bracket", parents=[common])
    s.add_argument("--emit", choices=["symbolic", "numeric"], default="numeric")
    s.add_argument("--t", help="t0,t1,t2,t3 (default: random from --seed)")
    s = ksub.add_parser("det", parents=[common])
    s.add_argument("--t", help="t0,t1,t2,t3 (default: random from --seed)")
    s.add_argument("--lam", default="0.3+0.2j")
    ksub.add_parser("jconst", parents=[common])
    k.set_defaults(func=cmd_sklyanin)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = base_config()
    tols: dict = {}
    for item in getattr(args, "tol", []) or []:
        tols.update(parse_tolerance(item))
    tau = getattr(args, "tau", None)
    return cfg.with_overrides(
        tau=parse_complex(tau) if tau is not None else None,
        seed=getattr(args, "seed", None),
        output="json" if getattr(args, "json", False) else None,
        samples=getattr(args, "samples", None),
        workers=getattr(args, "workers", None),
        tolerances=tols,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = config_from_args(args)
        if cfg.tau.imag <= 0:
            raise UsageError("--tau must have positive imaginary part")
        return args.func(args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SklyError as exc:
        print(f"skly: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
