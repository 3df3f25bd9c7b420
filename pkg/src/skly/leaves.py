"""Symplectic-leaf types of the elliptic bracket and their dimensions.

Leaf types are indexed by a partition nu of r*k together with one
partition per part of nu (its local torsion type).  Dimensions come from

    leaf_dim = r^2 k - dim Hom(H0, H0) - dim Hom(H1, H1) - dim Hom(H0, H1)

where H0, H1 are the kernel and cokernel of phi, evaluated with the
Hom calculus of stable bundles and torsion sheaves on an elliptic curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Sequence, Union

from .elliptic import (
    Divisor,
    LatticeCurve,
    abel_jacobi_equivalent,
    j_constants,
    torsion_label_points,
)
from .errors import BudgetExceeded, CurveMismatch, InvalidInput, UnrealizablePair
from .polynomial import J, ParamPolynomial
from .poisson import sklyanin_casimirs
from .torsion import (
    Partition,
    Point,
    TorsionType,
    extension_set,
    hom_dim_local,
    hom_dim_torsion,
    partitions,
)


@dataclass(frozen=True)
class StableBundle:
    """A stable bundle known by its charge; ``label`` tells apart non-isomorphic ones of equal charge."""

    rank: int
    degree: int
    label: str = ""

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput("stable bundles have positive rank")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)


def line_bundle(degree: int, label: str = "") -> StableBundle:
    return StableBundle(1, degree, label)


@dataclass(frozen=True)
class CokernelType:
    """Cokernel of phi: a torsion part, plus a line bundle of degree ``line_degree`` when phi is not injective."""

    torsion: TorsionType = field(default_factory=TorsionType)
    line_degree: int | None = None

    @property
    def injective(self) -> bool:
        return self.line_degree is None


def hom_bundles(a: StableBundle, b: StableBundle) -> int:
    if a.slope == b.slope:
        return 1 if (a.rank, a.degree, a.label) == (b.rank, b.degree, b.label) else 0
    if a.slope < b.slope:
        return a.rank * b.degree - a.degree * b.rank
    return 0


@dataclass(frozen=True)
class Sheaf:
    """Direct sum of stable bundles and a torsion sheaf."""

    bundles: tuple[StableBundle, ...] = ()
    torsion: TorsionType = field(default_factory=TorsionType)


def hom_dim(a: Sheaf, b: Sheaf) -> int:
    total = sum(hom_bundles(x, y) for x in a.bundles for y in b.bundles)
    total += sum(x.rank * b.torsion.length for x in a.bundles)
    total += hom_dim_torsion(a.torsion, b.torsion)
    # torsion -> bundle contributes nothing
    return total


def _as_sheaf(obj) -> Sheaf:
    if obj is None:
        return Sheaf()
    if isinstance(obj, Sheaf):
        return obj
    if isinstance(obj, StableBundle):
        return Sheaf((obj,))
    if isinstance(obj, TorsionType):
        return Sheaf((), obj)
    if isinstance(obj, CokernelType):
        bundles = () if obj.line_degree is None else (line_bundle(obj.line_degree, "L"),)
        return Sheaf(bundles, obj.torsion)
    raise InvalidInput(f"cannot interpret {obj!r} as a sheaf")


def admissible(torsion: TorsionType, r: int, divisor: Divisor) -> bool:
    """Whether T is the cokernel type of some injective phi for rank r and pole divisor D."""
    if r < 1 or divisor.degree < 1:
        raise InvalidInput("need r >= 1 and deg D >= 1")
    if torsion.curve is not None and torsion.curve != divisor.curve:
        raise CurveMismatch("torsion type and divisor live on different curves")
    if torsion.l_max > r or torsion.length != r * divisor.degree:
        return False
    return abel_jacobi_equivalent(torsion.cycle_class(), divisor.scale(r))


def non_injective_bounds(n: int, torsion_length: int) -> range:
    """Allowed d(L) for rank 2, degree 1 and a pole divisor of degree n."""
    return range(n + 1, 2 * n - torsion_length + 1)


def kernel_degree(n: int, line_degree: int, torsion_length: int) -> int:
    # rank 2, degree 1: d(L) + l(T) - d(K) = 2n
    return line_degree + torsion_length - 2 * n


def leaf_dimension(h0, h1, r: int, k: int) -> int:
    """r^2 k minus the three Hom dimensions among kernel H0 and cokernel H1."""
    coker = h1 if isinstance(h1, CokernelType) else CokernelType(h1 if h1 is not None else TorsionType())
    kernel = _as_sheaf(h0)
    if not kernel.bundles and coker.injective:
        t_ = coker.torsion
        if t_.l_max > r or t_.length != r * k:
            raise UnrealizablePair(
                f"torsion {t_} is not a cokernel for r={r}, k={k} (needs l_max <= r and length r*k)"
            )
    else:
        _check_non_injective(kernel, coker, r, k)
    cok = _as_sheaf(coker)
    return r * r * k - hom_dim(kernel, kernel) - hom_dim(cok, cok) - hom_dim(kernel, cok)


def _check_non_injective(kernel: Sheaf, coker: CokernelType, r: int, k: int) -> None:
    if r != 2:
        raise UnrealizablePair("non-injective cokernel data is only classified in rank 2")
    if coker.injective or len(kernel.bundles) != 1 or kernel.bundles[0].rank != 1 or kernel.torsion.length:
        raise UnrealizablePair("rank 2 non-injective data needs a line-bundle kernel and a line bundle in the cokernel")
    ell = coker.torsion.length
    if coker.torsion.l_max > 1:
        raise UnrealizablePair("the torsion part must have single-row local types")
    if coker.line_degree not in non_injective_bounds(k, ell):
        raise UnrealizablePair(f"d(L)={coker.line_degree} violates {k + 1} <= d(L) <= {2 * k - ell}")
    want = kernel_degree(k, coker.line_degree, ell)
    if kernel.bundles[0].degree != want:
        raise UnrealizablePair(f"kernel degree must be {want} for d(L)={coker.line_degree}, l(T)={ell}")


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class LeafType:
    nu: Partition
    lambdas: tuple[Partition, ...]
    leaf_dim: int
    base_dim: int
    stratum_dim: int

    def to_json(self) -> dict:
        return {
            "nu": list(self.nu.parts),
            "lambdas": [list(lam.parts) for lam in self.lambdas],
            "leaf_dim": self.leaf_dim,
            "base_dim": self.base_dim,
            "stratum_dim": self.stratum_dim,
        }

    def torsion(self, labels: Sequence[str] | None = None) -> TorsionType:
        """A representative with pairwise distinct symbolic points."""
        labels = labels or [f"x{i + 1}" for i in range(len(self.lambdas))]
        return TorsionType(tuple(zip(labels, self.lambdas)))


def _leaf_type(nu: Partition, lambdas: tuple[Partition, ...], r: int, k: int) -> LeafType:
    hom = sum(hom_dim_local(lam, lam) for lam in lambdas)
    leaf = r * r * k - hom
    base = nu.length - 1
    return LeafType(nu, lambdas, leaf, base, leaf + base)


def _dominance_desc(lam: Partition):
    return tuple(-p for p in lam.parts)


def enumerate_strata(r: int, k: int, budget: int | None = None) -> list[LeafType]:
    """All pairs (nu, lambdas) for rank r and pole degree k, generic stratum first."""
    if r < 1 or k < 1:
        raise InvalidInput("need r >= 1 and k >= 1")
    out: list[LeafType] = []
    for nu in sorted(partitions(r * k), key=lambda p: (-p.length, p.parts)):
        blocks: list[tuple[int, int]] = []
        for part in nu.parts:
            if blocks and blocks[-1][0] == part:
                blocks[-1] = (part, blocks[-1][1] + 1)
            else:
                blocks.append((part, 1))
        per_block = []
        for size, mult in blocks:
            local = sorted(partitions(size, max_length=r), key=_dominance_desc)
            per_block.append(list(combinations_with_replacement(local, mult)))
        for choice in product(*per_block):
            lambdas = tuple(lam for group in choice for lam in group)
            out.append(_leaf_type(nu, lambdas, r, k))
            if budget is not None and len(out) > budget:
                raise BudgetExceeded(f"more than {budget} leaf types for r={r}, k={k}")
    return out


# ---------------------------------------------------------------------------
# rank 2


@dataclass(frozen=True)
class Rank2Family:
    cokernel: CokernelType
    kernel_degree: int | None
    leaf_dim: int
    constraint: str

    def to_json(self) -> dict:
        c = self.cokernel
        return {
            "injective": c.injective,
            "torsion": c.torsion.to_text(),
            "torsion_length": c.torsion.length,
            "line_degree": c.line_degree,
            "kernel_degree": self.kernel_degree,
            "leaf_dim": self.leaf_dim,
            "constraint": self.constraint,
        }


def rank2_families(n: int) -> list[Rank2Family]:
    """Cokernel families for rank 2, degree 1 and a pole divisor of degree n."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    out = []
    for lt in enumerate_strata(2, n):
        out.append(Rank2Family(CokernelType(lt.torsion()), None, lt.leaf_dim,
                               f"sum of |lambda_i| x_i ~ 2D (degree {2 * n})"))
    for d_line in range(n + 1, 2 * n + 1):
        for ell in range(0, 2 * n - d_line + 1):
            torsion = TorsionType(tuple((f"y{i + 1}", Partition((1,))) for i in range(ell)))
            coker = CokernelType(torsion, d_line)
            kdeg = kernel_degree(n, d_line, ell)
            dim = leaf_dimension(line_bundle(kdeg, "K"), coker, 2, n)
            out.append(Rank2Family(coker, kdeg, dim,
                                   f"single-row torsion of length {ell}; d(K) = {kdeg}"))
    return out


def rank2_classify(n: int) -> list[CokernelType]:
    return [f.cokernel for f in rank2_families(n)]


# ---------------------------------------------------------------------------
# Casimir fibers and products

DivisorLike = Union[Divisor, Sequence[tuple[Point, int]]]


def _divisor_entries(zeros: DivisorLike) -> tuple[list[tuple[Point, int]], LatticeCurve | None]:
    if isinstance(zeros, Divisor):
        return list(zeros.entries), zeros.curve
    entries: list[tuple[Point, int]] = []
    for pt, m in zeros:
        for i, (q, m0) in enumerate(entries):
            if type(q) is type(pt) and q == pt:
                entries[i] = (q, m0 + m)
                break
        else:
            entries.append((pt, m))
    return entries, None


def leaves_over_casimir_fiber(zeros: DivisorLike, r: int, budget: int | None = None) -> list[TorsionType]:
    """Torsion types with cycle class ``zeros`` and l_max <= r."""
    entries, curve = _divisor_entries(zeros)
    if any(m < 0 for _, m in entries):
        raise InvalidInput("zeros must be an effective divisor")
    entries = [(pt, m) for pt, m in entries if m]
    options = [list(partitions(m, max_length=r)) for _, m in entries]
    out = []
    for combo in product(*options):
        out.append(TorsionType(tuple((pt, lam) for (pt, _), lam in zip(entries, combo)), curve))
        if budget is not None and len(out) > budget:
            raise BudgetExceeded(f"more than {budget} leaves over the fiber")
    return sorted(out, key=TorsionType.sort_key)


def product_decompose(t1: TorsionType, t2: TorsionType, r: int) -> list[TorsionType]:
    """Leaf types meeting the product of the leaves of T1 and T2."""
    return [t_ for t_ in extension_set(t1, t2) if t_.l_max <= r]


# ---------------------------------------------------------------------------
# the rank 2, degree 1, simple pole census


@dataclass(frozen=True)
class CensusFamily:
    index: int
    name: str
    leaf_dim: int
    cokernel: str
    equations: tuple[str, ...]
    parameters: dict

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "leaf_dim": self.leaf_dim,
            "cokernel": self.cokernel,
            "equations": list(self.equations),
            "parameters": self.parameters,
        }


def exceptional_quadrics() -> dict[str, ParamPolynomial]:
    """Degenerate members of the pencil C1 + mu*C2, keyed by the torsion label (1, 2, 3 or e)."""
    c1, c2 = sklyanin_casimirs()
    return {
        "3": c1,
        "1": c1 - J("J31") * c2,
        "2": c1 - J("J32") * c2,
        "e": c2,
    }


def quadric_vertices() -> dict[str, tuple[int, int, int, int]]:
    """Coordinate points P_a where the exceptional quadric is a cone."""
    return {"e": (1, 0, 0, 0), "1": (0, 1, 0, 0), "2": (0, 0, 1, 0), "3": (0, 0, 0, 1)}


def _num(z: complex) -> list[float]:
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


def sklyanin_leaf_census(curve: LatticeCurve | None = None) -> list[CensusFamily]:
    curve = curve or LatticeCurve()
    _, J31, J32 = j_constants(curve)
    labels = torsion_label_points(curve)
    c1, c2 = sklyanin_casimirs()
    quadrics = exceptional_quadrics()
    vertices = quadric_vertices()
    p, q = "p", "q"
    dim1 = leaf_dimension(None, TorsionType(((p, Partition((1,))), (q, Partition((1,))))), 2, 1)
    dim2 = leaf_dimension(None, TorsionType.single(p, (2,)), 2, 1)
    dim3 = leaf_dimension(None, TorsionType.single(p, (1, 1)), 2, 1)
    dim4 = leaf_dimension(line_bundle(0, "K"), CokernelType(TorsionType(), 2), 2, 1)
    base = (c1.to_text() + " = 0", c2.to_text() + " = 0")
    torsion_pts = {a: _num(z) for a, z in sorted(labels.items())}
    return [
        CensusFamily(1, "pencil", dim1, "O_p+O_q, p+q ~ 2e, p != q",
                     (f"({c1.to_text()}) + mu*({c2.to_text()}) = 0",),
                     {"exceptional_mu": {"3": _num(0j), "1": _num(-J31), "2": _num(-J32), "e": "inf"},
                      "minus": "Z"}),
        CensusFamily(2, "exceptional-quadric", dim2, "O_2p, p a 2-torsion point",
                     tuple(f"a={a}: {quadrics[a].to_text()} = 0" for a in ("e", "1", "2", "3")),
                     {"torsion_points": torsion_pts, "minus": "Z and P_a"}),
        CensusFamily(3, "vertex", dim3, "O_p+O_p, p a 2-torsion point",
                     tuple(f"P_{a} = {list(v)}" for a, v in vertices.items()),
                     {"torsion_points": torsion_pts}),
        CensusFamily(4, "base-curve", dim4, "L+0 with d(L)=2, kernel K of degree 0",
                     base, {"points_of_Z": "one leaf per degree-0 line bundle K"}),
    ]
