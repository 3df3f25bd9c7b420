"""Partitions, torsion-sheaf types and their Hom / extension calculus.

A torsion type is a finite set of points, each carrying a partition that
records the local module sum_j O/m^{lambda_j}.  Points are either
:class:`~skly.elliptic.CurvePoint` instances or plain string labels; labels
are assumed pairwise distinct and never coincide with numeric points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

from .elliptic import CurvePoint, Divisor, LatticeCurve
from .errors import BudgetExceeded, CurveMismatch, InvalidInput, InvalidLengthSequence

Point = Union[CurvePoint, str]


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise InvalidInput(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidInput(f"partition parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicity(self, j: int) -> int:
        return self.parts.count(j)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))

    def contains(self, other: "Partition") -> bool:
        if other.length > self.length:
            return False
        return all(a >= b for a, b in zip(self.parts, other.parts))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(n: int, max_length: int | None = None, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n, in reverse lexicographic order, optionally bounded."""
    if n < 0:
        return
    max_part = n if max_part is None else max_part
    max_length = n if max_length is None else max_length

    def rec(remaining, cap, slots):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in rec(remaining - first, first, slots - 1):
                yield (first,) + rest

    for parts in rec(n, max_part, max_length):
        yield Partition(parts)


def partition_to_lengths(lam: Partition, jmax: int) -> list[int]:
    """Lengths a_j of the module tensored with O/m^j, for j = 1..jmax."""
    if jmax < 1:
        raise InvalidInput("jmax must be at least 1")
    return [sum(min(p, j) for p in lam.parts) for j in range(1, jmax + 1)]


def lengths_to_partition(a: Sequence[int]) -> Partition:
    """Inverse of partition_to_lengths; the sequence must have stabilized by its last entry."""
    a = [int(x) for x in a]
    if not a:
        return Partition()
    diffs = [a[0]] + [a[j] - a[j - 1] for j in range(1, len(a))]
    if any(d < 0 for d in diffs):
        raise InvalidLengthSequence(f"length sequence {a} decreases")
    if any(d1 < d2 for d1, d2 in zip(diffs, diffs[1:])):
        raise InvalidLengthSequence(f"increments of {a} are not weakly decreasing")
    if (len(a) > 1 and diffs[-1] != 0) or (len(a) == 1 and a[0] != 0):
        raise InvalidLengthSequence(f"length sequence {a} has not stabilized; extend it")
    # diffs[j-1] counts the parts >= j
    parts = []
    for j in range(1, len(diffs) + 1):
        nxt = diffs[j] if j < len(diffs) else 0
        parts.extend([j] * (diffs[j - 1] - nxt))
    return Partition(tuple(sorted(parts, reverse=True)))


# ---------------------------------------------------------------------------
# torsion types


def _point_key(pt: Point):
    if isinstance(pt, str):
        return (0, pt, 0.0, 0.0)
    return (1, "", round(pt.z.real, 9), round(pt.z.imag, 9))


def point_text(pt: Point) -> str:
    if isinstance(pt, str):
        return pt
    return f"[{pt.z.real:.12g}{pt.z.imag:+.12g}j]"


def _same_point(a: Point, b: Point) -> bool:
    if isinstance(a, str) != isinstance(b, str):
        return False
    return a == b


@dataclass(frozen=True)
class TorsionType:
    """Isomorphism type of a torsion sheaf: (point, partition) pairs with distinct points."""

    support: tuple[tuple[Point, Partition], ...] = ()
    curve: LatticeCurve | None = None

    def __post_init__(self):
        entries = []
        curve = self.curve
        for pt, lam in self.support:
            lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
            if not lam.parts:
                continue
            if isinstance(pt, CurvePoint):
                if curve is None:
                    curve = pt.curve
                elif pt.curve != curve:
                    raise CurveMismatch("torsion type mixes points of different curves")
            elif not isinstance(pt, str):
                raise InvalidInput(f"unsupported point {pt!r}")
            for other, _ in entries:
                if _same_point(pt, other):
                    raise InvalidInput(f"point {point_text(pt)} appears twice")
            entries.append((pt, lam))
        entries.sort(key=lambda e: _point_key(e[0]))
        object.__setattr__(self, "support", tuple(entries))
        object.__setattr__(self, "curve", curve)

    @classmethod
    def single(cls, pt: Point, parts: Sequence[int], curve: LatticeCurve | None = None) -> "TorsionType":
        return cls(((pt, Partition(tuple(parts))),), curve)

    @property
    def points(self) -> list[Point]:
        return [pt for pt, _ in self.support]

    @property
    def length(self) -> int:
        return sum(lam.size for _, lam in self.support)

    @property
    def l_max(self) -> int:
        return max((lam.length for _, lam in self.support), default=0)

    def local(self, pt: Point) -> Partition:
        for q, lam in self.support:
            if _same_point(pt, q):
                return lam
        return Partition()

    def cycle_class(self) -> Divisor:
        if any(isinstance(pt, str) for pt in self.points):
            raise InvalidInput("cycle class needs numeric points")
        if self.curve is None:
            raise InvalidInput("cycle class of the zero sheaf needs a curve")
        return Divisor(self.curve, tuple((pt, lam.size) for pt, lam in self.support))

    def direct_sum(self, other: "TorsionType") -> "TorsionType":
        curve = check_same_curve(self, other)
        merged = []
        for pt in _union_points(self, other):
            parts = sorted(self.local(pt).parts + other.local(pt).parts, reverse=True)
            merged.append((pt, Partition(tuple(parts))))
        return TorsionType(tuple(merged), curve)

    def to_text(self) -> str:
        if not self.support:
            return "0"
        return "+".join(f"{point_text(pt)}:{lam}" for pt, lam in self.support)

    __str__ = to_text

    def __eq__(self, other):
        if not isinstance(other, TorsionType):
            return NotImplemented
        if len(self.support) != len(other.support):
            return False
        return all(_same_point(p, q) and a == b for (p, a), (q, b) in zip(self.support, other.support))

    def __hash__(self):
        return hash(tuple((_point_key(p), lam) for p, lam in self.support))

    def sort_key(self):
        return tuple((_point_key(p), tuple(-x for x in lam.parts)) for p, lam in self.support)


def check_same_curve(t1: TorsionType, t2: TorsionType) -> LatticeCurve | None:
    if t1.curve is not None and t2.curve is not None and t1.curve != t2.curve:
        raise CurveMismatch("torsion types live on different curves")
    return t1.curve if t1.curve is not None else t2.curve


def _union_points(t1: TorsionType, t2: TorsionType) -> list[Point]:
    pts = list(t1.points)
    for q in t2.points:
        if not any(_same_point(q, p) for p in pts):
            pts.append(q)
    return sorted(pts, key=_point_key)


def hom_dim_local(lam: Partition, mu: Partition) -> int:
    return sum(min(a, b) for a in lam.parts for b in mu.parts)


def hom_dim_torsion(t1: TorsionType, t2: TorsionType) -> int:
    """dim Hom(T1, T2); only common points contribute."""
    check_same_curve(t1, t2)
    return sum(hom_dim_local(lam, t2.local(pt)) for pt, lam in t1.support)


# ---------------------------------------------------------------------------
# Littlewood-Richardson coefficients


@lru_cache(maxsize=None)
def _lr_cached(lam: tuple[int, ...], mu: tuple[int, ...], nu: tuple[int, ...]) -> int:
    cells = []  # reading order: rows top to bottom, each row right to left
    for i, top in enumerate(lam):
        left = mu[i] if i < len(mu) else 0
        for j in range(top - 1, left - 1, -1):
            cells.append((i, j))
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)
    total = 0

    def place(idx: int) -> None:
        nonlocal total
        if idx == len(cells):
            total += 1
            return
        i, j = cells[idx]
        hi = len(nu)
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        lo = 1
        above = filling.get((i - 1, j))
        if above is not None:
            lo = above + 1
        for v in range(lo, hi + 1):
            if counts[v] >= nu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filling[(i, j)] = v
            place(idx + 1)
            del filling[(i, j)]
            counts[v] -= 1

    place(0)
    return total


def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """c^lam_{mu nu}: LR tableaux of skew shape lam/mu with content nu."""
    if lam.size != mu.size + nu.size or not lam.contains(mu) or not lam.contains(nu):
        return 0
    return _lr_cached(lam.parts, mu.parts, nu.parts)


def lr_support(mu: Partition, nu: Partition) -> list[Partition]:
    """All lam with c^lam_{mu nu} > 0."""
    n = mu.size + nu.size
    return [lam for lam in partitions(n, max_length=mu.length + nu.length)
            if lr_coefficient(lam, mu, nu) > 0]


def extension_set(t1: TorsionType, t2: TorsionType, budget: int | None = None) -> list[TorsionType]:
    """Types T admitting 0 -> T2 -> T -> T1 -> 0, sorted canonically."""
    curve = check_same_curve(t1, t2)
    pts = _union_points(t1, t2)
    choices = [lr_support(t2.local(pt), t1.local(pt)) for pt in pts]
    out = []
    for combo in product(*choices):
        out.append(TorsionType(tuple(zip(pts, combo)), curve))
        if budget is not None and len(out) > budget:
            raise BudgetExceeded(f"extension set exceeds budget {budget}")
    return sorted(out, key=TorsionType.sort_key)


def torsion_from_points(items: Iterable[tuple[Point, Sequence[int]]], curve: LatticeCurve | None = None) -> TorsionType:
    return TorsionType(tuple((pt, Partition(tuple(parts))) for pt, parts in items), curve)
