"""Charge-level action of autoequivalences of an elliptic curve.

Charges are (degree, rank) pairs.  Three moves generate the action:

    F      (d, r) -> (-r, d)        Fourier-Mukai transform
    T(n)   (d, r) -> (d + n r, r)   tensor with a degree-n line bundle
    S      (d, r) -> (-d, -r)       shift by one

A word is a sequence of moves applied left to right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .errors import InvalidFraction, InvalidInput, NoSolution, ParseError


@dataclass(frozen=True, order=True)
class ChargeVector:
    deg: int
    rank: int

    def __add__(self, other: "ChargeVector") -> "ChargeVector":
        return ChargeVector(self.deg + other.deg, self.rank + other.rank)

    def __neg__(self) -> "ChargeVector":
        return ChargeVector(-self.deg, -self.rank)

    def __sub__(self, other: "ChargeVector") -> "ChargeVector":
        return self + (-other)

    def scale(self, c: int) -> "ChargeVector":
        return ChargeVector(c * self.deg, c * self.rank)

    @property
    def is_primitive(self) -> bool:
        return gcd(self.deg, self.rank) == 1

    @property
    def rank_positive(self) -> bool:
        """True when the charge is that of a sheaf rather than a shifted one."""
        return self.rank > 0 or (self.rank == 0 and self.deg > 0)

    def to_json(self) -> dict:
        return {"deg": self.deg, "rank": self.rank, "rank_positive": self.rank_positive}


Matrix = tuple[tuple[int, int], tuple[int, int]]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


IDENTITY: Matrix = ((1, 0), (0, 1))


@dataclass(frozen=True)
class Move:
    kind: str  # "F", "T" or "S"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("F", "T", "S"):
            raise InvalidInput(f"unknown move {self.kind!r}")
        if self.kind != "T" and self.n:
            raise InvalidInput(f"move {self.kind} takes no argument")

    @property
    def matrix(self) -> Matrix:
        if self.kind == "F":
            return ((0, -1), (1, 0))
        if self.kind == "T":
            return ((1, self.n), (0, 1))
        return ((-1, 0), (0, -1))

    def inverse(self) -> tuple["Move", ...]:
        if self.kind == "F":
            return (Move("F"), Move("S"))
        if self.kind == "T":
            return (Move("T", -self.n),)
        return (self,)

    def to_text(self) -> str:
        return f"T({self.n})" if self.kind == "T" else self.kind


FM, SHIFT = Move("F"), Move("S")


def twist(n: int) -> Move:
    return Move("T", n)


_MOVE = re.compile(r"\s*(?:(F)|(S)|T\(\s*([+-]?\d+)\s*\))\s*")


@dataclass(frozen=True)
class EquivalenceWord:
    moves: tuple[Move, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "EquivalenceWord":
        """Read words such as ``T(-1);F;T(2);S``; the empty string is the identity."""
        if not text.strip():
            return cls()
        moves = []
        pos = 0
        for piece in text.split(";"):
            m = _MOVE.fullmatch(piece)
            if not m:
                raise ParseError("expected F, S or T(n)", text, pos, piece.strip() or ";")
            if m.group(1):
                moves.append(FM)
            elif m.group(2):
                moves.append(SHIFT)
            else:
                moves.append(twist(int(m.group(3))))
            pos += len(piece) + 1
        return cls(tuple(moves))

    def to_text(self) -> str:
        return ";".join(m.to_text() for m in self.moves)

    __str__ = to_text

    def __len__(self):
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def then(self, other: "EquivalenceWord") -> "EquivalenceWord":
        return EquivalenceWord(self.moves + other.moves)

    def inverse(self) -> "EquivalenceWord":
        out: list[Move] = []
        for m in reversed(self.moves):
            out.extend(m.inverse())
        return EquivalenceWord(tuple(out))

    def matrix(self) -> Matrix:
        total = IDENTITY
        for m in self.moves:
            total = _matmul(m.matrix, total)
        return total

    def simplified(self) -> "EquivalenceWord":
        """Merge adjacent twists, drop T(0), cancel S;S and rewrite F;F as S (same action)."""
        out: list[Move] = []
        for m in self.moves:
            if m.kind == "T" and m.n == 0:
                continue
            if out and m.kind == "T" and out[-1].kind == "T":
                n = out.pop().n + m.n
                if n:
                    out.append(twist(n))
                continue
            if out and m.kind == "S" and out[-1].kind == "S":
                out.pop()
                continue
            if out and m.kind == "F" and out[-1].kind == "F":
                out.pop()
                out.append(SHIFT)
                continue
            out.append(m)
        word = EquivalenceWord(tuple(out))
        return word if word == self else word.simplified()


def apply_word(word: EquivalenceWord, v: ChargeVector) -> ChargeVector:
    (a, b), (c, d) = word.matrix()
    return ChargeVector(a * v.deg + b * v.rank, c * v.deg + d * v.rank)


# ---------------------------------------------------------------------------
# invariants of pairs


@dataclass(frozen=True)
class PairInvariants:
    """|det| and alpha with v1 = alpha * v2 mod |det|; ``signed_det`` is rank1*deg2 - deg1*rank2."""

    det: int
    alpha: int
    signed_det: int

    def __iter__(self):
        return iter((self.det, self.alpha))

    def to_json(self) -> dict:
        return {"det": self.det, "alpha": self.alpha, "signed_det": self.signed_det}


def signed_det(v1: ChargeVector, v2: ChargeVector) -> int:
    return v1.rank * v2.deg - v1.deg * v2.rank


def pair_invariants(v1: ChargeVector, v2: ChargeVector) -> PairInvariants:
    sd = signed_det(v1, v2)
    if sd == 0:
        raise InvalidInput(f"charges {v1} and {v2} are proportional")
    m = abs(sd)
    for a in range(m):
        if gcd(a, m) != 1 and m != 1:
            continue
        if (v1.deg - a * v2.deg) % m == 0 and (v1.rank - a * v2.rank) % m == 0:
            return PairInvariants(m, a, sd)
    raise NoSolution(f"no unit alpha with {v1} = alpha*{v2} mod {m}")


# ---------------------------------------------------------------------------
# continued fractions and the correspondence word


def continued_fraction(d: int, r: int) -> list[int]:
    """[r1, ..., rp] with every ri >= 2 and d/r = 1/(r1 - 1/(r2 - ... - 1/rp))."""
    if not (0 < d < r) or gcd(d, r) != 1:
        raise InvalidFraction(f"need 0 < d < r with gcd 1, got d={d}, r={r}")
    out = []
    while d:
        ri = -(-r // d)
        out.append(ri)
        d, r = ri * d - r, d
    return out


def reconstruct_fraction(terms: Sequence[int]) -> Fraction:
    if not terms:
        raise InvalidFraction("empty continued fraction")
    x = Fraction(terms[-1])
    for ri in reversed(terms[:-1]):
        x = ri - 1 / x
    return 1 / x


def inverse_mod_step(r: int, d: int) -> int:
    """Smallest positive n with m*r + n*d = 1 for some integer m."""
    for n in range(1, r + 1):
        if (n * d - 1) % r == 0:
            return n
    raise InvalidInput(f"d={d} is not invertible mod r={r}")


@dataclass(frozen=True)
class Correspondence:
    word: EquivalenceWord
    xi: ChargeVector
    invariants: PairInvariants
    expected: PairInvariants
    n: int
    fraction: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "word": self.word.to_text(),
            "xi": self.xi.to_json(),
            "invariants": self.invariants.to_json(),
            "expected": self.expected.to_json(),
            "n": self.n,
            "continued_fraction": list(self.fraction),
        }


def source_charges(r: int, d: int, k: int) -> tuple[ChargeVector, ChargeVector]:
    """Charges of E (rank r, degree d) and of E(D) with deg D = k."""
    return ChargeVector(d, r), ChargeVector(d + k * r, r)


def solve_fo_correspondence(r: int, d: int, k: int) -> Correspondence:
    """Word sending E(D) to O_point[1] and the resulting charge xi of the image of E."""
    if not (0 < d < r) or gcd(r, d) != 1 or k < 1:
        raise InvalidInput(f"need 0 < d < r coprime and k >= 1, got r={r}, d={d}, k={k}")
    terms = continued_fraction(d, r)
    moves = [twist(-k)]
    for ri in terms:
        moves += [FM, twist(ri)]
    moves.append(SHIFT)
    word = EquivalenceWord(tuple(moves))
    e, e_d = source_charges(r, d, k)
    if apply_word(word, e_d) != ChargeVector(0, -1):
        raise AssertionError(f"word {word} does not send {e_d} to (0,-1)")
    xi = apply_word(word, e)
    n = inverse_mod_step(r, d)
    m = k * r * r
    expected = PairInvariants(m, (1 - r * k * n) % m, m)
    return Correspondence(word, xi, pair_invariants(xi, ChargeVector(0, -1)), expected, n, tuple(terms))


# ---------------------------------------------------------------------------
# connecting pairs with equal invariants


def normalizing_word(v: ChargeVector) -> EquivalenceWord:
    """A word sending a primitive charge to (0, 1), built by the Euclidean algorithm."""
    if not v.is_primitive:
        raise InvalidInput(f"{v} is not primitive")
    moves: list[Move] = []
    d, r = v.deg, v.rank
    while True:
        if r == 0:
            moves.append(FM)
            d, r = 0, d
        if d == 0:
            if r == -1:
                moves.append(SHIFT)
            return EquivalenceWord(tuple(moves)).simplified()
        q = d // r
        if q:
            moves.append(twist(-q))
            d -= q * r
        if d:
            moves.append(FM)
            d, r = -r, d


def lower_shear(c: int) -> EquivalenceWord:
    """Word acting as (d, r) -> (d, r + c d)."""
    return EquivalenceWord((FM, twist(-c), FM, SHIFT))


def connecting_word(pair1: tuple[ChargeVector, ChargeVector],
                    pair2: tuple[ChargeVector, ChargeVector]) -> EquivalenceWord | None:
    """A word sending pair1 to pair2 simultaneously, or None when their invariants differ."""
    try:
        inv1 = pair_invariants(*pair1)
        inv2 = pair_invariants(*pair2)
    except (InvalidInput, NoSolution):
        return None
    if inv1.signed_det != inv2.signed_det or inv1.alpha != inv2.alpha:
        return None
    if not (pair1[1].is_primitive and pair2[1].is_primitive):
        return None
    n1, n2 = normalizing_word(pair1[1]), normalizing_word(pair2[1])
    a1, a2 = apply_word(n1, pair1[0]), apply_word(n2, pair2[0])
    # both are (-det, b) with b = alpha mod |det|
    shift, rem = divmod(a2.rank - a1.rank, a1.deg)
    if rem or a1.deg != a2.deg:
        return None
    return n1.then(lower_shear(shift)).then(n2.inverse()).simplified()
