"""Text grammars for torsion types, divisors, charges and coordinate tuples.

    torsion  := "0" | term ("+" term)*        term := point ":" "(" int ("," int)* ")"
    divisor  := dterm ("+" dterm)*            dterm := [int "*"] point
    point    := label | "[" complex "]"

Labels are symbolic and assumed distinct; bracketed complex literals are
reduced on the curve and checked for distinctness.
"""

from __future__ import annotations

import re
from typing import Sequence

from .elliptic import CurvePoint, Divisor, LatticeCurve
from .errors import ParseError
from .fm import ChargeVector
from .torsion import Partition, Point, TorsionType

_TOKEN = re.compile(r"\s*(?:(?P<label>[A-Za-z_]\w*)|\[(?P<cplx>[^\]]*)\]|(?P<int>\d+)|(?P<sym>[:(),+*]))")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            if self.text[self.pos:].strip():
                self.fail("unexpected character", self._rest_token())
            return None, None, len(self.text)
        kind = m.lastgroup
        return kind, m.group(kind), m.start(kind) - (1 if kind == "cplx" else 0)

    def next(self):
        kind, value, start = self.peek()
        if kind is None:
            self.fail("unexpected end of input", "")
        m = _TOKEN.match(self.text, self.pos)
        self.pos = m.end()
        return kind, value, start

    def expect(self, symbol: str):
        kind, value, start = self.next()
        if kind != "sym" or value != symbol:
            self.fail(f"expected {symbol!r}", value, start)
        return start

    def at_end(self) -> bool:
        return not self.text[self.pos:].strip()

    def _rest_token(self) -> str:
        rest = self.text[self.pos:].lstrip()
        return rest.split()[0][:8] if rest else ""

    def fail(self, message: str, token: str, position: int | None = None):
        if position is None:
            position = len(self.text) - len(self.text[self.pos:].lstrip())
        raise ParseError(message, self.text, position, token or "<end>")


def _point(sc: _Scanner, curve: LatticeCurve | None):
    kind, value, start = sc.next()
    if kind == "label":
        return value, start, value
    if kind == "cplx":
        if curve is None:
            sc.fail("numeric points need a curve", value, start)
        try:
            z = complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            sc.fail("malformed complex literal", value, start)
        return CurvePoint(z, curve), start, f"[{value}]"
    sc.fail("expected a point label or [complex]", value, start)


def _check_distinct(points: Sequence[tuple[Point, int, str]], sc: _Scanner):
    for i, (p, _, _) in enumerate(points):
        for q, start, raw in points[i + 1:]:
            if type(p) is type(q) and p == q:
                sc.fail("point repeated", raw, start)


def parse_torsion(text: str, curve: LatticeCurve | None = None) -> TorsionType:
    sc = _Scanner(text)
    if text.strip() == "0":
        return TorsionType((), curve)
    entries, seen = [], []
    while True:
        pt, start, raw = _point(sc, curve)
        seen.append((pt, start, raw))
        sc.expect(":")
        sc.expect("(")
        parts = []
        while True:
            kind, value, pos = sc.next()
            if kind != "int" or int(value) <= 0:
                sc.fail("expected a positive part", value, pos)
            parts.append(int(value))
            kind, value, pos = sc.next()
            if kind == "sym" and value == ")":
                break
            if not (kind == "sym" and value == ","):
                sc.fail("expected ',' or ')'", value, pos)
        if any(a < b for a, b in zip(parts, parts[1:])):
            sc.fail("parts must be non-increasing", ",".join(map(str, parts)), start)
        entries.append((pt, Partition(tuple(parts))))
        if sc.at_end():
            break
        sc.expect("+")
    _check_distinct(seen, sc)
    return TorsionType(tuple(entries), curve)


def parse_divisor(text: str, curve: LatticeCurve | None = None):
    """A Divisor when every point is numeric, else a list of (point, multiplicity)."""
    sc = _Scanner(text)
    entries: list[tuple[Point, int]] = []
    while True:
        kind, value, start = sc.peek()
        mult = 1
        if kind == "int":
            sc.next()
            mult = int(value)
            sc.expect("*")
        pt, _, _ = _point(sc, curve)
        for i, (q, m) in enumerate(entries):
            if type(q) is type(pt) and q == pt:
                entries[i] = (q, m + mult)
                break
        else:
            entries.append((pt, mult))
        if sc.at_end():
            break
        sc.expect("+")
    if curve is not None and all(isinstance(p, CurvePoint) for p, _ in entries):
        return Divisor.from_points(curve, entries)
    return entries


def parse_charge(text: str) -> ChargeVector:
    """``deg,rank``."""
    pieces = text.split(",")
    try:
        if len(pieces) != 2:
            raise ValueError
        return ChargeVector(int(pieces[0]), int(pieces[1]))
    except ValueError:
        raise ParseError("expected deg,rank", text, 0, text) from None


def parse_coordinates(text: str, count: int = 4) -> tuple[complex, ...]:
    pieces = [p.strip() for p in text.split(",")]
    if len(pieces) != count:
        raise ParseError(f"expected {count} comma-separated numbers", text, 0, text)
    out = []
    pos = 0
    for p in pieces:
        try:
            out.append(complex(p.replace("i", "j")))
        except ValueError:
            raise ParseError("not a number", text, pos, p) from None
        pos += len(p) + 1
    return tuple(out)

