"""Schur polynomials in finitely many variables, used to cross-check LR coefficients.

Polynomials are dicts from exponent tuples to integer coefficients.  A Schur
polynomial is the generating function of semistandard tableaux, and a product
of Schur polynomials is decomposed by repeatedly peeling off the
lexicographically leading monomial.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .torsion import Partition, partitions

Poly = dict[tuple[int, ...], int]


@lru_cache(maxsize=None)
def _schur(parts: tuple[int, ...], nvars: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    if len(parts) > nvars:
        return ()
    cells = [(i, j) for i, row in enumerate(parts) for j in range(row)]
    fill: dict[tuple[int, int], int] = {}
    acc: Counter = Counter()

    def rec(idx: int) -> None:
        if idx == len(cells):
            exps = [0] * nvars
            for v in fill.values():
                exps[v] += 1
            acc[tuple(exps)] += 1
            return
        i, j = cells[idx]
        lo = 0
        if j > 0:
            lo = fill[(i, j - 1)]
        if i > 0:
            lo = max(lo, fill[(i - 1, j)] + 1)
        for v in range(lo, nvars):
            fill[(i, j)] = v
            rec(idx + 1)
        fill.pop((i, j), None)

    rec(0)
    return tuple(sorted(acc.items()))


def schur_polynomial(lam: Partition, nvars: int) -> Poly:
    return dict(_schur(lam.parts, nvars))


def multiply(p: Poly, q: Poly) -> Poly:
    out: Counter = Counter()
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in out.items() if c}


def schur_expand(p: Poly, nvars: int) -> dict[Partition, int]:
    """Coefficients of a symmetric polynomial in the Schur basis."""
    rest = dict(p)
    out: dict[Partition, int] = {}
    while rest:
        lead = max(rest)
        c = rest[lead]
        lam = Partition(tuple(x for x in lead if x))
        if list(lead) != sorted(lead, reverse=True):
            raise ValueError("polynomial is not symmetric")
        out[lam] = c
        for e, v in schur_polynomial(lam, nvars).items():
            rest[e] = rest.get(e, 0) - c * v
            if rest[e] == 0:
                del rest[e]
    return out


def lr_table_by_schur(mu: Partition, nu: Partition) -> dict[Partition, int]:
    """All nonzero c^lam_{mu nu} from the product s_mu * s_nu."""
    n = max(1, mu.length + nu.length)
    return schur_expand(multiply(schur_polynomial(mu, n), schur_polynomial(nu, n)), n)


def lr_oracle_agreement(max_size: int) -> tuple[int, list[str]]:
    """Compare lr_coefficient with the Schur oracle for every |mu| + |nu| <= max_size.

    Returns the number of coefficients compared and a list of mismatch descriptions.
    """
    from .torsion import lr_coefficient

    checked = 0
    problems: list[str] = []
    for total in range(max_size + 1):
        for a in range(total + 1):
            for mu in partitions(a):
                for nu in partitions(total - a):
                    table = lr_table_by_schur(mu, nu)
                    for lam in partitions(total):
                        got = lr_coefficient(lam, mu, nu)
                        want = table.get(lam, 0)
                        checked += 1
                        if got != want:
                            problems.append(f"c^{lam}_{{{mu},{nu}}}: tableaux {got}, schur {want}")
                        if got != lr_coefficient(lam, nu, mu):
                            problems.append(f"c^{lam}_{{{mu},{nu}}} is not symmetric")
    return checked, problems
