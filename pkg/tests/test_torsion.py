from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skly.elliptic import LatticeCurve
from skly.errors import BudgetExceeded, CurveMismatch, InvalidInput, InvalidLengthSequence
from skly.symmetric import lr_oracle_agreement, lr_table_by_schur
from skly.torsion import (
    Partition,
    TorsionType,
    extension_set,
    hom_dim_local,
    hom_dim_torsion,
    lengths_to_partition,
    lr_coefficient,
    lr_support,
    partition_to_lengths,
    partitions,
    torsion_from_points,
)

P = Partition
CURVE = LatticeCurve(1.2j)


def nilpotent(lam: Partition) -> np.ndarray:
    n = lam.size
    m = np.zeros((n, n))
    start = 0
    for part in lam.parts:
        for i in range(part - 1):
            m[start + i + 1, start + i] = 1
        start += part
    return m


def hom_by_commutant(lam: Partition, mu: Partition) -> int:
    """dim {X : X N_lam = N_mu X}, the module maps between the two Jordan types."""
    a, b = nilpotent(lam), nilpotent(mu)
    system = np.kron(a.T, np.eye(mu.size)) - np.kron(np.eye(lam.size), b)
    return lam.size * mu.size - np.linalg.matrix_rank(system)


# -- partitions and length sequences ------------------------------------------------


def test_partition_counts():
    assert [len(list(partitions(n))) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert [str(p) for p in partitions(4, max_length=2)] == ["(4)", "(3,1)", "(2,2)"]
    assert list(partitions(-1)) == []


def test_partition_validation():
    with pytest.raises(InvalidInput):
        P((1, 2))
    with pytest.raises(InvalidInput):
        P((2, 0))


def test_conjugate_involution():
    for n in range(9):
        for lam in partitions(n):
            assert lam.conjugate().conjugate() == lam
            assert lam.conjugate().size == n


def test_lengths_examples():
    assert partition_to_lengths(P((2, 1)), 3) == [2, 3, 3]
    assert partition_to_lengths(P((3,)), 4) == [1, 2, 3, 3]
    assert lengths_to_partition([2, 3, 3]) == P((2, 1))
    assert lengths_to_partition([]) == P()


def test_lengths_round_trip():
    for n in range(13):
        for lam in partitions(n):
            jmax = (lam.parts[0] if lam.parts else 0) + 1
            assert lengths_to_partition(partition_to_lengths(lam, jmax)) == lam


@pytest.mark.parametrize("bad", [[2, 1], [1, 3, 3], [1, 2]])
def test_invalid_length_sequences(bad):
    with pytest.raises(InvalidLengthSequence):
        lengths_to_partition(bad)


# -- Hom dimensions -------------------------------------------------------------------


def test_hom_matches_commutant_oracle():
    for n, m in product(range(1, 6), repeat=2):
        for lam in partitions(n):
            for mu in partitions(m):
                assert hom_dim_local(lam, mu) == hom_by_commutant(lam, mu)


def test_hom_of_reduced_point_powers():
    for m in range(1, 7):
        lam = P((1,) * m)
        assert hom_dim_local(lam, lam) == m * m


def test_hom_examples():
    assert hom_dim_local(P((2, 1)), P((2, 1))) == 5
    assert hom_dim_local(P((3,)), P((1,))) == 1
    t1 = TorsionType.single("p", (2,)).direct_sum(TorsionType.single("q", (1,)))
    t2 = TorsionType.single("p", (1, 1))
    assert hom_dim_torsion(t1, t2) == 2
    assert hom_dim_torsion(t2, t1) == 2


# -- Littlewood-Richardson ------------------------------------------------------------


def test_lr_examples():
    assert lr_coefficient(P((2, 1)), P((1,)), P((1, 1))) == 1
    assert lr_coefficient(P((3, 2, 1)), P((2, 1)), P((2, 1))) == 2
    assert lr_coefficient(P((2,)), P((1,)), P((1,))) == 1
    assert lr_coefficient(P((4, 2)), P((2, 1)), P((2, 1))) == 1
    assert lr_coefficient(P((3,)), P((1, 1)), P((1,))) == 0
    assert [str(x) for x in lr_support(P((1,)), P((1,)))] == ["(2)", "(1,1)"]


def test_lr_matches_schur_products():
    checked, problems = lr_oracle_agreement(6)
    assert problems == []
    assert checked > 1000


def test_lr_symmetric_and_spot_checked():
    for mu, nu in [(P((2, 1)), P((2,))), (P((3, 1)), P((1, 1)))]:
        table = lr_table_by_schur(mu, nu)
        for lam, c in table.items():
            assert lr_coefficient(lam, mu, nu) == c == lr_coefficient(lam, nu, mu)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_lr_dimension_count(a, b, data):
    # sum_lam c^lam_{mu nu} f^lam = binom(|mu|+|nu|, |mu|) f^mu f^nu
    from math import comb, factorial, prod

    def hooks(lam):
        conj = lam.conjugate().parts
        return factorial(lam.size) // prod(
            lam.parts[i] - j + conj[j] - i - 1 for i in range(lam.length) for j in range(lam.parts[i]))

    mu = data.draw(st.sampled_from(list(partitions(a))))
    nu = data.draw(st.sampled_from(list(partitions(b))))
    total = sum(lr_coefficient(lam, mu, nu) * hooks(lam) for lam in partitions(a + b))
    assert total == comb(a + b, a) * hooks(mu) * hooks(nu)


# -- torsion types and extensions ------------------------------------------------------


def test_torsion_text_and_canonical_order():
    t = torsion_from_points([("q", (1,)), ("p", (2, 1))])
    assert t.to_text() == "p:(2,1)+q:(1)"
    assert t.length == 4 and t.l_max == 2
    assert TorsionType().to_text() == "0"


def test_torsion_duplicate_points_rejected():
    with pytest.raises(InvalidInput):
        torsion_from_points([("p", (1,)), ("p", (2,))])
    with pytest.raises(InvalidInput):
        torsion_from_points([(CURVE.point(0.1), (1,)), (CURVE.point(0.6), (1,))])


def test_extension_examples():
    p1 = TorsionType.single("p", (1,))
    assert [x.to_text() for x in extension_set(p1, p1)] == ["p:(2)", "p:(1,1)"]
    q1 = TorsionType.single("q", (1,))
    assert [x.to_text() for x in extension_set(p1, q1)] == ["p:(1)+q:(1)"]
    t21 = TorsionType.single("p", (2, 1))
    got = {x.to_text() for x in extension_set(t21, p1)}
    assert got == {"p:(3,1)", "p:(2,2)", "p:(2,1,1)"}


def test_extension_invariants():
    for lam in partitions(3):
        for mu in partitions(2):
            t1, t2 = TorsionType.single("p", lam.parts), TorsionType.single("p", mu.parts)
            exts = extension_set(t1, t2)
            assert t1.direct_sum(t2) in exts
            for e in exts:
                assert e.length == 5
                assert e.local("p").contains(mu) and e.local("p").contains(lam)
                # the socle of the extension contains the socle of the subobject
                assert hom_dim_torsion(TorsionType.single("p", (1,)), e) >= mu.length


def test_extension_budget():
    big = TorsionType.single("p", (2, 1))
    with pytest.raises(BudgetExceeded):
        extension_set(big, big, budget=2)


def test_curve_mismatch():
    t1 = TorsionType.single(CURVE.point(0.1), (1,))
    t2 = TorsionType.single(LatticeCurve(1.5j).point(0.1), (1,))
    with pytest.raises(CurveMismatch):
        hom_dim_torsion(t1, t2)


def test_cycle_class():
    p, q = CURVE.point(0.1), CURVE.point(0.2 + 0.1j)
    t = torsion_from_points([(p, (2, 1)), (q, (1,))])
    d = t.cycle_class()
    assert d.degree == 4 and d.multiplicity(p) == 3
    with pytest.raises(InvalidInput):
        TorsionType.single("p", (1,)).cycle_class()


def test_more_length_examples():
    assert partition_to_lengths(P((1,)), 3) == [1, 1, 1]
    assert partition_to_lengths(P(), 2) == [0, 0]
    assert lengths_to_partition([1, 1, 1]) == P((1,))


def test_hom_trivial_cases():
    p1 = TorsionType.single("p", (1,))
    assert hom_dim_torsion(p1, p1) == 1
    assert hom_dim_torsion(p1, TorsionType.single("q", (3,))) == 0


def test_extension_with_zero_and_disjoint():
    t1 = torsion_from_points([("p", (2, 1)), ("q", (1,))])
    assert extension_set(t1, TorsionType()) == [t1]
    t2 = TorsionType.single("r", (2,))
    assert extension_set(t1, t2) == [t1.direct_sum(t2)]
