from collections import defaultdict
from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skly.errors import InvalidFraction, InvalidInput, NoSolution, ParseError
from skly.fm import (
    FM,
    SHIFT,
    ChargeVector,
    EquivalenceWord,
    Move,
    apply_word,
    connecting_word,
    continued_fraction,
    inverse_mod_step,
    pair_invariants,
    reconstruct_fraction,
    solve_fo_correspondence,
    source_charges,
    twist,
)

V = ChargeVector

moves = st.one_of(st.just(FM), st.just(SHIFT), st.integers(-6, 6).map(twist))
words = st.lists(moves, max_size=10).map(lambda ms: EquivalenceWord(tuple(ms)))
charges = st.builds(V, st.integers(-20, 20), st.integers(-20, 20))


def det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


# -- moves and words -------------------------------------------------------------------


def test_move_examples():
    assert apply_word(EquivalenceWord((FM,)), V(1, 2)) == V(-2, 1)
    assert apply_word(EquivalenceWord((FM, FM)), V(1, 2)) == V(-1, -2)
    assert apply_word(EquivalenceWord((twist(3),)), V(1, 2)) == V(7, 2)
    assert apply_word(EquivalenceWord((twist(0),)), V(1, 2)) == V(1, 2)
    assert apply_word(EquivalenceWord((SHIFT,)), V(1, 2)) == V(-1, -2)


def test_words_apply_left_to_right():
    w = EquivalenceWord.parse("T(-1);F;T(2);S")
    assert apply_word(w, V(3, 2)) == V(0, -1)
    assert apply_word(w, V(1, 2)) == V(4, 1)


def test_bad_moves():
    with pytest.raises(InvalidInput):
        Move("X")
    with pytest.raises(InvalidInput):
        Move("F", 2)


@settings(max_examples=200, deadline=None)
@given(words, charges, charges, st.integers(-5, 5))
def test_words_are_linear_with_unit_determinant(w, a, b, c):
    assert det(w.matrix()) == 1
    assert apply_word(w, a + b) == apply_word(w, a) + apply_word(w, b)
    assert apply_word(w, a.scale(c)) == apply_word(w, a).scale(c)


@settings(max_examples=200, deadline=None)
@given(words, charges)
def test_inverse_and_simplify(w, v):
    assert apply_word(w.then(w.inverse()), v) == v
    assert apply_word(w.simplified(), v) == apply_word(w, v)
    assert len(w.simplified()) <= len(w)


@settings(max_examples=200, deadline=None)
@given(words)
def test_word_text_round_trip(w):
    assert EquivalenceWord.parse(w.to_text()) == w


def test_word_parse_errors():
    with pytest.raises(ParseError) as err:
        EquivalenceWord.parse("F;T(x);S")
    assert err.value.token == "T(x)" and err.value.position == 2
    assert EquivalenceWord.parse("") == EquivalenceWord()


def test_primitivity_preserved():
    for v in (V(4, 1), V(3, 7), V(-2, 5)):
        assert apply_word(EquivalenceWord.parse("F;T(3);F;T(-2);S"), v).is_primitive


def test_rank_positive_flag():
    assert V(0, 1).rank_positive and V(1, 0).rank_positive
    assert not V(0, -1).rank_positive and not V(-1, 0).rank_positive


# -- pair invariants -------------------------------------------------------------------


def test_pair_invariant_examples():
    assert tuple(pair_invariants(V(1, 2), V(3, 2))) == (4, 3)
    assert tuple(pair_invariants(V(4, 1), V(0, -1))) == (4, 3)
    assert pair_invariants(V(1, 2), V(3, 2)).signed_det == 4


def test_pair_invariant_errors():
    with pytest.raises(InvalidInput):
        pair_invariants(V(1, 2), V(2, 4))
    with pytest.raises(NoSolution):
        pair_invariants(V(1, 0), V(0, 2))


@pytest.mark.parametrize("move", [FM, SHIFT, twist(1), twist(-3)])
def test_invariants_preserved_by_generators(move):
    w = EquivalenceWord((move,))
    for a, b, c, d in product(range(-3, 4), repeat=4):
        v1, v2 = V(a, b), V(c, d)
        try:
            before = pair_invariants(v1, v2)
        except (InvalidInput, NoSolution):
            continue
        after = pair_invariants(apply_word(w, v1), apply_word(w, v2))
        assert after == before


def _small_pairs(bound):
    rng = range(-bound, bound + 1)
    for a, b, c, d in product(rng, repeat=4):
        v1, v2 = V(a, b), V(c, d)
        try:
            inv = pair_invariants(v1, v2)
        except (InvalidInput, NoSolution):
            continue
        yield (v1, v2), inv


def test_invariants_complete_for_small_entries():
    """Each invariant class is a single orbit; distinct classes are never connected."""
    classes = defaultdict(list)
    for pair, inv in _small_pairs(5):
        classes[(inv.signed_det, inv.alpha)].append(pair)
    reps = {key: members[0] for key, members in classes.items()}
    for key, members in classes.items():
        target = reps[key]
        for pair in members:
            w = connecting_word(pair, target)
            assert w is not None
            assert (apply_word(w, pair[0]), apply_word(w, pair[1])) == target
    keys = sorted(reps)
    for k1, k2 in zip(keys, keys[1:]):
        assert connecting_word(reps[k1], reps[k2]) is None


def test_bounded_search_oracle_agrees():
    """Breadth-first search over F, T(1), T(-1), S to depth 8 only reaches pairs with equal invariants."""
    gens = [EquivalenceWord((m,)) for m in (FM, twist(1), twist(-1), SHIFT)]
    start = (V(1, 2), V(3, 2))
    inv = pair_invariants(*start)
    seen = {start}
    frontier = [start]
    for _ in range(8):
        nxt = []
        for a, b in frontier:
            for g in gens:
                img = (apply_word(g, a), apply_word(g, b))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    assert len(seen) > 100
    for pair in seen:
        assert pair_invariants(*pair) == inv
        w = connecting_word(start, pair)
        assert w is not None and (apply_word(w, start[0]), apply_word(w, start[1])) == pair


# -- continued fractions and the correspondence ------------------------------------------


def test_continued_fraction_examples():
    assert continued_fraction(1, 7) == [7]
    assert continued_fraction(2, 5) == [3, 2]
    assert reconstruct_fraction([3, 2]) == Fraction(2, 5)


def test_continued_fraction_exhaustive():
    for r in range(2, 31):
        for d in range(1, r):
            if gcd(d, r) == 1:
                terms = continued_fraction(d, r)
                assert min(terms) >= 2
                assert reconstruct_fraction(terms) == Fraction(d, r)


@pytest.mark.parametrize("d,r", [(0, 3), (3, 3), (2, 4), (5, 3)])
def test_continued_fraction_invalid(d, r):
    with pytest.raises(InvalidFraction):
        continued_fraction(d, r)


def test_inverse_mod_step():
    assert inverse_mod_step(2, 1) == 1
    assert inverse_mod_step(5, 2) == 3
    for r in range(2, 12):
        for d in range(1, r):
            if gcd(r, d) == 1:
                assert (inverse_mod_step(r, d) * d) % r == 1 % r


def test_solve_example():
    sol = solve_fo_correspondence(2, 1, 1)
    assert sol.word.to_text() == "T(-1);F;T(2);S"
    assert sol.xi == V(4, 1)
    assert tuple(sol.invariants) == (4, 3)


def test_solve_all_small_cases():
    for r in range(2, 8):
        for d in range(1, r):
            if gcd(r, d) != 1:
                continue
            for k in range(1, 4):
                sol = solve_fo_correspondence(r, d, k)
                e, e_d = source_charges(r, d, k)
                n = inverse_mod_step(r, d)
                assert apply_word(sol.word, e_d) == V(0, -1)
                assert apply_word(sol.word, e) == sol.xi
                assert sol.xi == V(r * r * k, r * k * n - 1)
                assert sol.xi.is_primitive
                expected = (k * r * r, (1 - r * k * n) % (k * r * r))
                assert tuple(pair_invariants(e, e_d)) == expected
                assert tuple(sol.invariants) == expected


def test_solve_rejects_bad_input():
    for args in [(2, 2, 1), (4, 2, 1), (3, 1, 0), (3, 4, 1)]:
        with pytest.raises(InvalidInput):
            solve_fo_correspondence(*args)
