import itertools

import pytest
from hypothesis import given, strategies as st

from permclass.errors import CapError, InvalidWordError, OutOfRangeError
from permclass.perm import (Parity, Permutation, all_permutations, identity, inversions,
                            longest_monotone, parity, pattern_of, rank, unrank)


def P(s):
    return Permutation.parse(s)


def lex_list(n):
    # independent of the ranking code: itertools yields lexicographic order
    return [tuple(p) for p in itertools.permutations(range(1, n + 1))]


def brute_inversions(letters):
    return sum(1 for i in range(len(letters)) for j in range(i + 1, len(letters))
               if letters[i] > letters[j])


def test_rank_trivial_cases():
    assert rank(P("123")) == 0
    assert rank(P("321")) == 5
    assert unrank(0, 4) == P("1234")
    assert unrank(23, 4) == P("4321")


def test_rank_21354_matches_linear_scan():
    assert lex_list(5).index((2, 1, 3, 5, 4)) == 25
    assert rank(P("21354")) == 25
    assert unrank(25, 5) == P("21354")


def test_unrank_7_is_eighth_of_s4():
    assert lex_list(4)[7] == (2, 1, 4, 3)
    assert unrank(7, 4) == P("2143")


def test_all_permutations_is_lexicographic():
    for n in range(1, 7):
        assert [p.letters for p in all_permutations(n)] == lex_list(n)


@pytest.mark.parametrize("n", range(1, 9))
def test_rank_roundtrip_exhaustive(n):
    import math
    for r in range(math.factorial(n)):
        assert rank(unrank(r, n)) == r


def test_unrank_errors():
    with pytest.raises(OutOfRangeError):
        unrank(24, 4)
    with pytest.raises(OutOfRangeError):
        unrank(-1, 4)
    with pytest.raises(CapError):
        unrank(0, 13)


def test_parity_examples():
    assert parity(P("1234")) is Parity.EVEN
    assert parity(P("2134")) is Parity.ODD
    assert brute_inversions((2, 1, 5, 3, 7, 4, 6, 8)) == 5
    assert parity(P("21537468")) is Parity.ODD


def test_inversions_examples():
    assert inversions(P("1234")) == 0
    assert inversions(P("4321")) == 6
    # letters of a pseudo-permutation with p removed need not be 1..n
    assert inversions((1, 6, 2, 8)) == 1


def test_parity_is_inversions_mod_2_on_s6():
    for p in all_permutations(6):
        assert parity(p) == inversions(p) % 2 == brute_inversions(p.letters) % 2


def test_longest_monotone_examples():
    assert longest_monotone(P("12345")) == (5, 1)
    subs = [s for r in range(1, 6) for s in itertools.combinations((2, 1, 3, 5, 4), r)]
    lis = max(len(s) for s in subs if list(s) == sorted(s))
    lds = max(len(s) for s in subs if list(s) == sorted(s, reverse=True))
    assert (lis, lds) == (3, 2)
    assert longest_monotone(P("21354")) == (3, 2)


def test_every_perm_of_length_5_has_monotone_3():
    assert all(max(longest_monotone(p)) >= 3 for p in all_permutations(5))


def test_pattern_of():
    assert pattern_of((2, 5, 4)) == P("132")
    assert pattern_of((1, 2, 3)) == P("123")
    assert pattern_of((9, 1, 7, 3)) == P("4132")
    with pytest.raises(InvalidWordError):
        pattern_of((1, 2, 2))


@pytest.mark.parametrize("text", ["1224", "0123", "1235", "", "1,2,,3", "13,1,2"])
def test_invalid_words_rejected(text):
    with pytest.raises(InvalidWordError):
        P(text)


def test_cap():
    with pytest.raises(CapError):
        Permutation(tuple(range(1, 14)))


def test_comma_form_and_formatting():
    p = P("10,1,2,3,4,5,6,7,8,9")
    assert p.n == 10 and p[0] == 10
    assert str(p) == "10,1,2,3,4,5,6,7,8,9"
    assert str(P("21354")) == "21354"
    assert P("2,1,3") == P("213")


def test_identity():
    assert identity(4) == P("1234")


perms = st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


@given(perms)
def test_pattern_of_is_idempotent(letters):
    p = Permutation(tuple(letters))
    assert pattern_of(p.letters) == p


@given(perms)
def test_parity_matches_brute_inversions(letters):
    assert parity(Permutation(tuple(letters))) == brute_inversions(letters) % 2


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, __import__("math").factorial(n) - 1))))
def test_unrank_rank_roundtrip_up_to_12(arg):
    n, r = arg
    assert rank(unrank(r, n)) == r
