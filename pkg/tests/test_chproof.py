import itertools

import pytest
from hypothesis import given, strategies as st

from fernjac.chproof import (
    FirstRep, MalformedIndexError, Permutation, TermIndex, enumerate_terms, first_rep,
    involution, verify_case, verify_ch,
)


def test_first_rep_examples():
    assert first_rep((1, 2, 3, 2, 4)) == FirstRep(1, 3, (3, 2))
    assert first_rep((1, 2, 3)) is None
    assert first_rep((1, 1)) == FirstRep(0, 1, (1,))


def test_first_rep_takes_last_recurring_position():
    # 1 recurs first, but the suffix after l1 must be repeat-free: l1 sits on the 2
    assert first_rep((1, 2, 1, 2)) == FirstRep(1, 3, (1, 2))


@given(st.lists(st.integers(1, 4), max_size=8))
def test_first_rep_invariant(lam):
    lam = tuple(lam)
    fr = first_rep(lam)
    if fr is None:
        assert len(set(lam)) == len(lam)
        return
    assert lam[fr.l1] == lam[fr.l2] and fr.l1 < fr.l2
    tail = lam[fr.l1 + 1:]
    assert len(set(tail)) == len(tail)
    assert fr.C == lam[fr.l1 + 1:fr.l2 + 1]


def test_permutation_basics():
    s = Permutation.from_cycles([(3, 1), (2,)])
    assert s.support == (1, 2, 3)
    assert s.cycles() == [(1, 3), (2,)]
    assert s.cycle_of(3) == (3, 1)
    assert s.signature() == -1
    assert s.without((1, 3)) == Permutation.from_cycles([(2,)])
    with pytest.raises(MalformedIndexError):
        s.with_cycle((2, 4))
    with pytest.raises(ValueError):
        Permutation.from_cycles([(1, 2), (2, 3)])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sign_convention(n):
    # (-1)^{#cycles} = (-1)^i sgn(sigma)
    for i in range(n + 1):
        for S in itertools.combinations(range(1, n + 1), i):
            for img in itertools.permutations(S):
                sigma = Permutation(tuple(zip(S, img)))
                assert TermIndex((), sigma).sign == (-1) ** i * sigma.signature()


def test_enumeration_counts():
    terms = enumerate_terms(2, 1, 1)
    assert len(terms) == 6
    assert sorted(t.i for t in terms) == [0, 0, 1, 1, 2, 2]
    one = enumerate_terms(1, 1, 1)
    assert set(one) == {TermIndex((1, 1)), TermIndex((), Permutation.from_cycles([(1,)]))}
    assert {t.sign for t in one} == {1, -1}
    assert {t.i for t in enumerate_terms(2, 1, 2)} == {0, 1}
    with pytest.raises(ValueError):
        enumerate_terms(2, 1, 2, diag=True)


def test_involution_examples():
    x = TermIndex((), Permutation.from_cycles([(1,), (2,)]))
    assert involution(x, 1, 1) == TermIndex((1, 1), Permutation.from_cycles([(2,)]))
    y = TermIndex((1, 1))
    assert involution(y, 1, 1) == TermIndex((), Permutation.from_cycles([(1,)]))


def test_involution_malformed():
    with pytest.raises(MalformedIndexError):
        involution(TermIndex((2, 1)), 1, 1)
    with pytest.raises(MalformedIndexError):
        involution(TermIndex((1, 2)), 1, 2)  # no repeat and nothing in S
    with pytest.raises(MalformedIndexError):
        involution(TermIndex((), Permutation.from_cycles([(2,)])), 1, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_verify_ch(n):
    reports = verify_ch(n)
    assert len(reports) == n * n
    for r in reports:
        assert r.ok, r.failures
        assert set(r.to_json()) == {"n", "r", "l", "index_count", "involution_ok", "fixed_point_free",
                                    "sign_reversing", "monomial_preserving", "sum_zero"}


def test_cayley_hamilton_2x2_cases():
    diag, off = verify_case(2, 1, 1), verify_case(2, 1, 2)
    assert diag.ok and diag.index_count == 6
    assert off.ok and off.index_count == 4


def _earliest_revisit(lam):
    seen = {}
    for k, v in enumerate(lam):
        if v in seen:
            return FirstRep(seen[v], k, tuple(lam[seen[v] + 1:k + 1]))
        seen[v] = k
    return None


def test_earliest_revisit_reading_breaks_the_involution(monkeypatch):
    # reading C(lam) as the segment closed by the first revisit is not enough from n = 3 on
    import fernjac.chproof as chproof
    monkeypatch.setattr(chproof, "first_rep", _earliest_revisit)
    assert all(r.ok for r in chproof.verify_ch(2))
    assert not all(r.ok for r in chproof.verify_ch(3))


def test_broken_involution_is_reported():
    def identity(x, r, l, diag):
        return x

    r = verify_case(2, 1, 1, identity)
    assert not r.ok and not r.fixed_point_free and not r.sign_reversing
    assert r.sum_zero and r.matrix_sum_zero and r.expansion_matches
    assert r.failures
