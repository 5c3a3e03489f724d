import pytest

from ovmoments import oracle as O
from ovmoments.genfun import overpartition_gf
from ovmoments.oracle import Overpartition


def test_counts():
    assert len(O.enumerate_overpartitions(0)) == 1
    assert len(O.enumerate_overpartitions(4)) == 14
    assert len(O.enumerate_overpartitions(5)) == 24


def test_counts_match_generating_function():
    P = overpartition_gf(21)
    assert [len(O.enumerate_overpartitions(n)) for n in range(21)] == P.coefficients()


def test_cap():
    with pytest.raises(O.EnumerationCapError):
        O.enumerate_overpartitions(41)


def test_overline_must_occur():
    with pytest.raises(ValueError):
        Overpartition((3, 1), frozenset({2}))


def test_dyson_rank():
    assert O.dyson_rank(Overpartition((3, 1))) == 1
    assert O.dyson_rank(Overpartition((1, 1, 1, 1), frozenset({1}))) == -3


def test_m2_rank():
    assert O.m2_rank(Overpartition((3,))) == 1
    assert O.m2_rank(Overpartition((3,), frozenset({3}))) == 1


def test_residual_cranks():
    lam = Overpartition((7, 5, 2, 1), frozenset({7, 5, 2}))
    assert sorted(O.residual_crank1_contributions(lam)) == [(-1, 1), (0, -1), (1, 1)]
    assert O.residual_crank1_contributions(Overpartition((4,))) == [(4, 1)]
    assert sorted(O.residual_crank2_contributions(Overpartition((2,)))) == [(-1, 1), (0, -1), (1, 1)]
    assert O.residual_crank2_contributions(Overpartition((3, 1), frozenset({3}))) == [(0, 1)]


@pytest.mark.parametrize("kind,value", [("rank", 44), ("m2rank", 8), ("crank1", 70), ("crank2", 14)])
def test_second_moments_at_4(kind, value):
    assert O.moment(kind, 2, 4) == value


@pytest.mark.parametrize("kind", O.KINDS)
def test_odd_moments_vanish(kind):
    assert all(O.moment(kind, k, n) == 0 for n in range(16) for k in (1, 3, 5))


@pytest.mark.parametrize("kind", O.KINDS)
def test_signed_totals(kind):
    P = overpartition_gf(16)
    table = O.statistic_table(kind, 15)
    assert all(table.total(n) == P[n] for n in range(16))


@pytest.mark.parametrize("kind", ["rank", "m2rank"])
def test_symmetry(kind):
    table = O.statistic_table(kind, 15)
    for n in range(16):
        row = table.row(n)
        assert all(row.get(-m, 0) == c for m, c in row.items())


def test_spt_and_nov_ov():
    assert O.spt_statistics(4) == (20, 6, 26)
    assert O.spt_statistics(0) == (0, 0, 0)
    a, b, c = O.spt_statistics(3)
    assert a + b == c
    assert O.nov_ov(4) == (35, 21)
    assert O.nov_ov(0) == (0, 0)
    assert all(sum(O.nov_ov(n)) == n * len(O.enumerate_overpartitions(n)) for n in range(21))


def test_spt_without_overlines_is_andrews_spt():
    for n in range(1, 21):
        plain = [lam for lam in O.enumerate_overpartitions(n) if not lam.overlined]
        assert sum(lam.parts.count(lam.parts[-1]) for lam in plain) == O.andrews_spt(n)


def test_alpha_bar():
    assert [O.alpha_bar(n) for n in range(6)] == [1, 2, -4, 8, -10, 8]
