from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ovmoments import series as S
from ovmoments.genfun import cusp_form_F, overpartition_gf
from ovmoments.series import QSeries, SeriesError, TruncationError, ZQSeries


def E2(order):
    return QSeries([1] + [-24 * sum(d for d in range(1, n + 1) if n % d == 0) for n in range(1, order)], order)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
series_st = st.lists(rationals, min_size=1, max_size=12).map(lambda c: QSeries(c, 12))


def test_difference_of_squares():
    assert (QSeries([1, 1], 5) * QSeries([1, -1], 5)).coefficients() == [1, 0, -1, 0, 0]


def test_mixed_orders_take_minimum():
    a, b = QSeries([1, 2, 3], 6), QSeries([1], 4)
    assert (a + b).order == 4
    assert (a * b).order == 4


def test_coefficient_beyond_order_is_an_error():
    with pytest.raises(TruncationError):
        QSeries([1, 2], 3)[3]


def test_coefficients_are_exact_and_reduced():
    a = QSeries([Fraction(2, 4), Fraction(6, 3)], 2)
    assert a[0] == Fraction(1, 2) and a[1] == 2 and isinstance(a[1], int)


def test_overpartition_gf():
    assert overpartition_gf(6).coefficients() == [1, 2, 4, 8, 14, 24]


def test_E2_squared():
    assert (E2(5) * E2(5))[1] == -48


def test_invert_geometric():
    assert S.qs_invert(QSeries([1, -1], 6)).coefficients() == [1] * 6


def test_invert_euler_product_gives_partitions():
    assert S.qs_invert(S.euler_product(1, 8)).coefficients()[:6] == [1, 1, 2, 3, 5, 7]


def test_invert_Pbar():
    P = overpartition_gf(30)
    assert P * S.qs_invert(P) == QSeries.one(30)


def test_invert_needs_unit_constant():
    with pytest.raises(SeriesError):
        S.qs_invert(QSeries([0, 1], 4))


def test_pentagonal():
    assert S.euler_product(1, 6).coefficients() == [1, -1, -1, 0, 0, 1]


def test_eta_product_negative_exponent():
    assert S.eta_product([(2, 1), (1, -2)], 0, 20) == overpartition_gf(20)


def test_F_leading_coefficient():
    F = cusp_form_F(5)
    assert F[0] == 0 and F[1] == 1


def test_substitute_q_power():
    assert S.substitute_q_power(E2(5), 2)[2] == -24
    assert S.substitute_q_power(E2(5), 1) == E2(5)
    assert S.substitute_q_power(QSeries([1, 1], 6), 3).coefficients() == [1, 0, 0, 1, 0, 0]


def test_delta_q():
    assert S.delta_q(QSeries([7], 4)).coefficients() == [0, 0, 0, 0]
    assert S.delta_q(overpartition_gf(6))[4] == 56
    assert S.delta_q(E2(3))[1] == -24


def test_delta_z_and_eval():
    z_free = ZQSeries.from_qseries(overpartition_gf(5))
    assert all(not S.delta_z(z_free).coeff(n) for n in range(5))
    a = ZQSeries([{0: 1}, {-1: 1, 1: 2}, {2: 3}], 3)
    assert S.eval_z(a, 1).coefficients() == [1, 3, 3]
    assert S.eval_z(a, -1).coefficients() == [1, -3, 3]
    assert S.delta_z(a).coeff(1) == {-1: -1, 1: 2}


def test_zq_factor_division_roundtrip():
    a = ZQSeries([{0: 1}, {1: 2}, {-1: 1}, {0: 5}], 4)
    assert a.mul_factor(3, 1, 1).div_factor(-3, 1, 1) == a


def test_rational_strings():
    for x in (Fraction(-40, 11), 0, 5, Fraction(2715648, 2125853)):
        assert S.rational_from_str(S.rational_to_str(x)) == x
    assert S.rational_to_str(Fraction(192, 77)) == "192/77"


@settings(max_examples=40, deadline=None)
@given(series_st, series_st, series_st)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(series_st, series_st)
def test_leibniz(a, b):
    assert S.delta_q(a * b) == S.delta_q(a) * b + a * S.delta_q(b)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=12))
def test_double_inverse(coeffs):
    a = QSeries([1] + coeffs[1:], 12)
    assert S.qs_invert(S.qs_invert(a)) == a


@settings(max_examples=30, deadline=None)
@given(st.lists(st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=4), min_size=8, max_size=8),
       st.integers(1, 3), st.sampled_from([1, -1]))
def test_eval_commutes_with_q_power(coeffs, m, z0):
    a = ZQSeries(coeffs, 8)
    assert S.eval_z(S.substitute_q_power(a, m), z0) == S.substitute_q_power(S.eval_z(a, z0), m)
