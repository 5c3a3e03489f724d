import pytest

from ovmoments import genfun as G
from ovmoments import oracle as O
from ovmoments import series as S


def test_rank_tables_match_oracle():
    for kind, variant in (("rank", "dyson"), ("m2rank", "m2")):
        R = G.rank_gf(variant, 26)
        table = O.statistic_table(kind, 25)
        for n in range(26):
            assert R.coeff(n) == table.row(n), (kind, n)


def test_crank_tables_match_oracle():
    for kind, variant in (("crank1", "residual1"), ("crank2", "residual2")):
        C = G.crank_gf(variant, 26)
        table = O.statistic_table(kind, 25)
        for n in range(26):
            assert C.coeff(n) == table.row(n), (kind, n)


def test_z_degree_bound():
    for f in (G.rank_gf("dyson", 20), G.rank_gf("m2", 20), G.crank_gf("residual1", 20), G.crank_gf("residual2", 20)):
        for n in range(1, 20):
            lo, hi = f.z_span(n)
            assert -n <= lo and hi <= n


def test_specialisations_at_one():
    P = G.overpartition_gf(30)
    assert S.eval_z(G.rank_gf("dyson", 30), 1) == P
    assert S.eval_z(G.rank_gf("m2", 30), 1) == P
    assert S.eval_z(G.crank_gf("residual1", 30), 1) == P


def test_odd_z_derivatives_vanish():
    C = G.crank_gf("residual1", 25)
    d = C
    for j in range(1, 8):
        d = S.delta_z(d)
        if j % 2:
            assert S.eval_z(d, 1) == S.QSeries([], 25)


def test_second_crank_moments_at_4():
    assert S.eval_z(S.delta_z(S.delta_z(G.crank_gf("residual1", 5))), 1)[4] == 70
    assert S.eval_z(S.delta_z(S.delta_z(G.crank_gf("residual2", 5))), 1)[4] == 14


def test_alpha_from_rank_gf():
    assert S.eval_z(G.rank_gf("dyson", 5), -1)[1] == 2
    assert G.alpha_bar_series(26).coefficients() == [O.alpha_bar(n) for n in range(26)]


@pytest.mark.parametrize("kind", O.KINDS)
def test_moments_match_oracle(kind):
    for k in (0, 2, 4, 6, 8):
        m = G.moment_series(kind, k, 21).series
        assert m.coefficients() == [O.moment(kind, k, n) for n in range(21)], (kind, k)


def test_moment_series_refuses_odd_k():
    with pytest.raises(G.GenfunError):
        G.moment_series("crank1", 3, 10)


def test_jet_route_agrees_with_laurent_route():
    R = G.rank_gf("m2", 40)
    d = S.eval_z(S.delta_z(S.delta_z(S.delta_z(S.delta_z(R)))), 1)
    assert d == G.moment_series("m2rank", 4, 40).series


def test_named_moments():
    assert G.moment_series("rank", 2, 5).series[4] == 44
    assert G.moment_series("m2rank", 2, 5).series[4] == 8
    assert G.named_series("N2_2", 5)[4] == 8


def test_nov_ov():
    nov, ov = G.nov_ov_series(51)
    assert (nov[4], ov[4], nov[0], ov[0]) == (35, 21, 0, 0)
    M2 = G.moment_series("crank1", 2, 51).series
    assert all(2 * nov[n] == M2[n] for n in range(51))


def test_spt_routes():
    a = G.spt_series(200)
    b = G.spt_series_direct(200)
    assert a == b
    assert tuple(s[4] for s in a) == (20, 6, 26)
    assert tuple(s[0] for s in a) == (0, 0, 0)
    assert [a[2][n] for n in range(26)] == [O.spt_statistics(n)[2] for n in range(26)]


def test_combination_leading_coefficient():
    assert G.rank_combination_terms("dyson", 4)["N_4"][0] == 6
    assert G.rank_combination_terms("m2", 8)["N2_8"][0] == 42


@pytest.mark.parametrize("variant", G.RANK_VARIANTS)
def test_pde(variant):
    assert G.verify_pde(variant, 30).passed


def test_pde_negative_control():
    rep = G.verify_pde("dyson", 12, perturb=(7, 2))
    assert not rep.passed
    assert rep.first_failure().location == "q^7 z^2"


def test_two_variable_cap():
    with pytest.raises(G.GenfunError):
        G.rank_gf("dyson", G.MAX_TWO_VARIABLE_ORDER + 1)
