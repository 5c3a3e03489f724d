from fractions import Fraction

import pytest

from ovmoments import genfun as G
from ovmoments import published
from ovmoments import quasimod as Q
from ovmoments import series as S
from ovmoments.series import QSeries


@pytest.mark.parametrize("k,dim", list(Q.EXPECTED_DIMENSIONS.items())[:4])
def test_basis_dimensions(k, dim):
    basis = Q.build_basis(k)
    assert len(basis) == dim and basis.rank() == dim


def test_monomial_count_k2():
    assert len(Q.monomials(2)) == 6


def test_small_n_work_rejected():
    with pytest.raises(Q.QuasiModError):
        Q.build_basis(2, n_work=10)


def _over_P(f, order):
    return f * S.qs_invert(G.overpartition_gf(order))


def test_membership_examples():
    basis = Q.build_basis(1)
    P = G.overpartition_gf(basis.order)
    assert Q.membership(_over_P(S.delta_q(P), basis.order), basis).is_member
    assert Q.membership(_over_P(G.named_series("M_2", basis.order), basis.order), basis).is_member
    rep = Q.membership(QSeries.one(basis.order), basis, "one")
    assert not rep.is_member and rep.first_failure == 0


def test_non_member_reports_first_failure():
    basis = Q.build_basis(1)
    f = G.named_series("M_4", basis.order)
    rep = Q.membership(_over_P(f, basis.order), basis)
    assert rep.status == "not-member" and rep.first_failure is not None


def test_delta_q_raises_weight():
    b2 = Q.build_basis(2)
    b1 = Q.build_basis(1, n_work=b2.n_work)
    for e in b1.expansions:
        assert Q.membership(S.delta_q(e), b2).is_member


@pytest.mark.parametrize("key", list(published.RELATIONS))
def test_relations_match_published(key):
    variant, k = key
    target, rhs = published.RELATIONS[key]
    got = Q.solve_relation(variant, k).relation.solved_for(target)
    assert got == {name: tuple(Fraction(c) for c in poly) for name, poly in rhs.items()}


def test_relation_holds_to_100():
    rel = Q.solve_relation("m2", 3).relation
    assert rel.verify(100).passed


def test_k5_basis_too_small():
    with pytest.raises(Q.BasisTooSmall, match="smaller than the dimension"):
        Q.solve_relation("dyson", 5)


def test_dependent_collection_names_witness():
    with pytest.raises(Q.DependentCollection) as err:
        Q.solve_relation("dyson", 2, substitutions={"delta_q^1(M_2)": "M_4"})
    assert err.value.witness


def test_relation_report_json_roundtrip():
    rep = Q.solve_relation("dyson", 2)
    back = Q.RelationReport.from_json(rep.to_json())
    assert back.to_dict() == rep.to_dict()
    assert back.relation == rep.relation


def test_congruence_examples():
    crank_mod5 = Q.congruence_reduce(Q.solve_relation("dyson", 3), 5, multiplier=5)
    assert crank_mod5.equivalent(published.INTERMEDIATE["crank-mod5"]["statement"])
    assert crank_mod5.format() == "(2 + n + 2*n^2)*M_2 + (3 + 4*n + n^2)*M2_2 == 0 (mod 5)"
    above = Q.congruence_reduce(Q.solve_relation("dyson", 2), 7, multiplier=7)
    assert above.equivalent(published.INTERMEDIATE["crank-mod7"]["statement"])
    mod3 = Q.congruence_reduce(Q.solve_relation("m2", 2), 3)
    assert mod3.equivalent(published.INTERMEDIATE["m2rank-mod3"]["statement"])


def test_congruence_rejects_p_in_denominator():
    with pytest.raises(Q.CongruenceError):
        Q.congruence_reduce(Q.solve_relation("dyson", 3), 5)


def test_fermat_reduction():
    c = Q.Congruence(5, {"M_6": (0, 0, 0, 0, 0, 1)})
    assert c.terms == {"M_6": (0, 1)}
    rel = Q.LinearRelation({"M_6": (0, 0, 0, 0, 0, 1), "N_2": (1,)})
    assert Q.congruence_reduce(rel, 5).terms == {"M_2": (0, 1), "N_2": (1,)}


def test_pointwise_equivalence_allows_units():
    a = Q.Congruence(7, {"M_2": (1, 1)})
    assert a.equivalent(a.scaled(3))
    assert not a.equivalent(Q.Congruence(7, {"M_2": (1, 2)}))
