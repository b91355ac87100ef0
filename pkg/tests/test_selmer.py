import pytest

from frobtwist import formal, selmer, tate
from frobtwist.errors import GuardViolation
from frobtwist.places import Place
from frobtwist.poly import make_field
from frobtwist.ratfunc import Rat
from frobtwist.weierstrass import WeierstrassModel


def test_discrepancy_isotrivial_trivial():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(1,), (), (), (), (1,)])
    lhs, rhs, ok = selmer.discrepancy_check(m)
    assert (lhs, rhs, ok) == (0, 0, True)


def test_discrepancy_guard_violation():
    F5 = make_field(5, 1)
    m = WeierstrassModel.from_polys(F5, [(), (), (), (), (0, 1)])
    with pytest.raises(GuardViolation):
        selmer.discrepancy_check(m)


def test_discrepancy_and_twist_on_sample(surveys_all):
    for (key, name), (m, sv) in list(surveys_all.items())[:6]:
        lhs, rhs, ok = selmer.discrepancy_check(m, sv)
        assert ok and lhs == rhs
        res = selmer.twist_check(m, sv)
        assert res["pass"]


def test_classify_eth_p2(surveys_all):
    # for p = 2: eth0 = eth, and eth' collects even-component non-split places
    found_prime = False
    for (key, name), (m, sv) in surveys_all.items():
        if m.K.p != 2:
            continue
        cls = selmer.classify_eth(m, sv)
        assert set(cls.eth0) == set(cls.eth)
        assert set(cls.eth_prime) | set(cls.eth) == set(cls.S_b)
        for v in cls.eth_prime:
            d = sv.local[v]
            assert d.kind == "mult-nonsplit" and d.component_order_even
            found_prime = True
        assert cls.eth1 == ()
    assert found_prime  # the corpus includes an eth'-occupied curve


def test_classify_eth_p3(surveys_all):
    for (key, name), (m, sv) in surveys_all.items():
        if m.K.p != 3:
            continue
        cls = selmer.classify_eth(m, sv)
        assert cls.eth_prime == ()  # eth' is empty away from p = 2
        for v, kind, _, inside in cls.basis:
            assert inside == (kind == "mult-split")


def test_eth0_oracle_agreement_p3(corpus33):
    """Criterion gate: the local eth0 rule and the a_v = 1 (mod p) rule both
    agree with the explicit 3-division-polynomial oracle."""
    curves_checked = 0
    for name, m in corpus33.curves[:4]:
        sv = tate.survey(m)
        torsion = selmer.etale_torsion_field(m)
        # multiplicative places: split <=> kernel field trivial locally
        for v in sv.eth:
            d = sv.local[v]
            oracle = selmer.kernel_field_locally_trivial(torsion, v)
            assert oracle == (d.kind == "mult-split"), (name, v.render())
        # good ordinary places of small degree: a_v = 1 (mod 3) <=> trivial
        for deg in (1, 2):
            for v in tate._places_of_degree(m.K, deg):
                if v in sv.local and not sv.local[v].is_good:
                    continue
                data = tate.reduction_type(sv.finite_model, v)
                if not data.is_good or not data.ordinary:
                    continue
                oracle = selmer.kernel_field_locally_trivial(torsion, v)
                assert oracle == (data.a_trace % 3 == 1), (name, v.render())
        curves_checked += 1
    assert curves_checked >= 3


def test_global_square_and_pth_root_helpers():
    F3 = make_field(3, 1)
    t = Rat.t(F3)
    one = Rat.const(F3, 1)
    sq = (t + one) * (t + one) * Rat.const(F3, 1)
    assert selmer.is_global_square(sq)
    assert not selmer.is_global_square(t)
    assert not selmer.is_global_square(Rat.const(F3, 2) * sq)  # 2 non-square mod 3
    cubed = (t * t * t + one)  # = (t+1)^3 in char 3
    assert selmer.rational_pth_root(cubed) == t + one
    assert selmer.rational_pth_root(t + one) is None


def test_local_square():
    F3 = make_field(3, 1)
    t = Rat.t(F3)
    vt = Place.finite(F3, (0, 1))
    assert not selmer.is_local_square(t, vt)  # odd valuation
    assert selmer.is_local_square(t * t, vt)
    assert selmer.is_local_square(Rat.const(F3, 1) + t, vt)  # unit with square residue
    assert not selmer.is_local_square(Rat.const(F3, 2) + t, vt)  # residue 2 non-square
    vinf = Place.infinity(F3)
    assert not selmer.is_local_square(t, vinf)
    assert selmer.is_local_square((t + Rat.const(F3, 1)) / (t + Rat.const(F3, 2)), vinf)


def test_hbar_p2_cases(surveys_all):
    # degree-1 place in eth kills the constant quadratic extension
    for (key, name), (m, sv) in surveys_all.items():
        if m.K.p != 2:
            continue
        cls = selmer.classify_eth(m, sv)
        h = selmer.hbar(m, cls, sv)
        expect = 1 if all(v.degree % 2 == 0 for v in cls.eth) else 0
        assert h == expect


def test_hbar_isotrivial_is_one():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(1,), (), (), (), (1,)])
    sv = tate.survey(m)
    cls = selmer.classify_eth(m, sv)
    assert cls.eth == ()
    assert selmer.hbar(m, cls, sv) == 1


def test_hbar_override():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(1,), (), (), (), (1,)])
    cls = selmer.classify_eth(m)
    assert selmer.hbar(m, cls, override=7) == 7


def test_mu_shift_rule():
    assert selmer.mu_shift((3, 2, 1, 1)) == (2, 1)
    assert selmer.mu_shift(()) == ()
    assert selmer.mu_shift((1, 1, 1)) == ()
    assert selmer.mu_shift((4,)) == (3,)


def test_selmer_report_isotrivial():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(1,), (), (), (), (1,)])
    rep = selmer.selmer_report(m)
    assert rep.main_term == 0 and rep.isotrivial
    assert rep.sel_interval == (0, 0 + 2 * 1 + 1 + 0)
    assert rep.mu_rank_lower == 0 and rep.mu_rank_equality == 0


def test_selmer_report_main_terms(surveys_all):
    for (key, name), (m, sv) in surveys_all.items():
        K = m.K
        p = K.p
        rep = selmer.selmer_report(m, sv)
        assert rep.main_term == (p - 1) * sv.deg_disc // 12 * K.degree
        assert rep.main_term > 0 and not rep.isotrivial
        if rep.hbar is not None:
            lo, hi = rep.sel_interval
            assert lo == rep.main_term - rep.eth0_count
            assert hi == rep.main_term + 2 * rep.hbar + 1 + rep.eth0_count
            glo, ghi = rep.growth_interval
            assert glo == rep.main_term - 2 * rep.hbar - 3 * rep.eth0_count
            assert ghi == hi
        assert rep.mu_rank_lower == rep.main_term  # eth1 empty
        assert rep.mu_rank_equality == rep.main_term
        assert rep.constant_extension_assumed


def test_main_term_example_m_equals_4():
    # a p = 3, q = 3 curve with deg disc = 24: main term (p-1) 24/12 log_3 3 = 4
    F3 = make_field(3, 1)
    m = WeierstrassModel.from_polys(F3, [(), (0, 1, 0, 0, 1), (), (1,), ()])
    sv = tate.survey(m)
    assert sv.deg_disc == 24
    rep = selmer.selmer_report(m, sv)
    assert rep.main_term == 4


def test_twist_main_term_scaling(surveys_all):
    for (key, name), (m, sv) in list(surveys_all.items())[:5]:
        p = m.K.p
        rep = selmer.selmer_report(m, sv)
        rep_tw = selmer.selmer_report(m.frobenius_twist())
        assert rep_tw.main_term == p * rep.main_term
