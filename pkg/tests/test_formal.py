import random

import pytest

from frobtwist import formal, poly, tate
from frobtwist.errors import (
    MissingVerschiebungData,
    NonOrdinaryCurve,
    NotMinimal,
    PrecisionBound,
)
from frobtwist.places import LocalRing, Place, valuation
from frobtwist.poly import make_field
from frobtwist.ratfunc import Rat
from frobtwist.series import SeriesRing
from frobtwist.weierstrass import WeierstrassModel


def _rand_model(K, rng, dn=1):
    from frobtwist.errors import Singular

    while True:
        cs = [
            poly.normalize([rng.randrange(K.q) for _ in range(rng.randrange(1, dn + 2))])
            for _ in range(5)
        ]
        try:
            return WeierstrassModel.from_polys(K, cs)
        except Singular:
            continue


def test_group_law_low_degree_shape():
    # F(X, Y) = X + Y - a1 X Y + O(deg 3) for any model
    rng = random.Random(4)
    for p, k in ((2, 1), (3, 1), (2, 2)):
        K = make_field(p, k)
        for _ in range(6):
            m = _rand_model(K, rng)
            fgl = formal.formal_group_law(m, None, p + 2)
            one = Rat.const(K, 1)
            assert fgl.coeff(1, 0) == one
            assert fgl.coeff(0, 1) == one
            assert fgl.coeff(0, 0).is_zero()
            assert fgl.coeff(1, 1) == -m.a1
            assert fgl.coeff(2, 0).is_zero() and fgl.coeff(0, 2).is_zero()


def test_group_law_axioms_random_models():
    rng = random.Random(6)
    for p, k, N, reps in ((2, 1, 10, 6), (2, 2, 10, 4), (3, 1, 12, 3)):
        K = make_field(p, k)
        for _ in range(reps):
            m = _rand_model(K, rng)
            fgl = formal.formal_group_law(m, None, N)
            assert formal.is_identity_law(fgl)
            assert formal.is_commutative(fgl)
            assert formal.is_associative(fgl)


def test_group_law_minimality_checks():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(1,), (), (), (), (0, 1)])
    v = Place.finite(F2, (0, 1))
    with pytest.raises(PrecisionBound):
        formal.formal_group_law(m, v, 1)
    # non-integral model at (t)
    bad = WeierstrassModel(
        F2,
        Rat(F2, (1,), (0, 1)),
        *(Rat.const(F2, c) for c in (0, 1, 0, 0)),
    )
    with pytest.raises(NotMinimal):
        formal.formal_group_law(bad, v, 6)
    # rescaled (non-minimal) integral model
    from frobtwist.weierstrass import Transformation

    pi = Rat.of_poly(F2, (0, 1))
    worse = m.transform(Transformation.scale(pi.inverse()))
    with pytest.raises(NotMinimal):
        formal.formal_group_law(worse, v, 6)


def test_mult_series_leading_terms():
    rng = random.Random(12)
    for p, k in ((2, 1), (3, 1)):
        K = make_field(p, k)
        m = _rand_model(K, rng)
        fgl = formal.formal_group_law(m, None, 8)
        S1 = SeriesRing(K, 1, 8)
        assert formal.mult_series(fgl, 0) == S1.zero()
        assert formal.mult_series(fgl, 1) == S1.var(0)
        two = formal.mult_series(fgl, 2)
        c1 = two.get((1,))
        if p == 2:
            assert c1 is None  # leading coefficient 2 = 0
        else:
            assert c1 == Rat.const(K, 2 % p)
        three = formal.mult_series(fgl, 3)
        c1 = three.get((1,))
        if p == 3:
            assert c1 is None
        else:
            assert c1 == Rat.const(K, 3 % p)


def test_p_series_support(surveys_all):
    for (key, name), (m, sv) in surveys_all.items():
        p = m.K.p
        pc = formal._pseries_for(sv.finite_model, formal.default_series_degree(p))
        for j, c in enumerate(pc):
            if j % p:
                assert c.is_zero(), (key, name, j)
        vf = formal.verschiebung_factor(list(pc), p)
        # z1 = V'(0) equals the t^p coefficient of [p]
        assert vf[1] == pc[p]


def test_ordinary_place_defect_zero():
    # explicit good ordinary place has n_v = 0 and P(t) = t
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(0, 1), (), (1,), (), ()])
    v = Place.finite(F2, (1, 0, 1, 1))  # a good place of degree 3
    data = tate.reduction_type(m, v)
    assert data.is_good
    if data.ordinary:
        vd = formal.verschiebung_data(m, v, reduction=data)
        assert vd.n_v == 0 and vd.kind == "ordinary"
        assert vd.distinguished == ((), (1,))


def test_nonordinary_constant_curve_raises():
    F3 = make_field(3, 1)
    m = WeierstrassModel.from_polys(F3, [(), (), (), (1,), ()])  # y^2 = x^3 + x
    v = Place.finite(F3, (0, 1))
    data = tate.reduction_type(m, v)
    with pytest.raises(NonOrdinaryCurve):
        formal.verschiebung_data(m, v, reduction=data)


def test_supersingular_data_p2():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(0, 1), (), (1,), (), ()])
    v = Place.finite(F2, (0, 1))
    data = tate.reduction_type(m, v)
    vd = formal.verschiebung_data(m, v, reduction=data)
    assert vd.kind == "supersingular"
    assert vd.n_v == 1
    assert vd.epsilon == 1  # always for p = 2
    assert vd.certified
    # distinguished polynomial is monic of degree p with z1 at valuation n_v
    A = LocalRing(F2, (0, 1), vd.precision)
    assert len(vd.distinguished) == 3
    assert A.val(list(vd.distinguished)[1]) == vd.n_v


def test_multiplicative_short_circuit():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(1,), (), (), (), (0, 1)])
    v = Place.finite(F2, (0, 1))
    data = tate.reduction_type(m, v)
    vd = formal.verschiebung_data(m, v, reduction=data)
    assert vd.kind == "multiplicative" and vd.n_v == 0


def test_newton_polygon_single_slope(surveys_all):
    for (key, name), (m, sv) in surveys_all.items():
        p = m.K.p
        for v, data in sv.ss_places:
            vd = formal.verschiebung_data(data.minimal_model, v, reduction=data)
            n = vd.n_v
            if v.is_infinity:
                A = LocalRing(m.K, (0, 1), vd.precision)
            else:
                A = LocalRing(m.K, v.pi, vd.precision)
            for i in range(1, p):
                lower = (n * (p - i) + (p - 2)) // (p - 1)  # ceil(n (p-i)/(p-1))
                assert A.val(list(vd.distinguished)[i]) >= min(lower, A.M)
            assert vd.epsilon is None or vd.epsilon in (0, 1)
            if vd.epsilon == 1:
                assert n % (p - 1) == 0


def test_derivative_cross_check(surveys_all):
    # n_v from the t^p coefficient equals ord_v of dV/dt at 0 computed from
    # the factor series by formal differentiation
    for (key, name), (m, sv) in surveys_all.items():
        p = m.K.p
        for v, data in sv.ss_places:
            vd = formal.verschiebung_data(data.minimal_model, v, reduction=data)
            # differentiate sum c_i tau^i and evaluate at 0: coefficient c_1
            deriv_at_zero = vd.factor_series[1]
            vc = Place.finite(m.K, (0, 1)) if v.is_infinity else v
            mc = data.minimal_model.infinity_chart() if v.is_infinity else data.minimal_model
            assert valuation(deriv_at_zero, vc) == vd.n_v


def test_valuation_transport(surveys_all):
    # ord(V(a)) = ord(a) + n_v for ord(a) > n_v/(p-1), sampled in the
    # truncated local ring
    rng = random.Random(77)
    for (key, name), (m, sv) in surveys_all.items():
        K = m.K
        p = K.p
        for v, data in sv.ss_places:
            vd = formal.verschiebung_data(data.minimal_model, v, reduction=data)
            n = vd.n_v
            pi = (0, 1) if v.is_infinity else v.pi
            e_min = n // (p - 1) + 1
            for _ in range(30):
                e = rng.randrange(e_min, e_min + 3)
                M = e * 2 + n + 2
                A = LocalRing(K, pi, M)
                unit = poly.normalize(
                    [rng.randrange(1, K.q)] + [rng.randrange(K.q) for _ in range(2)]
                )
                a = A.shift(A.reduce(unit), e)
                # V(a) = sum c_i a^i, truncation tail has valuation >= M
                tcap = len(vd.factor_series) - 1
                assert (tcap + 1) * e >= M
                acc = ()
                power = (1,)
                for i in range(1, tcap + 1):
                    power = A.mul(power, a)
                    ci = vd.factor_series[i]
                    if not ci.is_zero():
                        acc = A.add(acc, A.mul(A.from_rat(ci), power))
                assert A.val(acc) == e + n, (key, name, v.render(), e)


def test_kernel_assembly_matches_formula(surveys_all):
    # log_p |coker V| = eps + n deg(v) log_p q at supersingular places
    for (key, name), (m, sv) in surveys_all.items():
        K = m.K
        for v, data in sv.ss_places:
            vd = formal.verschiebung_data(data.minimal_model, v, reduction=data)
            got = formal.ker_jv_log(m, data, vd)
            if vd.epsilon is None:
                assert got is None
            else:
                assert got == vd.epsilon + vd.n_v * v.degree * K.degree


def test_ker_jv_cases(surveys_all):
    for (key, name), (m, sv) in surveys_all.items():
        p = m.K.p
        for v in sv.S_b:
            d = sv.local[v]
            val = formal.ker_jv_log(m, d)
            if d.kind == "mult-split":
                assert val == 0
            elif d.kind == "mult-nonsplit":
                expect = 1 if (p == 2 and d.component_order_even) else 0
                assert val == expect


def test_ker_jv_good_ordinary_cases():
    F3 = make_field(3, 1)
    m = WeierstrassModel.from_polys(F3, [(0, 1), (), (), (1,), (1,)])
    sv = tate.survey(m)
    seen = set()
    for d in range(1, 3):
        for v in tate._places_of_degree(F3, d):
            if v in sv.local and not sv.local[v].is_good:
                continue
            data = tate.reduction_type(sv.finite_model if not v.is_infinity else m, v)
            if not data.is_good or not data.ordinary:
                continue
            val = formal.ker_jv_log(m, data)
            assert val == (1 if data.a_trace % 3 == 1 else 0)
            seen.add(val)
    assert seen  # at least one good ordinary place tested


def test_missing_verschiebung_data():
    F2 = make_field(2, 1)
    m = WeierstrassModel.from_polys(F2, [(0, 1), (), (1,), (), ()])
    v = Place.finite(F2, (0, 1))
    data = tate.reduction_type(m, v)
    assert not data.ordinary
    with pytest.raises(MissingVerschiebungData):
        formal.ker_jv_log(m, data, None)


# -- root spacing in explicit extensions ----------------------------------------


class _Ram2:
    """Tame ramified quadratic extension of a truncated local ring:
    elements a + b*w with w^2 = pi (odd residue characteristic)."""

    def __init__(self, A):
        self.A = A

    def mul(self, x, y):
        A = self.A
        a1, b1 = x
        a2, b2 = y
        cross = A.mul(b1, b2)
        return (
            A.add(A.mul(a1, a2), A.mul(cross, A.reduce(A.pi))),
            A.add(A.mul(a1, b2), A.mul(b1, a2)),
        )

    def add(self, x, y):
        return (self.A.add(x[0], y[0]), self.A.add(x[1], y[1]))

    def sub(self, x, y):
        return (self.A.sub(x[0], y[0]), self.A.sub(x[1], y[1]))

    def inv(self, x):
        # Newton iteration from the residue inverse of the unit part
        A = self.A
        assert A.val(x[0]) == 0
        cur = (A.inv(x[0]), ())
        for _ in range(A.M.bit_length() + 2):
            # cur <- cur * (2 - x*cur)
            prod = self.mul(x, cur)
            two_minus = (A.sub(A.reduce((2 % A.K.p,)), prod[0]), A.neg(prod[1]))
            cur = self.mul(cur, two_minus)
        assert self.mul(x, cur)[0] == (1,) and not self.mul(x, cur)[1]
        return cur

    def ord_w(self, x):
        return min(2 * self.A.val(x[0]), 2 * self.A.val(x[1]) + 1)


def test_root_spacing_rational_p3(corpus33):
    """Eq-style root spacing with rational roots: at an eps = 1 place of a
    p = 3 curve, P(t)/t has two roots in the completion with pairwise
    difference of valuation n_v/(p-1)."""
    name, m = corpus33.curves[0]
    sv = tate.survey(m)
    checked = 0
    for v, data in sv.ss_places:
        vd = formal.verschiebung_data(data.minimal_model, v, reduction=data)
        if vd.epsilon != 1:
            continue
        p = 3
        n = vd.n_v
        e = n // (p - 1)
        A = LocalRing(m.K, (0, 1) if v.is_infinity else v.pi, vd.precision)
        Fv = (Place.finite(m.K, (0, 1)) if v.is_infinity else v).residue_field()
        z2, z1 = list(vd.distinguished)[2], list(vd.distinguished)[1]
        # rescaled residual R(s) = s^2 + (z2/pi^e) s + z1/pi^(2e)
        b1 = A.shift(z2, -e)
        b0 = A.shift(z1, -2 * e)
        roots = []
        for x in Fv.elements():
            acc = Fv.add(Fv.mul(Fv.add(x, A.residue(b1)), x), A.residue(b0))
            if acc == 0:
                roots.append(x)
        assert len(roots) == 2
        lifted = []
        for r0 in roots:
            x = A.reduce((r0,)) if v.degree == 1 or v.is_infinity else None
            if x is None:
                digs = Fv.digits(r0)
                x = A.reduce(poly.normalize(digs))
            for _ in range(A.M + 2):
                fx = A.add(A.add(A.mul(x, x), A.mul(b1, x)), b0)
                dfx = A.add(A.add(x, x), b1)
                x = A.sub(x, A.mul(fx, A.inv(dfx)))
            lifted.append(A.shift(x, e))
        diff = A.sub(lifted[0], lifted[1])
        assert A.val(diff) == n // (p - 1)
        checked += 1
    assert checked >= 1


def test_root_spacing_ramified_p3():
    """Odd defect at a degree-2 place: the kernel roots live in the tame
    ramified quadratic extension, pairwise difference of w-valuation
    2 n_v/(p-1) (i.e. n_v/(p-1) = 1/2 in v-normalization)."""
    K = make_field(3, 1)
    m = WeierstrassModel.from_polys(K, [(), (1, 0, 1), (), (1,), ()])
    sv = tate.survey(m)
    (v, data), = sv.ss_places
    assert v.degree == 2
    vd = formal.verschiebung_data(data.minimal_model, v, reduction=data)
    assert vd.n_v == 1 and vd.epsilon == 0  # 2 does not divide 1
    A = LocalRing(K, v.pi, vd.precision + 3)
    R = _Ram2(A)
    Fv = v.residue_field()
    # A-coefficients of P/t at the needed precision
    vf = vd.factor_series
    h = [A.from_rat(c) for c in vf]
    from frobtwist import hensel

    P, _ = hensel.distinguish(A, h, 3, len(h) - 1)
    z1, z2 = P[1], P[2]
    # rescale t = w s: R(s) = s^2 + (z2/w) s + z1/pi with z2/w = w*(z2/pi)
    b1 = ((), A.shift(z2, -1))  # z2/w in the extension
    b0 = (A.shift(z1, -1), ())
    # residual polynomial: s^2 + res(z1/pi); roots +-c in F_9
    c0 = A.residue(b0[0])
    roots = [x for x in Fv.elements() if Fv.add(Fv.mul(x, x), c0) == 0]
    assert len(roots) == 2  # theory: the residues are +-c, rational
    lifted = []
    for r0 in roots:
        digs = poly.normalize(Fv.digits(r0))
        x = (A.reduce(digs), ())
        for _ in range(2 * A.M + 2):
            fx = R.add(R.add(R.mul(x, x), R.mul(b1, x)), b0)
            dfx = R.add(R.add(x, x), b1)
            x = R.sub(x, R.mul(fx, R.inv(dfx)))
        fx = R.add(R.add(R.mul(x, x), R.mul(b1, x)), b0)
        assert R.ord_w(fx) >= 2 * A.M - 4
        lifted.append(x)
    # roots of P/t are w * s_i; difference w*(s0 - s1) with s0 - s1 a unit
    d = R.sub(lifted[0], lifted[1])
    assert R.ord_w(d) == 0
    # so ord_w(root difference) = 1 = 2 * n_v/(p-1): valuation n_v/(p-1) = 1/2
