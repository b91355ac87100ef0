"""Global identities and main-term calculators: the supersingular discrepancy
identity, twist scaling of minimal discriminants, bad-place classification,
the unramified-extension rank, and Selmer/mu main terms with proved-interval
error bounds.

Error terms are reported as intervals, never point values: the underlying
results prove bounds only.
"""

from dataclasses import dataclass

from . import poly, tate
from .errors import FrobtwistError, GuardViolation
from .places import Place, valuation
from .ratfunc import Rat

ETH0_CRITERION_NOTE = (
    "derived criterion: split multiplicative places lie in eth0, non-split ones "
    "do not (p odd); validated against p-division-polynomial oracles at p = 3"
)


def _ensure_survey(m, sv, scan_bound):
    if sv is None:
        sv = tate.survey(m, scan_bound=scan_bound)
    guard = tate.semistable_ordinary_guard(sv)
    if not guard:
        raise GuardViolation(f"standing hypothesis fails: {guard.violations}")
    return sv


def discrepancy_check(m, sv=None, scan_bound=tate.DEFAULT_SCAN_BOUND):
    """(lhs, rhs, equal): sum of n_v deg v over supersingular places vs
    (p-1) deg(min disc)/12, the two sides from independent code paths."""
    sv = _ensure_survey(m, sv, scan_bound)
    p = m.K.p
    lhs = sum(n * v.degree for v, n in sv.ss_defects.items())
    rhs = (p - 1) * sv.deg_disc // 12
    return lhs, rhs, lhs == rhs


def twist_check(m, sv=None, scan_bound=tate.DEFAULT_SCAN_BOUND):
    """Per-place comparison ord_v(min disc of twist) = p * ord_v(min disc)."""
    sv = _ensure_survey(m, sv, scan_bound)
    p = m.K.p
    tw = m.frobenius_twist()
    sv_tw = tate.survey(tw, scan_bound=scan_bound)
    places = sorted(set(sv.local) | set(sv_tw.local), key=Place.sort_key)
    rows = []
    ok = True
    for v in places:
        o = sv.ord_disc(v)
        ot = sv_tw.ord_disc(v)
        good = ot == p * o
        ok = ok and good
        rows.append((v, o, ot, good))
    total_ok = sv_tw.deg_disc == p * sv.deg_disc
    return {
        "per_place": rows,
        "total": (sv.deg_disc, sv_tw.deg_disc),
        "pass": ok and total_ok,
        "twist_survey": sv_tw,
    }


@dataclass(frozen=True)
class EthClassification:
    S_b: tuple
    eth_prime: tuple  # p = 2 non-split multiplicative with even component order
    eth: tuple
    eth0: tuple  # members of eth splitting completely in k
    eth1: tuple  # always empty for the constant Z_p-extension
    basis: tuple  # (place, kind, component_even, in_eth0) rows
    criterion_note: str


def classify_eth(m, sv=None, scan_bound=tate.DEFAULT_SCAN_BOUND):
    sv = _ensure_survey(m, sv, scan_bound)
    p = m.K.p
    eth0 = []
    basis = []
    for v in sv.eth:
        d = sv.local[v]
        if p == 2:
            inside = True  # k = K: every place splits completely
        else:
            inside = d.kind == "mult-split"
        if inside:
            eth0.append(v)
        basis.append((v, d.kind, d.component_order_even, inside))
    return EthClassification(
        S_b=tuple(sv.S_b),
        eth_prime=tuple(sv.eth_prime),
        eth=tuple(sv.eth),
        eth0=tuple(eth0),
        eth1=(),
        basis=tuple(basis),
        criterion_note=ETH0_CRITERION_NOTE,
    )


# -- the p = 3 division-polynomial oracle --------------------------------------


def rational_pth_root(x):
    """g with g^p = x in F_q(t), or None if x is not a p-th power."""
    K = x.K
    if x.is_zero():
        return x
    try:
        rn = poly.pth_root(K, x.num)
        rd = poly.pth_root(K, x.den)
    except FrobtwistError:
        return None
    return Rat(K, rn, rd)


def is_global_square(x):
    """Square test in F_q(t) for odd q: even multiplicities, square lead."""
    K = x.K
    if K.p == 2:
        raise FrobtwistError("global square test is for odd characteristic")
    if x.is_zero():
        return True
    for f in (x.num, x.den):
        if poly.deg(f) >= 1:
            for _, mult in poly.factor(K, f):
                if mult % 2:
                    return False
    return K.is_square(x.num[-1])


def is_local_square(x, v):
    """Square test in the completion K_v, odd characteristic."""
    K = x.K
    if K.p == 2:
        raise FrobtwistError("local square test is for odd characteristic")
    if x.is_zero():
        return True
    o = valuation(x, v)
    if o % 2:
        return False
    if v.is_infinity:
        xs = x.infinity_chart()
        vv = Place.finite(K, (0, 1))
        pi = Rat.of_poly(K, (0, 1))
        unit = xs / pi**o
        return v.residue_field().is_square(vv.residue(unit))
    pi = Rat.of_poly(K, v.pi)
    unit = x / pi**o
    return v.residue_field().is_square(v.residue(unit))


@dataclass(frozen=True)
class EtaleTorsionField:
    """k = K(etale p-torsion of the twist) described by one x-coordinate and
    the discriminant of the y-quadratic over it (p = 3 only)."""

    x0: Rat
    y_disc: Rat
    globally_rational: bool  # k = K


def etale_torsion_field(m):
    """Explicit p-division data for p = 3: the unique separable 3-torsion
    x-coordinate of the Frobenius twist and the field it generates."""
    K = m.K
    if K.p != 3:
        raise FrobtwistError("explicit torsion oracle implemented for p = 3 only")
    tw = m.frobenius_twist()
    b2, _, _, b8 = tw.invariants()[:4]
    if b2.is_zero():
        raise FrobtwistError("twist is not ordinary: b2 vanishes")
    # psi_3 = b2 x^3 + b8 in characteristic 3; x0 is its separable root
    gamma = -(b8 / b2)
    x0 = rational_pth_root(gamma)
    if x0 is None:
        raise FrobtwistError(
            "3-torsion x-coordinate is not rational: ordinary hypothesis fails"
        )
    a1, a2, a3, a4, a6 = tw.coefficients()
    lin = a1 * x0 + a3
    rhs = ((x0 + a2) * x0 + a4) * x0 + a6
    y_disc = lin * lin + Rat.const(K, 4 % K.p) * rhs
    return EtaleTorsionField(
        x0=x0, y_disc=y_disc, globally_rational=is_global_square(y_disc)
    )


def kernel_field_locally_trivial(torsion, v):
    """Whether k_w = K_v, from the explicit torsion data (p = 3)."""
    return is_local_square(torsion.y_disc, v)


# -- the unramified-extension rank ---------------------------------------------


def hbar(m, classification, sv=None, override=None, scan_bound=tate.DEFAULT_SCAN_BOUND):
    """p-rank of everywhere-unramified Z/p-extensions locally trivial at eth.

    Exact over k = K: unramified Z/p-extensions of F_q(t) are constant-field
    extensions, locally trivial at v exactly when p | deg v.  Returns None
    (unknown) when the torsion field is a genuine extension of K and no
    override is supplied.
    """
    if override is not None:
        return override
    K = m.K
    p = K.p
    if p == 2:
        k_is_K = True
    elif p == 3:
        try:
            k_is_K = etale_torsion_field(m).globally_rational
        except FrobtwistError:
            return None
    else:
        return None
    if not k_is_K:
        return None
    eth = classification.eth
    if all(v.degree % p == 0 for v in eth):
        return 1
    return 0


# -- main terms and intervals ---------------------------------------------------


def mu_shift(alphas):
    """Elementary mu-invariant transform under the un-twisting direction:
    (a_1 >= ... >= a_m) -> (a_1 - 1, ..., a_m' - 1), dropping entries equal 1."""
    out = [a - 1 for a in sorted(alphas, reverse=True) if a > 1]
    return tuple(out)


@dataclass(frozen=True)
class SelmerReport:
    p: int
    log_p_q: int
    deg_disc: int
    main_term: int  # M = (p-1) deg(min disc)/12 * log_p q
    hbar: object  # int or None (unknown)
    hbar_overridden: bool
    eth0_count: int
    eth1_count: int
    sel_interval: object  # (lo, hi) or None when hbar unknown
    growth_interval: object
    mu_rank_lower: int
    mu_rank_equality: int
    constant_extension_assumed: bool
    isotrivial: bool

    def check_invariants(self):
        assert self.main_term >= 0
        assert (self.main_term == 0) == self.isotrivial
        for iv in (self.sel_interval, self.growth_interval):
            if iv is not None:
                assert iv[0] <= iv[1]
        return True


def selmer_report(m, sv=None, hbar_override=None, scan_bound=tate.DEFAULT_SCAN_BOUND):
    sv = _ensure_survey(m, sv, scan_bound)
    K = m.K
    p = K.p
    logq = K.degree
    M = (p - 1) * sv.deg_disc // 12 * logq
    cls = classify_eth(m, sv)
    h = hbar(m, cls, sv, override=hbar_override)
    n0 = len(cls.eth0)
    n1 = len(cls.eth1)
    if h is None:
        sel_iv = None
        growth_iv = None
    else:
        sel_iv = (M - n0, M + 2 * h + 1 + n0)
        growth_iv = (M - 2 * h - 3 * n0, M + 2 * h + 1 + n0)
    rep = SelmerReport(
        p=p,
        log_p_q=logq,
        deg_disc=sv.deg_disc,
        main_term=M,
        hbar=h,
        hbar_overridden=hbar_override is not None,
        eth0_count=n0,
        eth1_count=n1,
        sel_interval=sel_iv,
        growth_interval=growth_iv,
        mu_rank_lower=M - n1,
        mu_rank_equality=M,
        constant_extension_assumed=True,
        isotrivial=sv.isotrivial,
    )
    rep.check_invariants()
    return rep
