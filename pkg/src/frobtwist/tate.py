"""Tate's algorithm over F_q(t), reduction classification, and the global
reduction survey.

The algorithm below follows the classical step structure and is valid in
residue characteristics 2 and 3: every coordinate adjustment is realized by
searching the residue field for a root of a reduced quadratic or cubic and
translating by a lift, never by dividing by 2 or 3.  The place at infinity
is handled on the s = 1/t chart and mapped back.
"""

from dataclasses import dataclass, field

from . import poly
from .errors import FrobtwistError, IncompleteScan
from .places import Place, valuation
from .ratfunc import Rat
from .weierstrass import Transformation, WeierstrassModel, point_count, _c

DEFAULT_SCAN_BOUND = 6


# -- residue helpers ----------------------------------------------------------


def _lift(v, code):
    """A polynomial representative of a residue-field element."""
    if code == 0:
        return ()
    Fv = v.residue_field()
    if v.degree == 1 and not v.is_infinity:
        # residue map is evaluation at the root of pi; constants lift constants
        return (code,)
    if v.is_infinity:
        return (code,)
    d = poly.deg(v.pi)
    return poly.normalize(Fv.digits(code)[:d])


def _roots_in(F, coeffs):
    """Roots in F of a low-degree polynomial given by residue codes."""
    out = []
    for x in F.elements():
        acc = 0
        for c in reversed(coeffs):
            acc = F.add(F.mul(acc, x), c)
        if acc == 0:
            out.append(x)
    return out


def _quad_double_root(F, A, B, C):
    """Double root of A z^2 + B z + C (A a unit), or None when separable."""
    if F.p == 2:
        if B != 0:
            return None
        return F.sqrt(F.mul(C, F.inv(A)))
    disc = F.sub(F.mul(B, B), F.mul(4 % F.p, F.mul(A, C)))
    if disc != 0:
        return None
    return F.mul(F.neg(B), F.inv(F.mul(2 % F.p, A)))


def _cubic_multiple_root(F, coeffs):
    """(root, multiplicity 2 or 3) of a monic-cubic-shaped [c0,c1,c2,c3] with
    a repeated root; None when squarefree."""
    dcoeffs = []
    for i in range(1, 4):
        m = i % F.p
        dcoeffs.append(F.mul(m, coeffs[i]) if m else 0)
    dpoly = poly.normalize(dcoeffs)
    cpoly = poly.normalize(coeffs)
    if not dpoly:
        # char 3 with vanishing quadratic and linear parts: perfect cube
        c3 = coeffs[3]
        r = F.pth_root(F.neg(F.mul(coeffs[0], F.inv(c3))))
        return r, 3
    g = poly.gcd(F, cpoly, dpoly)
    if poly.deg(g) < 1:
        return None
    roots = _roots_in(F, list(g))
    if not roots:
        raise FrobtwistError("repeated root of reduced cubic not rational")
    r = roots[0]
    # multiplicity: does (T - r)^3 divide?
    lin = poly.normalize((F.neg(r), 1))
    rest = poly.mod(F, poly.exact_div(F, cpoly, poly.mul(F, lin, lin)), lin)
    return r, (3 if not rest else 2)


class _Chart:
    """Work context at one finite-style place (possibly the s-chart of inf)."""

    def __init__(self, K, pi, orig_place):
        self.K = K
        self.pi = pi
        self.place = Place.finite(K, pi)
        self.orig = orig_place
        self.F = self.place.residue_field()
        self.pi_rat = Rat.of_poly(K, pi)

    def ordv(self, x):
        return valuation(x, self.place)

    def res(self, x):
        return self.place.residue(x)

    def res_div(self, x, k):
        return self.place.residue(x / self.pi_rat**k)

    def lift_rat(self, code, k=0):
        """lift(code) * pi^k as a rational function."""
        r = Rat.of_poly(self.K, _lift(self.place, code))
        return r * self.pi_rat**k if k else r


@dataclass(frozen=True)
class LocalReductionData:
    place: Place
    transformation: Transformation
    minimal_model: WeierstrassModel
    ord_disc: int
    kodaira: str
    kind: str  # "good" | "mult-split" | "mult-nonsplit" | "additive"
    c: int
    a_trace: object = None  # int at good places
    ordinary: object = None  # bool at good places
    component_order_even: object = None  # bool at non-split places

    @property
    def is_good(self):
        return self.kind == "good"

    @property
    def is_multiplicative(self):
        return self.kind in ("mult-split", "mult-nonsplit")

    def type_label(self):
        if self.kind == "good":
            return "Good"
        if self.kind == "mult-split":
            return "MultiplicativeSplit"
        if self.kind == "mult-nonsplit":
            return "MultiplicativeNonSplit"
        return f"Additive({self.kodaira})"


def _integralize(ch, m):
    """Scale so every coefficient is integral at the chart place."""
    lam = 0
    for a, wgt in zip(m.coefficients(), (1, 2, 3, 4, 6)):
        o = ch.ordv(a)
        if o < 0:
            need = (-o + wgt - 1) // wgt
            lam = max(lam, need)
    if lam == 0:
        return m, Transformation.identity(ch.K)
    tau = Transformation.scale(ch.pi_rat**-lam)
    return m.transform(tau), tau


def _translate(ch, m, tau_acc, r=None, s=None, w=None):
    K = ch.K
    zero = _c(K, 0)
    tau = Transformation(_c(K, 1), r or zero, s or zero, w or zero)
    return m.transform(tau), tau_acc.compose(tau)


def _tate_chart(ch, m):
    """Run Tate's algorithm at the chart place.

    Returns (minimal model, transformation, ord disc, kodaira tag, kind,
    c, extra) where extra carries the non-split component parity.
    """
    F = ch.F
    m, tau = _integralize(ch, m)

    while True:
        disc = m.discriminant()
        n_disc = ch.ordv(disc)
        if n_disc == 0:
            return m, tau, 0, "I0", "good", 1, None

        a1, a2, a3, a4, a6 = m.coefficients()
        c4 = m.invariants()[4]

        # move the singular point of the reduction to the origin
        r0, w0 = _singular_point(ch, m)
        if r0 or w0:
            m, tau = _translate(
                ch, m, tau, r=ch.lift_rat(r0) if r0 else None, w=ch.lift_rat(w0) if w0 else None
            )
            a1, a2, a3, a4, a6 = m.coefficients()

        if ch.ordv(c4) == 0:
            # multiplicative: I_n with n = ord(disc)
            n = n_disc
            roots = _roots_in(F, [F.neg(ch.res(a2)), ch.res(a1), 1])
            if roots:
                return m, tau, n, f"I{n}", "mult-split", n, None
            c = 2 if n % 2 == 0 else 1
            return m, tau, n, f"I{n}", "mult-nonsplit", c, (n % 2 == 0)

        # additive reduction
        if ch.ordv(a6) < 2:
            return m, tau, n_disc, "II", "additive", 1, None
        if ch.ordv(m.invariants()[3]) < 3:  # b8
            return m, tau, n_disc, "III", "additive", 2, None
        if ch.ordv(m.invariants()[2]) < 3:  # b6
            quad = [F.neg(ch.res_div(a6, 2)), ch.res_div(a3, 1), 1]
            c = 3 if _roots_in(F, quad) else 1
            return m, tau, n_disc, "IV", "additive", c, None

        # normalize to v(a1)>=1, v(a2)>=1, v(a3)>=2, v(a4)>=2, v(a6)>=3
        alpha = _quad_double_root(F, 1, ch.res(a1), F.neg(ch.res(a2)))
        if alpha is None:
            raise FrobtwistError("internal: tangent cone not a double line")
        if alpha:
            m, tau = _translate(ch, m, tau, s=ch.lift_rat(alpha))
            a1, a2, a3, a4, a6 = m.coefficients()
        beta = _quad_double_root(F, 1, ch.res_div(a3, 1), F.neg(ch.res_div(a6, 2)))
        if beta is None:
            raise FrobtwistError("internal: vertical quadratic not degenerate")
        if beta:
            m, tau = _translate(ch, m, tau, w=ch.lift_rat(beta, 1))
            a1, a2, a3, a4, a6 = m.coefficients()

        cubic = [
            ch.res_div(a6, 3),
            ch.res_div(a4, 2),
            ch.res_div(a2, 1),
            1,
        ]
        rep = _cubic_multiple_root(F, cubic)
        if rep is None:
            c = 1 + len(_roots_in(F, cubic))
            return m, tau, n_disc, "I0*", "additive", c, None

        root, multiplicity = rep
        if root:
            m, tau = _translate(ch, m, tau, r=ch.lift_rat(root, 1))
            a1, a2, a3, a4, a6 = m.coefficients()

        if multiplicity == 2:
            result = _istar_loop(ch, m, tau, n_disc)
            if result is not None:
                return result
            raise FrobtwistError("internal: I_n* loop did not terminate")

        # triple root
        quad = [F.neg(ch.res_div(a6, 4)), ch.res_div(a3, 2), 1]
        theta = _quad_double_root(F, 1, quad[1], quad[0])
        if theta is None:
            c = 3 if _roots_in(F, quad) else 1
            return m, tau, n_disc, "IV*", "additive", c, None
        if theta:
            m, tau = _translate(ch, m, tau, w=ch.lift_rat(theta, 2))
            a1, a2, a3, a4, a6 = m.coefficients()
        if ch.ordv(a4) < 4:
            return m, tau, n_disc, "III*", "additive", 2, None
        if ch.ordv(a6) < 6:
            return m, tau, n_disc, "II*", "additive", 1, None

        # non-minimal: scale once and restart
        m, tau = _rescale_down(ch, m, tau)


def _istar_loop(ch, m, tau, n_disc):
    """Sub-procedure for types I_n*, n >= 1."""
    F = ch.F
    level = 2
    n = 1
    while n < 10 * (n_disc + 8):
        a1, a2, a3, a4, a6 = m.coefficients()
        # quadratic in Y at this level
        B = ch.res_div(a3, level)
        C = F.neg(ch.res_div(a6, 2 * level))
        theta = _quad_double_root(F, 1, B, C)
        if theta is None:
            c = 4 if _roots_in(F, [C, B, 1]) else 2
            return m, tau, n_disc, f"I{n}*", "additive", c, None
        if theta:
            m, tau = _translate(ch, m, tau, w=ch.lift_rat(theta, level))
            a1, a2, a3, a4, a6 = m.coefficients()
        n += 1
        # quadratic in X at this level
        A = ch.res_div(a2, 1)
        B = ch.res_div(a4, level + 1)
        C = ch.res_div(a6, 2 * level + 1)
        eta = _quad_double_root(F, A, B, C)
        if eta is None:
            c = 4 if _roots_in(F, [C, B, A]) else 2
            return m, tau, n_disc, f"I{n}*", "additive", c, None
        if eta:
            m, tau = _translate(ch, m, tau, r=ch.lift_rat(eta, level))
        n += 1
        level += 1
    return None


def _rescale_down(ch, m, tau):
    t = Transformation.scale(ch.pi_rat)
    return m.transform(t), tau.compose(t)


def _singular_point(ch, m):
    """Residue codes (x0, y0) of the singular point of the reduced curve."""
    F = ch.F
    a1, a2, a3, a4, a6 = (ch.res(a) for a in m.coefficients())
    if F.p == 2:
        if a1 != 0:
            x0 = F.mul(a3, F.inv(a1))
            y0 = F.mul(F.add(F.mul(x0, x0), a4), F.inv(a1))
            return x0, y0
        x0 = F.sqrt(a4)
        rhs = F.add(
            F.add(F.mul(F.mul(x0, x0), x0), F.mul(a2, F.mul(x0, x0))),
            F.add(F.mul(a4, x0), a6),
        )
        y0 = F.sqrt(rhs)
        return x0, y0
    # odd characteristic: x0 is the repeated root of 4x^3 + b2 x^2 + 2b4 x + b6
    b2 = F.add(F.mul(a1, a1), F.mul(4 % F.p, a2))
    b4 = F.add(F.mul(2 % F.p, a4), F.mul(a1, a3))
    b6 = F.add(F.mul(a3, a3), F.mul(4 % F.p, a6))
    cub = [b6, F.mul(2 % F.p, b4), b2, 4 % F.p]
    rep = _cubic_multiple_root(F, cub)
    if rep is None:
        raise FrobtwistError("internal: reduction not singular")
    x0 = rep[0]
    y0 = F.mul(F.neg(F.add(F.mul(a1, x0), a3)), F.inv(2 % F.p))
    return x0, y0


# -- public per-place operations ----------------------------------------------


def _chart_for(m, v):
    if v.is_infinity:
        return _Chart(m.K, (0, 1), v), m.infinity_chart()
    return _Chart(m.K, v.pi, v), m


def _map_back(v, model, tau):
    if not v.is_infinity:
        return model, tau
    return model.infinity_chart(), Transformation(
        tau.u.infinity_chart(),
        tau.r.infinity_chart(),
        tau.s.infinity_chart(),
        tau.w.infinity_chart(),
    )


def minimal_model_at(m, v):
    """(minimal model, transformation, ord_v of the minimal discriminant)."""
    ch, mc = _chart_for(m, v)
    mm, tau, n, _, _, _, _ = _tate_chart(ch, mc)
    mm, tau = _map_back(v, mm, tau)
    return mm, tau, n


def reduction_type(m, v):
    """Full local classification at one place (minimalizes internally)."""
    ch, mc = _chart_for(m, v)
    mm, tau, n, tag, kind, c, extra = _tate_chart(ch, mc)
    a_trace = None
    ordinary = None
    if kind == "good":
        codes = tuple(ch.place.residue(a) for a in mm.coefficients())
        _, a_trace = point_count(ch.place.residue_field(), codes)
        ordinary = a_trace % m.K.p != 0
    mm, tau = _map_back(v, mm, tau)
    return LocalReductionData(
        place=v,
        transformation=tau,
        minimal_model=mm,
        ord_disc=n,
        kodaira=tag,
        kind=kind,
        c=c,
        a_trace=a_trace,
        ordinary=ordinary,
        component_order_even=extra,
    )


# -- the global survey ---------------------------------------------------------


@dataclass
class ReductionSurvey:
    model: WeierstrassModel
    finite_model: WeierstrassModel  # polynomial model, minimal at all finite places
    finite_transformation: Transformation
    local: dict  # Place -> LocalReductionData (all candidate bad places)
    deg_disc: int
    S_b: list
    eth_prime: list
    eth: list
    semistable: bool
    ordinary: bool
    isotrivial: bool
    ss_places: list = field(default_factory=list)  # [(Place, LocalReductionData)]
    ss_defects: dict = field(default_factory=dict)  # Place -> n_v
    ss_complete: bool = False
    scan_bound: int = 0
    violations: list = field(default_factory=list)

    def ord_disc(self, v):
        d = self.local.get(v)
        return d.ord_disc if d else 0

    def good_data(self, v):
        return self.local.get(v)


def _finite_minimal_polynomial_model(m):
    """A polynomial model minimal at every finite place, plus the transformation."""
    K = m.K
    # clear denominators: scale by u = 1/L so a_i -> a_i * L^i
    dens = (1,)
    for a, wgt in zip(m.coefficients(), (1, 2, 3, 4, 6)):
        dens = poly.mul(K, dens, a.den)
    L = Rat.of_poly(K, dens)
    tau = Transformation.scale(L.inverse()) if dens != (1,) else Transformation.identity(K)
    cur = m.transform(tau) if dens != (1,) else m
    if not cur.is_polynomial():
        raise FrobtwistError("internal: denominator clearing failed")
    disc = cur.discriminant()
    assert disc.is_poly()
    if poly.deg(disc.num) >= 1:
        for pi, _ in poly.factor(K, disc.num):
            ch = _Chart(K, pi, Place.finite(K, pi))
            mm, tau_v, _, _, _, _, _ = _tate_chart(ch, cur)
            cur = mm
            tau = tau.compose(tau_v)
            if not cur.is_polynomial():
                raise FrobtwistError("internal: local minimalization left the polynomial ring")
    return cur, tau


def survey(m, scan_bound=DEFAULT_SCAN_BOUND, scan_supersingular=True):
    """Classify all candidate bad places, total the minimal discriminant, and
    locate supersingular places with a completeness certificate."""
    from . import formal  # runtime import; formal does not import tate

    K = m.K
    p = K.p
    fin_model, fin_tau = _finite_minimal_polynomial_model(m)
    disc = fin_model.discriminant()

    local = {}
    deg_fin = 0
    if poly.deg(disc.num) >= 1:
        for pi, mult in poly.factor(K, disc.num):
            v = Place.finite(K, pi)
            data = reduction_type(fin_model, v)
            if data.ord_disc != mult:
                raise FrobtwistError("internal: minimal model not minimal at a factor place")
            local[v] = data
            deg_fin += mult * v.degree

    vinf = Place.infinity(K)
    data_inf = reduction_type(fin_model, vinf)
    if data_inf.ord_disc > 0:
        local[vinf] = data_inf
    deg_disc = deg_fin + data_inf.ord_disc

    S_b = sorted((v for v, d in local.items() if not d.is_good), key=Place.sort_key)
    additive = [v for v in S_b if local[v].kind == "additive"]
    eth_prime = [
        v
        for v in S_b
        if p == 2 and local[v].kind == "mult-nonsplit" and local[v].component_order_even
    ]
    eth = [v for v in S_b if v not in eth_prime]
    semistable = not additive
    isotrivial = m.is_isotrivial()

    ordinary = m.hasse_nonzero()
    violations = []
    for v in additive:
        violations.append(("Additive", v))
    if not ordinary:
        violations.append(("NonOrdinary", None))
    if semistable and ordinary and deg_disc % 12 != 0:
        raise FrobtwistError("internal: 12 does not divide deg of minimal discriminant")

    sv = ReductionSurvey(
        model=m,
        finite_model=fin_model,
        finite_transformation=fin_tau,
        local=local,
        deg_disc=deg_disc,
        S_b=S_b,
        eth_prime=eth_prime,
        eth=eth,
        semistable=semistable,
        ordinary=ordinary,
        isotrivial=isotrivial,
        violations=violations,
    )

    if not (scan_supersingular and semistable and ordinary):
        return sv

    target = (p - 1) * deg_disc // 12
    running = 0
    sv.scan_bound = scan_bound
    for d in range(1, scan_bound + 1):
        for v in _places_of_degree(K, d):
            if v in local and not local[v].is_good:
                continue
            data = local.get(v) or reduction_type(fin_model, v)
            if not data.is_good:
                continue
            if data.a_trace % p != 0:
                continue
            n_v = formal.supersingular_defect(data.minimal_model, v, data)
            sv.ss_places.append((v, data))
            sv.ss_defects[v] = n_v
            running += n_v * v.degree
        if running == target:
            sv.ss_complete = True
            break
        if running > target:
            raise FrobtwistError(
                f"internal: supersingular defect sum {running} exceeds target {target}"
            )
    if not sv.ss_complete:
        raise IncompleteScan(
            f"supersingular scan reached degree {scan_bound} with defect sum "
            f"{running} < target {target}"
        )
    return sv


def _places_of_degree(K, d):
    out = [Place.finite(K, pi) for pi in poly.irreducibles(K, d)]
    if d == 1:
        out.append(Place.infinity(K))
    return out


@dataclass(frozen=True)
class GuardReport:
    passed: bool
    violations: tuple

    def __bool__(self):
        return self.passed


def semistable_ordinary_guard(sv):
    """Check the standing hypothesis: semistable everywhere and ordinary."""
    return GuardReport(passed=not sv.violations, violations=tuple(sv.violations))
