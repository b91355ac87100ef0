"""Formal group law of a minimal model, multiplication series, the
Verschiebung factor series, supersingular defects, and local kernel orders.

The multiplication-by-p series on the formal group is supported on exponents
divisible by p; reindexing those coefficients gives the Verschiebung factor
series V with [p](tau) = V(tau^p).  Its t-linear coefficient z1 is an exact
rational function whose valuation at a good place v is the supersingular
defect n_v: zero exactly at ordinary places, positive at supersingular ones.
The degree-p distinguished polynomial of V is extracted by Hensel
factorization in F_q[t]/(pi^M), and the kernel-field flag eps_v is decided
by lifting a residual root of the slope part of its Newton polygon.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import hensel, poly
from .errors import (
    FrobtwistError,
    MissingVerschiebungData,
    NonOrdinaryCurve,
    NotMinimal,
    PrecisionBound,
)
from .places import LocalRing, Place, valuation
from .ratfunc import Rat
from .series import SeriesRing
from .weierstrass import WeierstrassModel, point_count


def default_series_degree(p):
    """Covers the distinguished polynomial through degree p with margin."""
    return 2 * p * p + 2


@dataclass(frozen=True)
class FormalGroupLaw:
    model: WeierstrassModel
    place: object  # Place or None for an everywhere-integral model
    N: int
    F: dict  # bivariate series {(i, j): Rat}

    def coeff(self, i, j):
        c = self.F.get((i, j))
        return c if c is not None else Rat.const(self.model.K, 0)


def _group_law_series(m, N):
    """F(X, Y) to total degree N from the Weierstrass equation at infinity."""
    K = m.K
    a1, a2, a3, a4, a6 = m.coefficients()
    one = Rat.const(K, 1)

    # w(t) = t^3 + ... satisfying w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3
    S1 = SeriesRing(K, 1, N + 1)
    t = S1.var(0)
    t2 = S1.mul(t, t)
    t3 = S1.mul(t2, t)
    w = t3
    for _ in range(N + 1):
        w2 = S1.mul(w, w)
        new = S1.add(
            t3,
            S1.add(
                S1.add(S1.scalar(a1, S1.mul(t, w)), S1.scalar(a2, S1.mul(t2, w))),
                S1.add(
                    S1.add(S1.scalar(a3, w2), S1.scalar(a4, S1.mul(t, w2))),
                    S1.scalar(a6, S1.mul(w, w2)),
                ),
            ),
        )
        if new == w:
            break
        w = new
    A = {e[0]: c for e, c in w.items()}  # w = sum A[n] t^n, A[3] = 1

    S2 = SeriesRing(K, 2, N)
    lam = {}
    for n, c in A.items():
        # (t2^n - t1^n)/(t2 - t1) = sum_{i+j=n-1} t1^i t2^j
        for i in range(n):
            j = n - 1 - i
            if i + j <= N:
                lam[(i, j)] = lam.get((i, j), Rat.const(K, 0)) + c
    lam = {e: c for e, c in lam.items() if not c.is_zero()}
    w1 = {(n, 0): c for n, c in A.items() if n <= N}
    t1 = S2.var(0)
    t2v = S2.var(1)
    nu = S2.sub(w1, S2.mul(lam, t1))

    lam2 = S2.mul(lam, lam)
    lam3 = S2.mul(lam2, lam)
    two = Rat.const(K, 2 % K.p)
    three = Rat.const(K, 3 % K.p)
    c3 = S2.add(
        S2.const(one),
        S2.add(S2.scalar(a2, lam), S2.add(S2.scalar(a4, lam2), S2.scalar(a6, lam3))),
    )
    c2 = S2.add(
        S2.add(S2.scalar(a1, lam), S2.scalar(a2, nu)),
        S2.add(
            S2.scalar(a3, lam2),
            S2.add(
                S2.scalar(two * a4, S2.mul(lam, nu)),
                S2.scalar(three * a6, S2.mul(lam2, nu)),
            ),
        ),
    )
    t3s = S2.neg(S2.add(S2.add(t1, t2v), S2.mul(c2, S2.inverse(c3))))

    # inversion series i(t) = -t / (1 - a1 t - a3 w(t))
    den = {0: one}
    for n, c in A.items():
        if n <= N:
            den[n] = den.get(n, Rat.const(K, 0)) - a3 * c
    den[1] = den.get(1, Rat.const(K, 0)) - a1
    den_s = {(n,): c for n, c in den.items() if not c.is_zero()}
    Sinv = SeriesRing(K, 1, N)
    inv_unit = Sinv.inverse(den_s)
    it = Sinv.neg(Sinv.mul(Sinv.var(0), inv_unit))  # i(t) as univariate

    # F = i(t3(t1, t2)) via powers of t3
    powers = S2.powers(t3s, N)
    F = {}
    for e, c in it.items():
        k = e[0]
        for e2, c2 in powers[k].items():
            cur = F.get(e2)
            val = c * c2
            if cur is None:
                F[e2] = val
            else:
                s = cur + val
                if s.is_zero():
                    del F[e2]
                else:
                    F[e2] = s
    return F


@lru_cache(maxsize=64)
def _cached_group_law(m, N):
    return _group_law_series(m, N)


def formal_group_law(m, v, N, assume_minimal=False):
    """The formal group law of a v-minimal model, truncated at total degree N."""
    K = m.K
    if N < K.p + 1:
        raise PrecisionBound(f"series degree bound {N} below p+1")
    if v is not None:
        for a in m.coefficients():
            if not a.is_zero() and valuation(a, v) < 0:
                raise NotMinimal("model is not integral at the place")
        if not assume_minimal:
            from . import tate  # runtime import: tate imports this module

            _, _, n_min = tate.minimal_model_at(m, v)
            if valuation(m.discriminant(), v) != n_min:
                raise NotMinimal("model is not minimal at the place")
    return FormalGroupLaw(model=m, place=v, N=N, F=_cached_group_law(m, N))


def _eval_bivariate(K, F, s_series, N):
    """F(s(t), t) for a univariate series s with no constant term."""
    S1 = SeriesRing(K, 1, N)
    max_i = max((e[0] for e in F), default=0)
    powers = S1.powers(s_series, max_i)
    out = {}
    for (i, j), c in F.items():
        for e, c2 in powers[i].items():
            k = e[0] + j
            if k > N:
                continue
            cur = out.get((k,))
            val = c * c2
            if cur is None:
                out[(k,)] = val
            else:
                s = cur + val
                if s.is_zero():
                    del out[(k,)]
                else:
                    out[(k,)] = s
    return out


def mult_series(fgl, mm):
    """[mm](t) on the formal group, as a univariate series dict {(k,): Rat}."""
    K = fgl.model.K
    if mm < 0:
        raise FrobtwistError("multiplication index must be non-negative")
    S1 = SeriesRing(K, 1, fgl.N)
    t = S1.var(0)
    cur = None
    for _ in range(mm):
        cur = t if cur is None else _eval_bivariate(K, fgl.F, cur, fgl.N)
    return cur if cur is not None else S1.zero()


def p_multiplication_coefficients(fgl):
    """Coefficient list [c_0..c_N] of the [p]-series, exact rational functions."""
    K = fgl.model.K
    s = mult_series(fgl, K.p)
    out = [Rat.const(K, 0)] * (fgl.N + 1)
    for e, c in s.items():
        out[e[0]] = c
    return out


def verschiebung_factor(pcoeffs, p):
    """V with [p](tau) = V(tau^p); fails if the support is not p-divisible."""
    for j, c in enumerate(pcoeffs):
        if j % p and not c.is_zero():
            raise FrobtwistError(
                f"[p]-series has a nonzero coefficient at exponent {j} not divisible by {p}"
            )
    return [pcoeffs[j] for j in range(0, len(pcoeffs), p)]


@dataclass(frozen=True)
class VerschiebungData:
    place: Place
    N: int
    p_series: tuple  # [p]-series coefficients (Rat), index = exponent
    factor_series: tuple  # V-series coefficients (Rat), [p](tau) = V(tau^p)
    z1: Rat
    n_v: int
    distinguished: tuple  # codes of P(t) coefficients in F_q[x]/(pi^M), monic deg p
    precision: int  # the M of the coefficient ring
    epsilon: object  # 1, 0, or None (ordinary/multiplicative places, or indeterminate)
    certified: bool
    kind: str  # "ordinary" | "supersingular" | "multiplicative"


def _chart_pieces(m, v):
    if v.is_infinity:
        return m.infinity_chart(), Place.finite(m.K, (0, 1))
    return m, v


@lru_cache(maxsize=64)
def _pseries_for(m, N):
    fgl = FormalGroupLaw(model=m, place=None, N=N, F=_cached_group_law(m, N))
    return tuple(p_multiplication_coefficients(fgl))


def supersingular_defect(m, v, reduction=None, N=None):
    """n_v = ord_v(z1) at a good place of a v-minimal model (0 iff ordinary)."""
    K = m.K
    p = K.p
    if N is None:
        N = max(default_series_degree(p) // 2, p + 2)
    mc, vc = _chart_pieces(m, v)
    if reduction is not None and valuation(mc.discriminant(), vc) != reduction.ord_disc:
        raise NotMinimal("model is not minimal at the place")
    pc = _pseries_for(mc, N)
    z1 = pc[p]
    if z1.is_zero():
        raise NonOrdinaryCurve("the [p]-series t^p coefficient vanishes identically")
    n_v = valuation(z1, vc)
    if n_v < 0:
        raise FrobtwistError("internal: negative defect; model not integral at place")
    if reduction is not None and reduction.is_good:
        if (n_v == 0) != (reduction.a_trace % p != 0):
            raise FrobtwistError("internal: ordinariness mismatch between counts and series")
    return n_v


def verschiebung_data(m, v, reduction=None, N=None):
    """Full Verschiebung bookkeeping at one place of a v-minimal model.

    Multiplicative places short-circuit (the Verschiebung is an isomorphism
    on formal groups there); good places carry the distinguished polynomial
    and, at supersingular ones, the kernel-field flag eps_v.
    """
    K = m.K
    p = K.p
    if N is None:
        N = default_series_degree(p)

    if reduction is None:
        from . import tate

        reduction = tate.reduction_type(m, v)

    if reduction.is_multiplicative:
        one = Rat.const(K, 1)
        return VerschiebungData(
            place=v,
            N=N,
            p_series=(),
            factor_series=(),
            z1=one,
            n_v=0,
            distinguished=((), (1,)),
            precision=0,
            epsilon=None,
            certified=True,
            kind="multiplicative",
        )
    if reduction.kind == "additive":
        raise FrobtwistError("Verschiebung data is only defined for semistable places")

    mc, vc = _chart_pieces(m, v)
    for a in mc.coefficients():
        if not a.is_zero() and valuation(a, vc) < 0:
            raise NotMinimal("model is not integral at the place")
    if valuation(mc.discriminant(), vc) != reduction.ord_disc:
        raise NotMinimal("model is not minimal at the place")
    pc = _pseries_for(mc, N)
    vf = verschiebung_factor(pc, p)
    z1 = vf[1] if len(vf) > 1 else Rat.const(K, 0)
    if z1.is_zero():
        raise NonOrdinaryCurve("the [p]-series t^p coefficient vanishes identically")
    n_v = valuation(z1, vc)
    ordinary = n_v == 0
    if (reduction.a_trace % p != 0) != ordinary:
        raise FrobtwistError("internal: ordinariness mismatch between counts and series")

    if ordinary:
        return VerschiebungData(
            place=v,
            N=N,
            p_series=pc,
            factor_series=tuple(vf),
            z1=z1,
            n_v=0,
            distinguished=((), (1,)),  # P(t) = t
            precision=0,
            epsilon=None,
            certified=True,
            kind="ordinary",
        )

    # supersingular: Weierstrass preparation of V at precision M
    M = n_v + 4
    A = LocalRing(K, vc.pi, M)
    tcap = len(vf) - 1
    if tcap < p + 1:
        raise PrecisionBound("series bound too small for Weierstrass preparation")
    h = [A.from_rat(c) for c in vf]
    P, _unit = hensel.distinguish(A, h, p, tcap)
    # certified coefficient valuations: z_1 must sit at exactly n_v
    if A.val(P[1]) != n_v:
        raise FrobtwistError("internal: prepared polynomial contradicts the defect")
    eps = _epsilon_flag(A, vc, P, n_v, p)
    return VerschiebungData(
        place=v,
        N=N,
        p_series=pc,
        factor_series=tuple(vf),
        z1=z1,
        n_v=n_v,
        distinguished=tuple(tuple(c) for c in P),
        precision=M,
        epsilon=eps,
        certified=True,
        kind="supersingular",
    )


def _epsilon_flag(A, vc, P, n_v, p):
    """1 iff P(t)/t splits over the completion; decided by a residual root.

    Newton-polygon slope integrality first; then the slope part is rescaled
    and a simple residual root is searched in the residue field.  A repeated
    residual root cannot be certified either way and yields None.
    """
    if n_v % (p - 1) != 0:
        return 0
    e = n_v // (p - 1)
    if e >= A.M:
        raise PrecisionBound("precision too small for the residual polynomial")
    # P(t)/t = t^(p-1) + z_{p-1} t^(p-2) + ... + z_1; substitute t = pi^e s
    # and divide by pi^(e(p-1)): residual R(s) = s^(p-1) + sum rho_i s^i
    Fv = vc.residue_field()
    codes = []
    for i in range(p):  # coefficient of s^i, i = 0..p-1
        if i == p - 1:
            codes.append(1)
            continue
        zi = P[i + 1]
        need = e * (p - 1 - i)
        if A.val(zi) < need:
            raise FrobtwistError("internal: Newton polygon slope violated")
        codes.append(A.residue(A.shift(zi, -need)))
    roots = [x for x in Fv.elements() if _eval_codes(Fv, codes, x) == 0]
    if not roots:
        return 0
    for r in roots:
        dval = _eval_codes(Fv, _derive_codes(Fv, codes), r)
        if dval != 0:
            return 1
    return None  # repeated residual root: indeterminate at this precision


def _eval_codes(F, codes, x):
    acc = 0
    for c in reversed(codes):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _derive_codes(F, codes):
    out = []
    for i in range(1, len(codes)):
        mi = i % F.p
        out.append(F.mul(mi, codes[i]) if mi else 0)
    return out


def ker_jv_log(m, data, vd=None):
    """log_p of the local kernel order |ker j_v| at one place.

    Good supersingular places contribute eps_v + n_v * deg(v) * log_p(q) and
    require Verschiebung data; ordinary and multiplicative places are decided
    by the reduction data alone.  Returns None when eps_v is indeterminate.
    """
    K = m.K
    p = K.p
    if data.kind == "mult-split":
        return 0
    if data.kind == "mult-nonsplit":
        return 1 if (p == 2 and data.component_order_even) else 0
    if data.kind == "additive":
        raise FrobtwistError("local kernel order undefined at additive places")
    # good place
    if data.ordinary:
        if p == 2:
            return 1
        return 1 if data.a_trace % p == 1 else 0
    if vd is None:
        raise MissingVerschiebungData("supersingular place needs Verschiebung data")
    if vd.epsilon is None:
        return None
    return vd.epsilon + vd.n_v * data.place.degree * K.degree


# -- axiom checks (used by the test suite and `verify`) ------------------------


def is_identity_law(fgl):
    K = fgl.model.K
    S2 = SeriesRing(K, 2, fgl.N)
    x_only = S2.set_var_zero(fgl.F, 1)
    y_only = S2.set_var_zero(fgl.F, 0)
    return x_only == {(1, 0): Rat.const(K, 1)} and y_only == {(0, 1): Rat.const(K, 1)}


def is_commutative(fgl):
    for (i, j), c in fgl.F.items():
        other = fgl.F.get((j, i))
        if other is None or other != c:
            return False
    return True


def is_associative(fgl):
    """Exact comparison of F(F(X,Y),Z) and F(X,F(Y,Z)) modulo total degree N."""
    K = fgl.model.K
    N = fgl.N
    S2 = SeriesRing(K, 2, N)
    powers = S2.powers(fgl.F, max(max(i, j) for (i, j) in fgl.F) if fgl.F else 0)

    def accumulate(out, e3, val):
        cur = out.get(e3)
        if cur is None:
            out[e3] = val
        else:
            s = cur + val
            if s.is_zero():
                del out[e3]
            else:
                out[e3] = s

    left = {}
    right = {}
    for (i, j), c in fgl.F.items():
        for e2, c2 in powers[i].items():
            if e2[0] + e2[1] + j <= N:
                accumulate(left, (e2[0], e2[1], j), c * c2)
        for e2, c2 in powers[j].items():
            if i + e2[0] + e2[1] <= N:
                accumulate(right, (i, e2[0], e2[1]), c * c2)
    return left == right
