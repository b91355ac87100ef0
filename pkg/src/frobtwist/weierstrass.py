"""Weierstrass models over F_q(t): invariants, coordinate changes, the
Frobenius twist, and exhaustive point counts over residue fields."""

from . import poly
from .errors import FrobtwistError, SizeBound, Singular, ZeroScale
from .ratfunc import Rat

_COUNT_BOUND = 1 << 16


def _c(K, n):
    """Embed a small integer constant."""
    return Rat.const(K, n % K.p)


class Transformation:
    """Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + w."""

    __slots__ = ("u", "r", "s", "w")

    def __init__(self, u, r, s, w):
        if u.is_zero():
            raise ZeroScale("transformation scale u must be nonzero")
        self.u = u
        self.r = r
        self.s = s
        self.w = w

    @classmethod
    def identity(cls, K):
        return cls(_c(K, 1), _c(K, 0), _c(K, 0), _c(K, 0))

    @classmethod
    def scale(cls, u):
        K = u.K
        return cls(u, _c(K, 0), _c(K, 0), _c(K, 0))

    def compose(self, other):
        """First apply self, then `other` (matches transform(transform(m, self), other))."""
        u1, r1, s1, w1 = self.u, self.r, self.s, self.w
        u2, r2, s2, w2 = other.u, other.r, other.s, other.w
        return Transformation(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            w1 + u1 * u1 * s1 * r2 + u1 * u1 * u1 * w2,
        )

    def inverse(self):
        u, r, s, w = self.u, self.r, self.s, self.w
        ui = u.inverse()
        ui2 = ui * ui
        ui3 = ui2 * ui
        return Transformation(ui, -(r * ui2), -(s * ui), (s * r - w) * ui3)

    def frobenius(self):
        """Entrywise p-th power, matching the twist of a transformed model."""
        return Transformation(self.u.frob(), self.r.frob(), self.s.frob(), self.w.frob())

    def render(self):
        return (
            f"(u={self.u.render()}, r={self.r.render()}, "
            f"s={self.s.render()}, w={self.w.render()})"
        )

    def __repr__(self):
        return f"Transformation{self.render()}"


class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_q(t)."""

    __slots__ = ("K", "a1", "a2", "a3", "a4", "a6", "_inv")

    def __init__(self, K, a1, a2, a3, a4, a6):
        self.K = K
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self._inv = None
        if self.discriminant().is_zero():
            raise Singular("discriminant vanishes")

    @classmethod
    def from_polys(cls, K, coeffs):
        a = [Rat.of_poly(K, f) for f in coeffs]
        return cls(K, *a)

    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def invariants(self):
        """(b2, b4, b6, b8, c4, c6, disc, j)."""
        if self._inv is None:
            K = self.K
            a1, a2, a3, a4, a6 = self.coefficients()
            b2 = a1 * a1 + _c(K, 4) * a2
            b4 = _c(K, 2) * a4 + a1 * a3
            b6 = a3 * a3 + _c(K, 4) * a6
            b8 = a1 * a1 * a6 + _c(K, 4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
            c4 = b2 * b2 - _c(K, 24) * b4
            c6 = -(b2 * b2 * b2) + _c(K, 36) * b2 * b4 - _c(K, 216) * b6
            disc = (
                -(b2 * b2 * b8)
                - _c(K, 8) * b4 * b4 * b4
                - _c(K, 27) * b6 * b6
                + _c(K, 9) * b2 * b4 * b6
            )
            j = (c4 * c4 * c4) / disc if not disc.is_zero() else None
            self._inv = (b2, b4, b6, b8, c4, c6, disc, j)
        return self._inv

    def discriminant(self):
        K = self.K
        a1, a2, a3, a4, a6 = self.coefficients()
        b2 = a1 * a1 + _c(K, 4) * a2
        b4 = _c(K, 2) * a4 + a1 * a3
        b6 = a3 * a3 + _c(K, 4) * a6
        b8 = a1 * a1 * a6 + _c(K, 4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return (
            -(b2 * b2 * b8)
            - _c(K, 8) * b4 * b4 * b4
            - _c(K, 27) * b6 * b6
            + _c(K, 9) * b2 * b4 * b6
        )

    def j_invariant(self):
        return self.invariants()[7]

    def is_isotrivial(self):
        return self.j_invariant().is_constant()

    def hasse_nonzero(self):
        """Whether the generic fiber is ordinary (p in {2,3}: a1 != 0, b2 != 0;
        otherwise decided downstream by point counts)."""
        p = self.K.p
        if p == 2:
            return not self.a1.is_zero()
        if p == 3:
            return not self.invariants()[0].is_zero()
        return True

    def transform(self, tau):
        """Apply a change of variables; disc scales by u^-12, j is fixed."""
        K = self.K
        u, r, s, w = tau.u, tau.r, tau.s, tau.w
        a1, a2, a3, a4, a6 = self.coefficients()
        ui = u.inverse()
        u2, u3 = ui * ui, ui * ui * ui
        u4, u6 = u2 * u2, u3 * u3
        na1 = (a1 + _c(K, 2) * s) * ui
        na2 = (a2 - s * a1 + _c(K, 3) * r - s * s) * u2
        na3 = (a3 + r * a1 + _c(K, 2) * w) * u3
        na4 = (a4 - s * a3 + _c(K, 2) * r * a2 - (w + r * s) * a1 + _c(K, 3) * r * r - _c(K, 2) * s * w) * u4
        na6 = (a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1) * u6
        return WeierstrassModel(K, na1, na2, na3, na4, na6)

    def frobenius_twist(self):
        """Base change along x -> x^p: raise every coefficient to the p-th power."""
        return WeierstrassModel(self.K, *(a.frob() for a in self.coefficients()))

    def infinity_chart(self):
        """The same equation written over F_q(s), s = 1/t."""
        return WeierstrassModel(self.K, *(a.infinity_chart() for a in self.coefficients()))

    def is_polynomial(self):
        return all(a.is_poly() for a in self.coefficients())

    def reduce_at(self, v):
        """Residue-field coefficient codes at a place where all a_i are integral."""
        return tuple(v.residue(a) for a in self.coefficients())

    def render(self):
        return "[" + ", ".join(a.render() for a in self.coefficients()) + "]"

    def __repr__(self):
        return f"WeierstrassModel{self.render()}"

    def __eq__(self, other):
        return (
            isinstance(other, WeierstrassModel)
            and self.K == other.K
            and self.coefficients() == other.coefficients()
        )

    def __hash__(self):
        return hash(self.coefficients())


def check_universal_relations(m):
    """4 b8 = b2 b6 - b4^2 always; 1728 disc = c4^3 - c6^2 away from char 2, 3."""
    K = m.K
    b2, b4, b6, b8, c4, c6, disc, _ = m.invariants()
    if _c(K, 4) * b8 != b2 * b6 - b4 * b4:
        return False
    if K.p not in (2, 3):
        if _c(K, 1728) * disc != c4 * c4 * c4 - c6 * c6:
            return False
    return True


# -- points over finite fields ----------------------------------------------


def _disc_codes(F, a):
    a1, a2, a3, a4, a6 = a
    mul, add, sub = F.mul, F.add, F.sub

    def cm(n, x):
        return mul(n % F.p, x)

    b2 = add(mul(a1, a1), cm(4, a2))
    b4 = add(cm(2, a4), mul(a1, a3))
    b6 = add(mul(a3, a3), cm(4, a6))
    b8 = sub(
        add(add(mul(mul(a1, a1), a6), cm(4, mul(a2, a6))), mul(a2, mul(a3, a3))),
        add(mul(a1, mul(a3, a4)), mul(a4, a4)),
    )
    d = sub(
        add(F.neg(mul(mul(b2, b2), b8)), cm(9, mul(b2, mul(b4, b6)))),
        add(cm(8, mul(b4, mul(b4, b4))), cm(27, mul(b6, b6))),
    )
    return d


def _trace_to_f2(F, z):
    t = z
    acc = z
    for _ in range(F.degree - 1):
        t = F.mul(t, t)
        acc = F.add(acc, t)
    return acc


def point_count(F, a):
    """(N, a_v) by exhaustive x-enumeration; includes the point at infinity."""
    if F.q > _COUNT_BOUND:
        raise SizeBound(f"residue field of size {F.q} exceeds counting bound")
    if _disc_codes(F, a) == 0:
        raise Singular("reduction is singular")
    a1, a2, a3, a4, a6 = a
    mul, add = F.mul, F.add
    n = 1
    if F.p == 2:
        for x in F.elements():
            x2 = mul(x, x)
            rhs = add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6))
            c = add(mul(a1, x), a3)
            if c == 0:
                n += 1  # unique square root
            else:
                z = mul(rhs, F.inv(mul(c, c)))
                if _trace_to_f2(F, z) == 0:
                    n += 2
    else:
        half = (F.q + 1) // 2  # inverse of 2 exists, but chi arithmetic avoids it
        for x in F.elements():
            x2 = mul(x, x)
            rhs = add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6))
            lin = add(mul(a1, x), a3)
            e = add(mul(4 % F.p, rhs), mul(lin, lin))
            if e == 0:
                n += 1
            elif F.is_square(e):
                n += 2
    av = F.q + 1 - n
    if av * av > 4 * F.q:
        raise FrobtwistError("Hasse bound violated: inconsistent count")
    return n, av


def point_count_y_enum(F, a):
    """Independent count enumerating y and solving the cubic in x by scanning."""
    if F.q > 1 << 10:
        raise SizeBound("y-enumeration oracle restricted to small fields")
    if _disc_codes(F, a) == 0:
        raise Singular("reduction is singular")
    a1, a2, a3, a4, a6 = a
    mul, add = F.mul, F.add
    n = 1
    for y in F.elements():
        y2 = mul(y, y)
        for x in F.elements():
            x2 = mul(x, x)
            lhs = add(y2, add(mul(a1, mul(x, y)), mul(a3, y)))
            rhs = add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6))
            if lhs == rhs:
                n += 1
    return n, F.q + 1 - n


def is_supersingular(F, a):
    _, av = point_count(F, a)
    return av % F.p == 0


# -- affine group law (used by oracles) ---------------------------------------


def ec_neg(F, a, P):
    if P is None:
        return None
    a1, _, a3, _, _ = a
    x, y = P
    return (x, F.sub(F.sub(F.neg(y), F.mul(a1, x)), a3))


def ec_add(F, a, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, _ = a
    x1, y1 = P
    x2, y2 = Q
    mul, add, sub = F.mul, F.add, F.sub
    if x1 == x2:
        if Q == ec_neg(F, a, P):
            return None
        num = sub(add(mul(3 % F.p, mul(x1, x1)), add(mul(mul(2 % F.p, a2), x1), a4)), mul(a1, y1))
        den = add(add(mul(2 % F.p, y1), mul(a1, x1)), a3)
        lam = mul(num, F.inv(den))
    else:
        lam = mul(sub(y2, y1), F.inv(sub(x2, x1)))
    nu = sub(y1, mul(lam, x1))
    x3 = sub(sub(add(mul(lam, lam), mul(a1, lam)), a2), add(x1, x2))
    y3 = sub(F.neg(add(mul(add(lam, a1), x3), nu)), a3)
    return (x3, y3)


def ec_mul(F, a, n, P):
    R = None
    B = P
    while n:
        if n & 1:
            R = ec_add(F, a, R, B)
        B = ec_add(F, a, B, B)
        n >>= 1
    return R


def ec_points(F, a):
    """All affine points plus None for infinity (small fields only)."""
    if F.q > 1 << 10:
        raise SizeBound("point enumeration restricted to small fields")
    a1, a2, a3, a4, a6 = a
    mul, add = F.mul, F.add
    pts = [None]
    for x in F.elements():
        x2 = mul(x, x)
        rhs = add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6))
        for y in F.elements():
            lhs = add(mul(y, y), add(mul(a1, mul(x, y)), mul(a3, y)))
            if lhs == rhs:
                pts.append((x, y))
    return pts
