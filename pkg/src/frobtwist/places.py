"""Places of F_q(t), valuations, finite-precision local expansions, and the
truncated local rings used for Hensel work.

A finite place is a monic irreducible pi in F_q[t]; the place at infinity
has uniformizer 1/t and degree 1.  Completions are realized exactly as
F_q[x]/(pi^M): in equal characteristic this is the ring of integers modulo
the M-th power of the maximal ideal, with no precision loss.
"""

import math
from dataclasses import dataclass

from . import poly
from .errors import DivisibilityViolation, EnumerationBound, FrobtwistError, PrecisionBound
from .gf import FiniteField
from .ratfunc import Rat

_PRECISION_MAX = 1 << 14
_ENUM_BOUND = 1 << 22

INF = math.inf


class Place:
    """A closed point of P^1 over F_q."""

    __slots__ = ("K", "pi", "degree", "_res")

    def __init__(self, K, pi):
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "degree", len(pi) - 1 if pi is not None else 1)
        object.__setattr__(self, "_res", None)

    def __setattr__(self, *a):
        raise AttributeError("Place is immutable")

    @classmethod
    def finite(cls, K, pi):
        pi = poly.normalize(pi)
        if poly.deg(pi) < 1 or pi[-1] != 1:
            raise FrobtwistError("finite place needs a monic polynomial of degree >= 1")
        return cls(K, pi)

    @classmethod
    def infinity(cls, K):
        return cls(K, None)

    @property
    def is_infinity(self):
        return self.pi is None

    @property
    def residue_cardinality(self):
        return self.K.q**self.degree

    def residue_field(self):
        """F_v; equals the constant field when deg v = 1."""
        if self._res is None:
            if self.is_infinity or self.degree == 1:
                object.__setattr__(self, "_res", self.K)
            else:
                object.__setattr__(
                    self, "_res", FiniteField.extension(self.K, self.pi, symbol="T")
                )
        return self._res

    def residue(self, x):
        """Image of a v-integral rational function in F_v (as a code)."""
        s = local_expand(x, self, 0)
        if s.lead < 0:
            raise FrobtwistError("residue of a non-integral element")
        return s.coeff_at(0)

    def sort_key(self):
        if self.is_infinity:
            return (1, 0, 0)
        return (0, self.degree, poly.code_of(self.K, self.pi))

    def render(self):
        return "inf" if self.is_infinity else poly.render(self.K, self.pi)

    def __repr__(self):
        return f"Place({self.render()})"

    def __eq__(self, other):
        return isinstance(other, Place) and self.K == other.K and self.pi == other.pi

    def __hash__(self):
        return hash((self.K.q, self.pi))


def all_places(K, max_degree, include_infinity=True):
    """Finite places of degree <= max_degree in canonical order, then infinity."""
    out = []
    for d in range(1, max_degree + 1):
        for f in poly.irreducibles(K, d):
            out.append(Place.finite(K, f))
    if include_infinity:
        out.append(Place.infinity(K))
    return out


def _poly_val(K, f, pi):
    """Multiplicity of pi in f (f nonzero)."""
    n = 0
    while True:
        q, r = poly.divmod_(K, f, pi)
        if r:
            return n, f
        f = q
        n += 1


def valuation(x, v):
    """ord_v(x) for a rational function; +inf for 0."""
    if x.is_zero():
        return INF
    K = x.K
    if v.is_infinity:
        return (len(x.den) - 1) - (len(x.num) - 1)
    a, _ = _poly_val(K, x.num, v.pi)
    if a > 0:
        return a
    b, _ = _poly_val(K, x.den, v.pi)
    return -b


@dataclass(frozen=True)
class LocalSeries:
    """x = sum coeffs[i] * pi^(lead+i) + O(pi^(lead+N+1)), coeffs in F_v codes."""

    place: Place
    lead: int
    coeffs: tuple
    trunc: int  # N: coeffs covers exponents lead .. lead+N

    def coeff_at(self, exponent):
        i = exponent - self.lead
        if i < 0:
            return 0
        if i >= len(self.coeffs):
            raise PrecisionBound(f"exponent {exponent} beyond truncation")
        return self.coeffs[i]

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lead + i
        return INF

    def render(self):
        Fv = self.place.residue_field()
        sym = "(1/t)" if self.place.is_infinity else "pi"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.lead + i
            cs = Fv.render(c)
            cs = f"({cs})" if "+" in cs else cs
            if e == 0:
                parts.append(cs)
            elif e == 1:
                parts.append(f"{cs}*{sym}")
            else:
                parts.append(f"{cs}*{sym}^{e}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({sym}^{self.lead + self.trunc + 1})"


def _inverse_mod(K, g, m):
    """Inverse of g modulo m (g coprime to m)."""
    d, a, _ = poly.ext_gcd(K, g, m)
    if d != (1,):
        raise FrobtwistError("element not invertible in quotient")
    return poly.mod(K, a, m)


def local_expand(x, v, N):
    """Expand x at v to truncation order N (N+1 digit coefficients)."""
    if N < 0 or N > _PRECISION_MAX:
        raise PrecisionBound(f"truncation order {N} out of range")
    K = x.K
    if x.is_zero():
        return LocalSeries(v, 0, (0,) * (N + 1), N)
    if v.is_infinity:
        y = x.infinity_chart()
        num, den = y.num, y.den
        pi = (0, 1)
    else:
        num, den = x.num, x.den
        pi = v.pi
    a, num1 = _poly_val(K, num, pi)
    b, den1 = _poly_val(K, den, pi)
    lead = a - b
    pw = (1,)
    for _ in range(N + 1):
        pw = poly.mul(K, pw, pi)
    u = poly.mod(K, poly.mul(K, num1, _inverse_mod(K, den1, pw)), pw)
    digits = []
    Fv = v.residue_field()
    d = 1 if v.is_infinity else poly.deg(v.pi)
    for _ in range(N + 1):
        u, rem = poly.divmod_(K, u, pi)
        if d == 1:
            digits.append(rem[0] if rem else 0)
        else:
            digits.append(Fv.undigits(list(rem) + [0] * (d - len(rem))))
    return LocalSeries(v, lead, tuple(digits), N)


# -- truncated local ring ----------------------------------------------------


class LocalRing:
    """F_q[x]/(pi^M): the completed local ring at finite precision M.

    Elements are polynomial tuples reduced modulo pi^M.  `val` certifies
    valuations below M; M itself means "zero to working precision".
    """

    def __init__(self, K, pi, M):
        self.K = K
        self.pi = pi
        self.M = M
        pw = (1,)
        for _ in range(M):
            pw = poly.mul(K, pw, pi)
        self.pi_M = pw
        self.res_degree = poly.deg(pi)
        self._resf = None

    def reduce(self, f):
        return poly.mod(self.K, f, self.pi_M)

    def from_rat(self, x):
        """Image of a v-integral rational function."""
        K = self.K
        if x.is_zero():
            return ()
        b, den1 = _poly_val(K, x.den, self.pi)
        if b:
            a, num1 = _poly_val(K, x.num, self.pi)
            if a < b:
                raise FrobtwistError("element not integral at the place")
            num = num1
            for _ in range(a - b):
                num = poly.mul(K, num, self.pi)
            return self.reduce(poly.mul(K, num, _inverse_mod(K, den1, self.pi_M)))
        return self.reduce(poly.mul(K, x.num, _inverse_mod(K, x.den, self.pi_M)))

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def add(self, a, b):
        return poly.add(self.K, a, b)

    def sub(self, a, b):
        return poly.sub(self.K, a, b)

    def neg(self, a):
        return poly.neg(self.K, a)

    def mul(self, a, b):
        return self.reduce(poly.mul(self.K, a, b))

    def is_zero(self, a):
        return not a

    def val(self, a):
        """pi-adic valuation, capped at working precision M."""
        if not a:
            return self.M
        n, _ = _poly_val(self.K, a, self.pi)
        return min(n, self.M)

    def is_unit(self, a):
        return bool(a) and self.val(a) == 0

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("not a unit in the local ring")
        return _inverse_mod(self.K, a, self.pi_M)

    def residue(self, a):
        """Residue-field code of an integral element."""
        r = poly.mod(self.K, a, self.pi)
        if self.res_degree == 1:
            return r[0] if r else 0
        if self._resf is None:
            self._resf = FiniteField.extension(self.K, self.pi, symbol="T")
        return self._resf.undigits(list(r) + [0] * (self.res_degree - len(r)))

    def shift(self, a, n):
        """Multiply by pi^n (n may be negative when divisible)."""
        K = self.K
        if n >= 0:
            for _ in range(n):
                a = self.mul(a, self.pi)
            return a
        for _ in range(-n):
            q, r = poly.divmod_(K, a, self.pi)
            if r:
                raise FrobtwistError("inexact division by uniformizer")
            a = q
        return self.reduce(a)


# -- unit-group counting -------------------------------------------------------


def unit_quotient_card(q, m, enum_bound=_ENUM_BOUND):
    """|D_m / D_m^p| for D_m = units of F_q[pi]/(pi^m), p = char(q).

    Returns the closed-form value q^(m - m/p); when the unit group fits in
    the enumeration budget the value is recomputed by brute force and the
    two must agree.
    """
    p = None
    for d in range(2, q + 1):
        if q % d == 0:
            p = d
            break
    k = 0
    qq = q
    while qq % p == 0 and qq > 1:
        qq //= p
        k += 1
    if qq != 1:
        raise FrobtwistError(f"{q} is not a prime power")
    if m <= 0 or m % p:
        raise DivisibilityViolation(f"m = {m} must be a positive multiple of p = {p}")
    formula = q ** (m - m // p)
    if q**m <= enum_bound:
        brute = _unit_quotient_brute(p, k, m)
        if brute != formula:
            raise FrobtwistError(
                f"unit count mismatch: brute force {brute} != closed form {formula}"
            )
    return formula


def _unit_quotient_brute(p, k, m):
    from .poly import make_field

    K = make_field(p, k)
    q = K.q
    tm = (0,) * m + (1,)
    powers = set()
    # enumerate units of F_q[x]/(x^m): nonzero constant digit
    for code in range(q**m):
        digits = []
        c = code
        for _ in range(m):
            digits.append(c % q)
            c //= q
        if digits[0] == 0:
            continue
        u = poly.normalize(digits)
        w = (1,)
        for _ in range(p):
            w = poly.mod(K, poly.mul(K, w, u), tm)
        powers.add(w)
    n_units = (q - 1) * q ** (m - 1)
    return n_units // len(powers)
