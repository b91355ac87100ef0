"""Rational functions over F_q(t), normalized num/den tuples with operators."""

from . import poly
from .errors import FrobtwistError


class Rat:
    """f/g with g monic, gcd(f, g) = 1.  Immutable and hashable."""

    __slots__ = ("K", "num", "den")

    def __init__(self, K, num, den=(1,), _normalized=False):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            num = poly.normalize(num)
            den = poly.normalize(den)
            if den != (1,):
                if not num:
                    den = (1,)
                else:
                    g = poly.gcd(K, num, den)
                    if poly.deg(g) > 0:
                        num = poly.exact_div(K, num, g)
                        den = poly.exact_div(K, den, g)
                    lc = den[-1]
                    if lc != 1:
                        c = K.inv(lc)
                        num = poly.scalar_mul(K, c, num)
                        den = poly.scalar_mul(K, c, den)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("Rat is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def of_poly(cls, K, f):
        return cls(K, poly.normalize(f), (1,), _normalized=False)

    @classmethod
    def const(cls, K, c):
        return cls(K, (c,) if c else (), (1,), _normalized=True)

    @classmethod
    def t(cls, K):
        return cls(K, (0, 1), (1,), _normalized=True)

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_poly(self):
        return self.den == (1,)

    def is_constant(self):
        return self.den == (1,) and len(self.num) <= 1

    def constant_value(self):
        if not self.is_constant():
            raise FrobtwistError("not a constant")
        return self.num[0] if self.num else 0

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        K = self.K
        if self.den == (1,) and other.den == (1,):
            return Rat(K, poly.add(K, self.num, other.num), (1,), _normalized=True)
        n = poly.add(
            K,
            poly.mul(K, self.num, other.den),
            poly.mul(K, other.num, self.den),
        )
        return Rat(K, n, poly.mul(K, self.den, other.den))

    def __neg__(self):
        return Rat(self.K, poly.neg(self.K, self.num), self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.K
        if self.den == (1,) and other.den == (1,):
            return Rat(K, poly.mul(K, self.num, other.num), (1,), _normalized=True)
        return Rat(
            K,
            poly.mul(K, self.num, other.num),
            poly.mul(K, self.den, other.den),
        )

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        K = self.K
        return Rat(
            K,
            poly.mul(K, self.num, other.den),
            poly.mul(K, self.den, other.num),
        )

    def inverse(self):
        return Rat.const(self.K, 1) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = Rat.const(self.K, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def frob(self):
        """Coefficientwise-and-argument p-th power: x -> x^p as a function."""
        return self ** self.K.p

    def __eq__(self, other):
        return (
            isinstance(other, Rat)
            and self.K == other.K
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    # -- charts ---------------------------------------------------------------

    def infinity_chart(self):
        """The same function written in s = 1/t (an involution)."""
        K = self.K
        if not self.num:
            return self
        rn = poly.normalize(tuple(reversed(self.num)))
        rd = poly.normalize(tuple(reversed(self.den)))
        e = (len(self.den) - 1) - (len(self.num) - 1)
        if e >= 0:
            return Rat(K, poly.shift(rn, e), rd)
        return Rat(K, rn, poly.shift(rd, -e))

    def render(self, var="t"):
        n = poly.render(self.K, self.num, var)
        if self.den == (1,):
            return n
        d = poly.render(self.K, self.den, var)
        np = f"({n})" if "+" in n else n
        dp = f"({d})" if ("+" in d or "*" in d or "^" in d) else d
        return f"{np}/{dp}"

    def __repr__(self):
        return f"Rat({self.render()})"
