"""Finite fields F_{p^k} with elements coded as plain ints.

An element of F_{p^k} is the int  sum c_i * B^i  where B is the cardinality
of the base field and (c_0, ..., c_{k-1}) are the coordinates with respect
to the power basis of the defining modulus.  Prime fields use B = p and the
identity coding.  All field objects are immutable and safe to share.

Multiplication switches to exp/log tables once the field is small enough
for them to pay off; the digit-vector path stays available for anything
larger (bounded by the factory in poly.make_field).
"""

from .errors import FrobtwistError

_TABLE_BOUND = 1 << 16


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FiniteField:
    """A finite field, either F_p or an extension of another FiniteField."""

    def __init__(self, p):
        if not _is_prime(p):
            raise FrobtwistError(f"{p} is not prime")
        self.p = p
        self.q = p
        self.degree = 1
        self.base = None
        self.rel_degree = 1
        self.modulus = None
        self.symbol = "u"
        self._exp = None
        self._log = None

    @classmethod
    def extension(cls, base, modulus, symbol="u"):
        """Extend `base` by a monic irreducible `modulus` (tuple of base codes).

        Irreducibility is the caller's responsibility (poly.is_irreducible);
        this constructor only checks shape.
        """
        k = len(modulus) - 1
        if k < 1 or modulus[-1] != 1:
            raise FrobtwistError("modulus must be monic of degree >= 1")
        self = cls.__new__(cls)
        self.p = base.p
        self.q = base.q ** k
        self.degree = base.degree * k
        self.base = base
        self.rel_degree = k
        self.modulus = tuple(modulus)
        self.symbol = symbol
        self._exp = None
        self._log = None
        # reduction rows for x^k .. x^(2k-2) modulo the modulus
        self._red = self._reduction_rows()
        return self

    def _reduction_rows(self):
        base, k, m = self.base, self.rel_degree, self.modulus
        rows = []
        # x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        cur = [base.neg(c) for c in m[:k]]
        rows.append(tuple(cur))
        for _ in range(k - 2):
            nxt = [base.zero()] * k
            carry = cur[k - 1]
            for i in range(k - 1):
                nxt[i + 1] = cur[i]
            if carry != 0:
                for i in range(k):
                    nxt[i] = base.add(nxt[i], base.mul(carry, rows[0][i]))
            rows.append(tuple(nxt))
            cur = nxt
        return rows

    # -- element coding ---------------------------------------------------

    def zero(self):
        return 0

    def one(self):
        return 1

    def digits(self, a):
        """Coordinates of `a` over the base field, length rel_degree."""
        B = self.base.q if self.base else self.p
        out = []
        for _ in range(self.rel_degree):
            out.append(a % B)
            a //= B
        return out

    def undigits(self, ds):
        B = self.base.q if self.base else self.p
        a = 0
        for c in reversed(ds):
            a = a * B + c
        return a

    def elements(self):
        return range(self.q)

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        base = self.base
        B = base.q
        out = 0
        shift = 1
        while a or b:
            out += base.add(a % B, b % B) * shift
            a //= B
            b //= B
            shift *= B
        return out

    def neg(self, a):
        if self.base is None:
            return (-a) % self.p
        base = self.base
        B = base.q
        out = 0
        shift = 1
        while a:
            out += base.neg(a % B) * shift
            a //= B
            shift *= B
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _mul_raw(self, a, b):
        base, k = self.base, self.rel_degree
        da, db = self.digits(a), self.digits(b)
        prod = [base.zero()] * (2 * k - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                if y == 0:
                    continue
                prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c == 0:
                continue
            prod[d] = base.zero()
            row = self._red[d - k]
            for i in range(k):
                if row[i] != 0:
                    prod[i] = base.add(prod[i], base.mul(c, row[i]))
        return self.undigits(prod[:k])

    def mul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is None and self.q <= _TABLE_BOUND:
            self._build_tables()
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_raw(a, b)

    def pow_(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0 if e > 0 else 1
        if e < 0:
            a = self.inv(a)
            e = -e
        if self.q > 2:
            e %= self.q - 1
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        if self._exp is None and self.q <= _TABLE_BOUND:
            self._build_tables()
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow_(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a):
        """x -> x^p, the absolute Frobenius."""
        return self.pow_(a, self.p)

    def pth_root(self, a):
        """The unique p-th root (Frobenius is a bijection)."""
        return self.pow_(a, self.q // self.p)

    def is_square(self, a):
        if self.p == 2 or a == 0:
            return True
        return self.pow_(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        """A square root of `a`, or None when `a` is a non-residue (odd q)."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow_(a, self.q // 2)
        if not self.is_square(a):
            return None
        if self.q % 4 == 3:
            return self.pow_(a, (self.q + 1) // 4)
        for x in range(1, self.q):
            if self.mul(x, x) == a:
                return x
        return None

    def _build_tables(self):
        g = self.generator()
        exp = [1] * (self.q - 1)
        log = [0] * self.q
        cur = 1
        for i in range(self.q - 1):
            exp[i] = cur
            log[cur] = i
            cur = self._mul_raw(cur, g)
        self._exp = exp
        self._log = log

    def generator(self):
        """Least code generating the multiplicative group."""
        n = self.q - 1
        fac = []
        m, d = n, 2
        while d * d <= m:
            if m % d == 0:
                fac.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            fac.append(m)
        mulf = self._mul_raw if self.base is not None else (lambda a, b: (a * b) % self.p)

        def powf(a, e):
            r = 1
            while e:
                if e & 1:
                    r = mulf(r, a)
                a = mulf(a, a)
                e >>= 1
            return r

        for g in range(2, self.q):
            if all(powf(g, n // r) != 1 for r in fac):
                return g
        return 1

    # -- text -------------------------------------------------------------

    def render(self, a):
        """Canonical text: base-p digit string for prime fields, else a
        polynomial in the generator symbol."""
        if self.base is None:
            return str(a % self.p)
        terms = []
        ds = self.digits(a)
        for i in reversed(range(self.rel_degree)):
            c = ds[i]
            if c == 0:
                continue
            cs = self.base.render(c)
            if i == 0:
                terms.append(cs)
            else:
                v = self.symbol if i == 1 else f"{self.symbol}^{i}"
                if cs == "1":
                    terms.append(v)
                elif "+" in cs or "*" in cs:
                    terms.append(f"({cs})*{v}")
                else:
                    terms.append(f"{cs}*{v}")
        return "+".join(terms) if terms else "0"

    def describe(self):
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.q})=GF({self.base.q})[{self.symbol}]/({self.render_modulus()})"

    def render_modulus(self):
        k = self.rel_degree
        parts = [f"{self.symbol}^{k}" if k > 1 else self.symbol]
        base = self.base
        for i in reversed(range(k)):
            c = self.modulus[i]
            if c == 0:
                continue
            cs = base.render(c)
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append(self.symbol if cs == "1" else f"{cs}*{self.symbol}")
            else:
                parts.append(f"{self.symbol}^{i}" if cs == "1" else f"{cs}*{self.symbol}^{i}")
        return "+".join(parts)

    def __repr__(self):
        return self.describe()

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.q == other.q
            and self.modulus == other.modulus
            and (self.base == other.base)
        )

    def __hash__(self):
        return hash((self.p, self.q, self.modulus))
