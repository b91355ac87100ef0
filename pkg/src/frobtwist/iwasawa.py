"""Desk-scale Iwasawa-module laboratory.

Elementary modules over the one- and two-variable Iwasawa algebras are given
by their p-power exponents and by non-p generator polynomials held at p-adic
working precision B.  Layer-quotient sizes are counted exactly (Smith normal
form over Z/p^nu), mu-exponents are recovered from first differences of the
counts, and two-variable modules specialize along a chosen direction with
the non-p generators re-prepared as distinguished polynomials.
"""

import itertools
import math
from dataclasses import dataclass

from . import hensel
from .errors import (
    BadDirection,
    EnumerationBound,
    FrobtwistError,
    PrecisionBound,
)

DEFAULT_PRECISION = 8
_ENUM_BUDGET = 1 << 20


class PAdicRing:
    """Z/p^B with p-adic valuation; the coefficient ring for preparations."""

    def __init__(self, p, B):
        self.p = p
        self.B = B
        self.n = p**B
        self.M = B  # nilpotency exponent of the maximal ideal, for hensel

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_zero(self, a):
        return a % self.n == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        return pow(a, -1, self.n)

    def val(self, a):
        a %= self.n
        if a == 0:
            return self.B
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v


def _norm_poly1(coeffs, mod):
    out = [c % mod for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _norm_poly2(rows, mod):
    # rows[i][j] = coefficient of x^i y^j
    out = {}
    for (i, j), c in rows.items():
        c %= mod
        if c:
            out[(i, j)] = c
    return out


@dataclass(frozen=True)
class QuotientIdeal:
    """(p^nu, (x+1)^(p^n) - 1) in the one-variable algebra."""

    nu: int
    n: int

    def omega(self, p, mod):
        """(x+1)^(p^n) - 1 as a coefficient tuple modulo `mod`."""
        coeffs = [0] * (p**self.n + 1)
        # binomials via Pascal row, reduced modulo `mod`
        row = [1]
        for _ in range(p**self.n):
            row = [1] + [(row[k] + row[k + 1]) % mod for k in range(len(row) - 1)] + [1]
        for k, c in enumerate(row):
            coeffs[k] = c % mod
        coeffs[0] = (coeffs[0] - 1) % mod
        return tuple(coeffs)


class LambdaModule:
    """Elementary module over Z_p[[x]] (d=1) or Z_p[[x,y]] (d=2).

    Non-p generators are polynomials with at least one unit coefficient,
    held modulo p^B; the p-part is the multiset of exponents.
    """

    def __init__(self, p, d, exponents, generators=(), precision=DEFAULT_PRECISION):
        if d not in (1, 2):
            raise FrobtwistError("variable count must be 1 or 2")
        if any(a < 1 for a in exponents):
            raise FrobtwistError("p-part exponents must be positive")
        self.p = p
        self.d = d
        self.B = precision
        self.exponents = tuple(sorted(exponents, reverse=True))
        mod = p**precision
        gens = []
        for g in generators:
            if d == 1:
                g = _norm_poly1(g, mod)
                unit = any(c % p for c in g)
            else:
                g = _norm_poly2(dict(g), mod)
                unit = any(c % p for c in g.values())
            if not g or not unit:
                raise FrobtwistError("non-p generator must have a p-adic unit coefficient")
            gens.append(g)
        self.generators = tuple(gens)

    @property
    def mu_rank(self):
        return len(self.exponents)

    def p_part_only(self):
        return LambdaModule(self.p, self.d, self.exponents, (), self.B)

    def describe(self):
        return (
            f"Lambda^{self.d} module: p={self.p}, exponents={list(self.exponents)}, "
            f"{len(self.generators)} non-p generator(s), precision {self.B}"
        )

    def __repr__(self):
        return f"LambdaModule({self.describe()})"


# -- exact layer counting --------------------------------------------------------


def _omega_poly(p, n, mod):
    return QuotientIdeal(1, n).omega(p, mod)


def _polmul_mod(f, g, mod):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % mod
    return out


def _polmod_monic(f, g, mod):
    f = list(f)
    d = len(g) - 1
    for i in range(len(f) - 1, d - 1, -1):
        c = f[i]
        if not c:
            continue
        f[i] = 0
        for j in range(d):
            f[i - d + j] = (f[i - d + j] - c * g[j]) % mod
    out = f[:d]
    while out and not out[-1]:
        out.pop()
    return out


def _eta_cokernel_log(p, nu, n, eta):
    """log_p |(Z/p^nu)[x] / (eta, (x+1)^(p^n) - 1)| by Smith normal form."""
    mod = p**nu
    rank = p**n
    omega = list(_omega_poly(p, n, mod))
    eta = [c % mod for c in eta]
    # multiplication-by-eta matrix on the basis 1, x, ..., x^(rank-1)
    cols = []
    xk = [1]
    for _ in range(rank):
        col = _polmod_monic(_polmul_mod(xk, eta, mod), omega, mod)
        col = col + [0] * (rank - len(col))
        cols.append(col)
        xk = _polmod_monic([0] + xk, omega, mod)
    mat = [[cols[j][i] % mod for j in range(rank)] for i in range(rank)]
    return _snf_cokernel_log(mat, p, nu)


def _snf_cokernel_log(mat, p, nu):
    """Sum of min(nu, v_p(d_i)) over the elementary divisors of mat (Z/p^nu)."""
    mod = p**nu

    def vp(a):
        a %= mod
        if a == 0:
            return nu
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return v

    m = [row[:] for row in mat]
    size = len(m)
    total = 0
    for k in range(size):
        # pivot of least valuation in the trailing block
        best = (nu + 1, None)
        for i in range(k, size):
            for j in range(k, size):
                v = vp(m[i][j])
                if v < best[0]:
                    best = (v, (i, j))
                    if v == 0:
                        break
            if best[0] == 0:
                break
        v, pos = best
        if pos is None or v >= nu:
            total += nu * (size - k)
            return total
        i0, j0 = pos
        m[k], m[i0] = m[i0], m[k]
        for row in m:
            row[k], row[j0] = row[j0], row[k]
        piv = m[k][k]
        unit = piv // p**v
        uinv = pow(unit, -1, mod)
        for i in range(k + 1, size):
            c = (m[i][k] * uinv) % mod
            if c % p**v:
                # valuation of pivot is minimal, so division is exact
                raise FrobtwistError("internal: pivot valuation not minimal")
            f = c // p**v
            for j in range(k, size):
                m[i][j] = (m[i][j] - f * m[k][j]) % mod
        for j in range(k + 1, size):
            c = (m[k][j] * uinv) % mod
            f = c // p**v
            for i in range(k, size):
                m[i][j] = (m[i][j] - f * m[i][k]) % mod
        total += v
    return total


def quotient_log_size(Z, nu, n):
    """log_p of the layer quotient |Z / (p^nu, (x+1)^(p^n) - 1) Z|, exact."""
    if Z.d != 1:
        raise FrobtwistError("layer counting is defined for one-variable modules")
    if nu < 1:
        raise FrobtwistError("nu must be positive")
    if nu > Z.B:
        raise PrecisionBound(f"nu = {nu} exceeds working precision {Z.B}")
    p = Z.p
    total = sum(min(a, nu) for a in Z.exponents) * p**n
    for eta in Z.generators:
        total += _eta_cokernel_log(p, nu, n, list(eta))
    return total


def quotient_log_size_bruteforce(Z, nu, n, budget=_ENUM_BUDGET):
    """Oracle path: enumerate the finite ring and the generated submodule."""
    if Z.d != 1:
        raise FrobtwistError("layer counting is defined for one-variable modules")
    p = Z.p
    mod = p**nu
    rank = p**n
    total = 0
    for a in Z.exponents:
        # Lambda/(p^a) / (p^nu, omega_n) = (Z/p^min(a,nu))[x]/(omega_n)
        total += min(a, nu) * rank
    for eta in Z.generators:
        card = mod**rank
        if card > budget:
            raise EnumerationBound(f"ring of size {card} exceeds the budget")
        omega = list(_omega_poly(p, n, mod))
        image = set()
        for coeffs in itertools.product(range(mod), repeat=rank):
            prod = _polmod_monic(_polmul_mod(list(coeffs), list(eta), mod), omega, mod)
            image.add(tuple(prod + [0] * (rank - len(prod))))
        quot = card // len(image)
        lg = 0
        while quot > 1:
            if quot % p:
                raise FrobtwistError("internal: cokernel size not a p-power")
            quot //= p
            lg += 1
        total += lg
    return total


# -- mu recovery ------------------------------------------------------------------


def recover_mu(Z, n_max=None):
    """Recover the exponent multiset from layer counts of the p-part.

    s(nu) = sum_i min(alpha_i, nu) is read off as the p^n coefficient of the
    p-part layer counts; first differences give #{i : alpha_i >= nu}.
    """
    if n_max is None:
        n_max = max(Z.exponents, default=0) + 1
    ppart = Z.p_part_only() if Z.d == 1 else LambdaModule(Z.p, 1, Z.exponents, (), Z.B)
    p = Z.p

    def s(nu):
        if nu == 0:
            return 0
        # exact p-part contribution: (count at n=1 minus count at n=0)/(p-1)
        hi = quotient_log_size(ppart, min(nu, ppart.B), 1)
        lo = quotient_log_size(ppart, min(nu, ppart.B), 0)
        diff = hi - lo
        if diff % (p - 1):
            raise FrobtwistError("internal: p-part layer counts inconsistent")
        return diff // (p - 1)

    counts = []
    nu = 1
    while nu <= n_max + 1:
        c = s(nu) - s(nu - 1)
        if c == 0:
            break
        counts.append(c)
        nu += 1
    else:
        if counts and counts[-1] != 0:
            raise FrobtwistError("n_max too small to exhaust the exponents")
    out = []
    for v in range(len(counts), 0, -1):
        here = counts[v - 1] - (counts[v] if v < len(counts) else 0)
        out.extend([v] * here)
    return tuple(sorted(out, reverse=True))


# -- specialization ----------------------------------------------------------------


def _binom_pow(mod, e, cap=None):
    """(1+T)^e as a coefficient list modulo `mod`, e >= 0 (full polynomial)."""
    out = [1]
    base = [1, 1]
    while e:
        if e & 1:
            out = _polmul_mod(out, base, mod)
        e >>= 1
        if e:
            base = _polmul_mod(base, base, mod)
    return out


def specialize(Z, psi):
    """Specialize a two-variable elementary module along the direction psi.

    psi = (c1, c2) with gcd(c1, c2, p) = 1 names the killed direction
    sigma1^c1 sigma2^c2; the surviving variable maps are
    x -> (1+T)^c2 - 1 and y -> (1+T)^(-c1) - 1.  The p-part is carried over
    unchanged; each non-p generator maps to its distinguished polynomial.
    Degenerate or p-divisible images raise BadDirection.
    """
    if Z.d != 2:
        raise FrobtwistError("specialization applies to two-variable modules")
    c1, c2 = psi
    if math.gcd(math.gcd(abs(c1), abs(c2)), Z.p) != 1 or (c1 == 0 and c2 == 0):
        raise BadDirection("direction must be primitive modulo p")
    p, B = Z.p, Z.B
    mod = p**B
    A = PAdicRing(p, B)

    new_gens = []
    for eta in Z.generators:
        dx = max((e[0] for e in eta), default=0)
        dy = max((e[1] for e in eta), default=0)
        # clear denominators: multiply by (1+T)^S with
        # S = max(0,-c2)*dx + max(0,c1)*dy
        S = max(0, -c2) * dx + max(0, c1) * dy
        h = [0]
        xb_pos = _binom_pow(mod, abs(c2))
        yb_pos = _binom_pow(mod, abs(c1))
        # precompute ((1+T)^{|c2|} - 1) and ((1+T)^{|c1|} - 1)
        xm = list(xb_pos)
        xm[0] = (xm[0] - 1) % mod
        ym = list(yb_pos)
        ym[0] = (ym[0] - 1) % mod
        for (i, j), c in sorted(eta.items()):
            # x^i -> ((1+T)^{c2} - 1)^i; negative exponents cleared by S
            term = [c % mod]
            if i:
                if c2 >= 0:
                    base = xm
                else:
                    # (1+T)^{c2} - 1 = -((1+T)^{|c2|} - 1) / (1+T)^{|c2|}
                    base = [(-u) % mod for u in xm]
                for _ in range(i):
                    term = _polmul_mod(term, base, mod)
            if j:
                if c1 <= 0:
                    base = ym
                else:
                    base = [(-u) % mod for u in ym]
                for _ in range(j):
                    term = _polmul_mod(term, base, mod)
            # multiply by (1+T)^(S - cleared part of this term)
            rem = S - max(0, -c2) * i - max(0, c1) * j
            if rem:
                term = _polmul_mod(term, _binom_pow(mod, rem), mod)
            h = [
                (a + b) % mod
                for a, b in itertools.zip_longest(h, term, fillvalue=0)
            ]
        while h and not h[-1]:
            h.pop()
        if not h:
            raise BadDirection("generator maps to zero along this direction")
        d0 = None
        for k, c in enumerate(h):
            if c % p:
                d0 = k
                break
        if d0 is None:
            raise BadDirection("generator image is divisible by p along this direction")
        # series of the image: h * (1+T)^(-S), then Weierstrass preparation
        tcap = d0 + 4
        hs = [h[k] if k < len(h) else 0 for k in range(tcap + 1)]
        if S:
            invS = hensel.series_inverse(A, _binom_pow(mod, S)[: tcap + 1], tcap + 1)
            hs = hensel.pmul(A, hs, invS, tcap)
        P, _ = hensel.distinguish(A, hs, d0, tcap)
        new_gens.append(tuple(int(c) for c in P))
    return LambdaModule(p, 1, Z.exponents, new_gens, B)
