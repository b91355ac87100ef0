"""Polynomials over a FiniteField and the field factory.

A polynomial is a tuple of element codes, little-endian, with no trailing
zeros; () is the zero polynomial.  Multiplication packs coefficients into a
single big int (Kronecker substitution) so products run on C-speed integer
arithmetic; small operands fall back to schoolbook.

Factorization is distinct-degree plus equal-degree splitting with a seed
derived from the operand, so runs are reproducible.
"""

import hashlib
import random

from .errors import FrobtwistError, NotPrime, SizeBound, ZeroPolynomial
from .gf import FiniteField, _is_prime

_FIELD_BOUND = 1 << 20
_KRONECKER_MIN = 16


def normalize(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def deg(f):
    return len(f) - 1


def is_zero(f):
    return not f


def constant(c):
    return (c,) if c else ()


X = (0, 1)  # the variable itself


def add(K, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = K.add(out[i], c)
    return normalize(out)


def neg(K, f):
    return tuple(K.neg(c) for c in f)


def sub(K, f, g):
    return add(K, f, neg(K, g))


def scalar_mul(K, c, f):
    if c == 0:
        return ()
    if c == 1:
        return f
    return normalize([K.mul(c, a) for a in f])


def _depth(K):
    d = 0
    while K.base is not None:
        d += 1
        K = K.base
    return d


def _schoolbook(K, f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b == 0:
                continue
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return normalize(out)


def _abs_digits(K, c, ku):
    p = K.p
    out = []
    for _ in range(ku):
        out.append(c % p)
        c //= p
    return out


def _ureduce(K, ud):
    ku = K.rel_degree
    out = list(ud[:ku]) + [0] * max(0, ku - len(ud))
    pf = K.base
    for d in range(len(ud) - 1, ku - 1, -1):
        c = ud[d]
        if c == 0:
            continue
        row = K._red[d - ku]
        for i in range(ku):
            if row[i]:
                out[i] = pf.add(out[i], pf.mul(c, row[i]))
    return K.undigits(out)


def _kronecker(K, f, g):
    p = K.p
    ku = K.degree
    Ku = 2 * ku - 1
    bound = min(len(f), len(g)) * ku * (p - 1) * (p - 1)
    b = max(bound.bit_length() + 1, 8)

    def pack(h):
        n = 0
        shift = 0
        for c in h:
            cc = c
            j = 0
            while cc:
                n |= (cc % p) << (shift + j * b)
                cc //= p
                j += 1
            shift += Ku * b
        return n

    prod = pack(f) * pack(g)
    mask = (1 << b) - 1
    out = []
    for s in range(len(f) + len(g) - 1):
        base_shift = s * Ku * b
        ud = [((prod >> (base_shift + j * b)) & mask) % p for j in range(Ku)]
        if ku == 1:
            out.append(ud[0])
        else:
            out.append(_ureduce(K, ud))
    return normalize(out)


def mul(K, f, g):
    if not f or not g:
        return ()
    if len(f) == 1:
        return scalar_mul(K, f[0], g)
    if len(g) == 1:
        return scalar_mul(K, g[0], f)
    if len(f) + len(g) >= _KRONECKER_MIN and _depth(K) <= 1:
        return _kronecker(K, f, g)
    return _schoolbook(K, f, g)


def shift(f, n):
    """Multiply by t^n."""
    if not f:
        return ()
    return (0,) * n + tuple(f)


def divmod_(K, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return (), f
    inv_lc = K.inv(g[-1])
    rem = list(f)
    qdeg = len(f) - len(g)
    quo = [0] * (qdeg + 1)
    for i in range(qdeg, -1, -1):
        c = rem[i + len(g) - 1]
        if c == 0:
            continue
        c = K.mul(c, inv_lc)
        quo[i] = c
        for j, b in enumerate(g):
            if b:
                rem[i + j] = K.sub(rem[i + j], K.mul(c, b))
    return normalize(quo), normalize(rem[: len(g) - 1])


def mod(K, f, g):
    return divmod_(K, f, g)[1]


def floordiv(K, f, g):
    return divmod_(K, f, g)[0]


def exact_div(K, f, g):
    q, r = divmod_(K, f, g)
    if r:
        raise FrobtwistError("inexact polynomial division")
    return q


def monic(K, f):
    if not f:
        return ()
    return scalar_mul(K, K.inv(f[-1]), f)


def gcd(K, f, g):
    while g:
        f, g = g, mod(K, f, g)
    return monic(K, f)


def ext_gcd(K, f, g):
    """(d, a, b) with a*f + b*g = d, d monic (or zero)."""
    r0, r1 = f, g
    a0, a1 = constant(1), ()
    b0, b1 = (), constant(1)
    while r1:
        q, r = divmod_(K, r0, r1)
        r0, r1 = r1, r
        a0, a1 = a1, sub(K, a0, mul(K, q, a1))
        b0, b1 = b1, sub(K, b0, mul(K, q, b1))
    if r0:
        c = K.inv(r0[-1])
        return scalar_mul(K, c, r0), scalar_mul(K, c, a0), scalar_mul(K, c, b0)
    return (), a0, b0


def pow_mod(K, f, e, m):
    r = constant(1)
    f = mod(K, f, m)
    while e:
        if e & 1:
            r = mod(K, mul(K, r, f), m)
        f = mod(K, mul(K, f, f), m)
        e >>= 1
    return r


def evaluate(K, f, x):
    r = 0
    for c in reversed(f):
        r = K.add(K.mul(r, x), c)
    return r


def derivative(K, f):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        m = i % K.p
        out.append(K.mul(m, c) if m else 0)
    return normalize(out)


def pth_root(K, f):
    """g with g^p = f; requires f supported on exponents divisible by p."""
    p = K.p
    out = []
    for i, c in enumerate(f):
        if i % p == 0:
            out.append(K.pth_root(c))
        elif c != 0:
            raise FrobtwistError("not a p-th power")
    return normalize(out)


def code_of(K, f):
    """Integer code of a polynomial (base-q digits), used for canonical order."""
    n = 0
    for c in reversed(f):
        n = n * K.q + c
    return n


def poly_of_code(K, n):
    out = []
    while n:
        out.append(n % K.q)
        n //= K.q
    return tuple(out)


def _digits_of(n, base, width):
    out = []
    for _ in range(width):
        out.append(n % base)
        n //= base
    return out


def render(K, f, var="t"):
    if not f:
        return "0"
    terms = []
    for i in reversed(range(len(f))):
        c = f[i]
        if c == 0:
            continue
        cs = K.render(c)
        if i == 0:
            terms.append(f"({cs})" if "+" in cs else cs)
            continue
        v = var if i == 1 else f"{var}^{i}"
        if cs == "1":
            terms.append(v)
        elif "+" in cs or "*" in cs:
            terms.append(f"({cs})*{v}")
        else:
            terms.append(f"{cs}*{v}")
    return "+".join(terms)


# -- irreducibility and factorization --------------------------------------


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(K, f):
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    x = X
    xq = pow_mod(K, x, K.q**n, f)
    if xq != mod(K, x, f):
        return False
    for r in _prime_divisors(n):
        h = sub(K, pow_mod(K, x, K.q ** (n // r), f), x)
        if gcd(K, h, f) != constant(1):
            return False
    return True


def irreducibles(K, degree):
    """Monic irreducibles of the given degree, ascending by code."""
    for code in range(K.q**degree):
        cand = tuple(_digits_of(code, K.q, degree) + [1])
        if is_irreducible(K, cand):
            yield cand


def _seed_for(K, f, salt):
    h = hashlib.blake2b(repr((K.p, K.q, K.modulus, f, salt)).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def _random_poly(rng, K, n):
    return normalize([rng.randrange(K.q) for _ in range(n)])


def _edf(K, f, d):
    """Split a squarefree product of degree-d irreducibles."""
    n = deg(f)
    if n == d:
        return [f]
    out = []
    stack = [f]
    salt = 0
    while stack:
        g = stack.pop()
        if deg(g) == d:
            out.append(g)
            continue
        rng = random.Random(_seed_for(K, g, salt))
        salt += 1
        while True:
            r = _random_poly(rng, K, deg(g))
            if deg(r) < 1:
                continue
            if K.p == 2:
                m = K.degree * d
                w = ()
                cur = mod(K, r, g)
                for _ in range(m):
                    w = add(K, w, cur)
                    cur = mod(K, mul(K, cur, cur), g)
            else:
                w = sub(K, pow_mod(K, r, (K.q**d - 1) // 2, g), constant(1))
            h = gcd(K, w, g)
            if constant(1) != h != monic(K, g):
                stack.append(h)
                stack.append(exact_div(K, g, h))
                break
    return out


def _squarefree_irreducibles(K, s):
    """Distinct-degree then equal-degree factorization of squarefree monic s."""
    out = []
    h = X
    d = 0
    while deg(s) > 0:
        d += 1
        if 2 * d > deg(s):
            out.append(s)
            break
        h = pow_mod(K, h, K.q, s)
        g = gcd(K, sub(K, h, X), s)
        if deg(g) > 0:
            out.extend(_edf(K, g, d))
            s = exact_div(K, s, g)
            h = mod(K, h, s)
    return out


def _factor_monic(K, f, mult, out):
    if deg(f) <= 0:
        return
    df = derivative(K, f)
    if is_zero(df):
        _factor_monic(K, pth_root(K, f), mult * K.p, out)
        return
    s = exact_div(K, f, gcd(K, f, df))
    for h in _squarefree_irreducibles(K, s):
        e = 0
        while True:
            q, r = divmod_(K, f, h)
            if r:
                break
            f = q
            e += 1
        out[h] = out.get(h, 0) + mult * e
    _factor_monic(K, f, mult, out)


def factor(K, f):
    """Factor f into monic irreducibles: [(g, multiplicity), ...], sorted.

    The leading coefficient is dropped; the product of g^m times it
    reconstructs f.
    """
    if is_zero(f):
        raise ZeroPolynomial("cannot factor the zero polynomial")
    out = {}
    _factor_monic(K, monic(K, f), 1, out)
    return sorted(out.items(), key=lambda it: (deg(it[0]), code_of(K, it[0])))


# -- the field factory ------------------------------------------------------


def make_field(p, k, bound=_FIELD_BOUND):
    """Canonical F_{p^k}: modulus is the code-least monic irreducible."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise FrobtwistError("extension degree must be >= 1")
    if p**k > bound:
        raise SizeBound(f"p^k = {p**k} exceeds bound {bound}")
    prime = FiniteField(p)
    if k == 1:
        return prime
    for f in irreducibles(prime, k):
        return FiniteField.extension(prime, f, symbol="u")
    raise FrobtwistError("unreachable: no irreducible modulus found")


def residue_extension(K, pi, symbol="t"):
    """The residue field F_q[t]/(pi) as an extension of K, for deg(pi) >= 2."""
    return FiniteField.extension(K, pi, symbol=symbol)
