"""Hensel factorization of truncated power series over a truncated local ring.

The ring object A must provide zero/one/add/sub/mul/neg/is_zero/is_unit/inv
and val; its maximal ideal must be nilpotent (work modulo pi^M or p^B), so
the lifting loop terminates with an exactly zero defect.

Series live in A[T]/(T^(tcap+1)) as coefficient lists.  `distinguish`
splits h with Weierstrass degree d into (P, U): P a distinguished monic
polynomial of degree d and U a unit, with h = P*U holding exactly in the
truncated ring.
"""

from .errors import FrobtwistError, PrecisionBound


def _trim(A, f):
    while f and A.is_zero(f[-1]):
        f.pop()
    return f


def padd(A, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else A.zero()
        b = g[i] if i < len(g) else A.zero()
        out.append(A.add(a, b))
    return _trim(A, out)


def psub(A, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else A.zero()
        b = g[i] if i < len(g) else A.zero()
        out.append(A.sub(a, b))
    return _trim(A, out)


def pmul(A, f, g, tcap):
    if not f or not g:
        return []
    out = [A.zero()] * min(len(f) + len(g) - 1, tcap + 1)
    for i, a in enumerate(f):
        if A.is_zero(a):
            continue
        if i > tcap:
            break
        for j, b in enumerate(g):
            if i + j > tcap:
                break
            if A.is_zero(b):
                continue
            out[i + j] = A.add(out[i + j], A.mul(a, b))
    return _trim(A, out)


def pdivmod_monic(A, f, g):
    """Division by a monic polynomial; exact over any commutative ring."""
    d = len(g) - 1
    if len(f) < len(g):
        return [], list(f)
    rem = list(f)
    quo = [A.zero()] * (len(f) - d)
    for i in range(len(f) - d - 1, -1, -1):
        c = rem[i + d]
        if A.is_zero(c):
            continue
        quo[i] = c
        for j in range(d + 1):
            rem[i + j] = A.sub(rem[i + j], A.mul(c, g[j]))
    return _trim(A, quo), _trim(A, rem[:d])


def series_inverse(A, g, dcap):
    """Inverse of g (unit constant term) modulo T^(dcap)."""
    c0 = g[0]
    if not A.is_unit(c0):
        raise FrobtwistError("series constant term is not a unit")
    inv0 = A.inv(c0)
    out = [inv0]
    for n in range(1, dcap):
        acc = A.zero()
        for k in range(1, min(n, len(g) - 1) + 1):
            acc = A.add(acc, A.mul(g[k], out[n - k]))
        out.append(A.neg(A.mul(inv0, acc)))
    return _trim(A, out)


def distinguish(A, h, d, tcap, max_iter=None):
    """Split h = P*U in A[T]/(T^(tcap+1)): P distinguished monic of degree d.

    Requires val(h_i) >= 1 for i < d and h_d a unit (Weierstrass degree d).
    Returns (P, U); the product identity is re-checked before returning.
    """
    h = [c for c in h[: tcap + 1]]
    _trim(A, h)
    if len(h) <= d or not A.is_unit(h[d]):
        raise PrecisionBound("series does not have the requested Weierstrass degree")
    for i in range(d):
        c = h[i] if i < len(h) else A.zero()
        if not A.is_zero(c) and A.is_unit(c):
            raise FrobtwistError("lower coefficient is a unit: wrong Weierstrass degree")

    f = [A.zero()] * d + [A.one()]  # T^d
    g = h[d:]  # unit cofactor to first order

    # exact Bezout in the truncated ring: a*f + b*g = 1
    b = series_inverse(A, g, d)
    bg = pmul(A, b, g, tcap)
    # bg = 1 + T^d * c
    c = bg[d:] if len(bg) > d else []
    a = [A.neg(x) for x in c]

    if max_iter is None:
        max_iter = 4 * (tcap + 4)
    for _ in range(max_iter):
        e = psub(A, h, pmul(A, f, g, tcap))
        if not e:
            break
        be = pmul(A, b, e, tcap)
        q, r = pdivmod_monic(A, be, f)
        df = r
        dg = padd(A, pmul(A, a, e, tcap), pmul(A, q, g, tcap))
        f = padd(A, f, df)
        g = padd(A, g, dg)
    else:
        raise PrecisionBound("Hensel lifting did not converge at this precision")

    if psub(A, h, pmul(A, f, g, tcap)):
        raise FrobtwistError("internal: lifted factorization fails to multiply back")
    if len(f) != d + 1 or not A.is_unit(f[d]):
        raise FrobtwistError("internal: lifted factor is not monic of the right degree")
    P = [f[i] if i < len(f) else A.zero() for i in range(d + 1)]
    # normalize the monic leading coefficient exactly to 1
    lead = P[d]
    if not A.is_zero(A.sub(lead, A.one())):
        li = A.inv(lead)
        P = [A.mul(li, c) for c in P]
        g = [A.mul(lead, c) for c in g]
    return P, g
