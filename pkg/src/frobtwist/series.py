"""Truncated multivariate power series with rational-function coefficients.

A series is a dict {exponent tuple: Rat}, all exponents of fixed arity with
total degree <= N; zero coefficients are never stored.  Arithmetic tracks
the truncation bound of the ring, never reading past it.
"""

from .ratfunc import Rat


class SeriesRing:
    """Power series in `nvars` variables over F_q(t), modulo total degree N+1."""

    def __init__(self, K, nvars, N):
        self.K = K
        self.nvars = nvars
        self.N = N
        self._zero_exp = (0,) * nvars

    def zero(self):
        return {}

    def const(self, c):
        if c.is_zero():
            return {}
        return {self._zero_exp: c}

    def one(self):
        return self.const(Rat.const(self.K, 1))

    def var(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return {tuple(e): Rat.const(self.K, 1)}

    def add(self, A, B):
        out = dict(A)
        for e, c in B.items():
            cur = out.get(e)
            if cur is None:
                out[e] = c
            else:
                s = cur + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return out

    def neg(self, A):
        return {e: -c for e, c in A.items()}

    def sub(self, A, B):
        return self.add(A, self.neg(B))

    def scalar(self, c, A):
        if c.is_zero():
            return {}
        return {e: v for e, v in ((e, c * v) for e, v in A.items()) if not v.is_zero()}

    def mul(self, A, B):
        N = self.N
        if not A or not B:
            return {}
        by_deg = {}
        for e, c in B.items():
            by_deg.setdefault(sum(e), []).append((e, c))
        degs = sorted(by_deg)
        out = {}
        for ea, ca in A.items():
            da = sum(ea)
            for d in degs:
                if da + d > N:
                    break
                for eb, cb in by_deg[d]:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    c = ca * cb
                    cur = out.get(e)
                    if cur is None:
                        out[e] = c
                    else:
                        s = cur + c
                        if s.is_zero():
                            del out[e]
                        else:
                            out[e] = s
        return out

    def pow_(self, A, n):
        r = self.one()
        b = A
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b) if n > 1 else b
            n >>= 1
        return r

    def powers(self, A, n_max):
        """[A^0, A^1, ..., A^n_max]."""
        out = [self.one()]
        for _ in range(n_max):
            out.append(self.mul(out[-1], A))
        return out

    def inverse(self, A):
        """Inverse of a series with invertible constant term."""
        c0 = A.get(self._zero_exp)
        if c0 is None or c0.is_zero():
            raise ZeroDivisionError("series has no invertible constant term")
        c0i = c0.inverse()
        rest = {e: c for e, c in A.items() if e != self._zero_exp}
        # A = c0 (1 + h);  A^-1 = c0^-1 sum (-h)^i
        h = self.scalar(c0i, rest)
        term = self.one()
        acc = self.one()
        for _ in range(self.N):
            term = self.neg(self.mul(term, h))
            if not term:
                break
            acc = self.add(acc, term)
        return self.scalar(c0i, acc)

    def coeff(self, A, e):
        c = A.get(tuple(e))
        from .ratfunc import Rat as _R

        return c if c is not None else _R.const(self.K, 0)

    def set_var_zero(self, A, i):
        """Substitute 0 for variable i (result stays in this ring)."""
        return {e: c for e, c in A.items() if e[i] == 0}

    def rename(self, A, perm):
        """Reindex exponents of an A from this ring into arity len(perm):
        new_exp[perm[k]] = old_exp[k]."""
        out = {}
        for e, c in A.items():
            ne = [0] * (max(perm) + 1)
            for k, x in enumerate(e):
                ne[perm[k]] = x
            out[tuple(ne)] = c
        return out


def eval_series(K, A, args):
    """Evaluate a series dict at concrete Rat arguments (finite sum)."""
    total = Rat.const(K, 0)
    for e, c in A.items():
        term = c
        for x, k in zip(args, e):
            if k:
                term = term * x**k
        total = total + term
    return total
