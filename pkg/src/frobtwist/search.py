"""Exhaustive search for non-isotrivial, everywhere-semistable ordinary curves.

Candidates are enumerated by level (maximum coefficient degree), then
lexicographically by coefficient codes, so results are reproducible.  Cheap
necessary conditions go first: the generic-fiber ordinarity test, a nonzero
discriminant, a nonconstant j, and a degree condition at infinity; survivors
get the full reduction survey.
"""

from dataclasses import dataclass

from . import poly, tate
from .errors import IncompleteScan, NonOrdinaryCurve, Singular
from .weierstrass import WeierstrassModel

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class SearchResult:
    curves: tuple
    examined: int
    budget_exhausted: bool
    degree_bound: int


def _disc_c4_polys(K, a1, a2, a3, a4, a6):
    pm, pa, ps = poly.mul, poly.add, poly.scalar_mul

    def cm(n, f):
        return ps(K, n % K.p, f)

    b2 = pa(K, pm(K, a1, a1), cm(4, a2))
    b4 = pa(K, cm(2, a4), pm(K, a1, a3))
    b6 = pa(K, pm(K, a3, a3), cm(4, a6))
    t1 = pa(K, pm(K, pm(K, a1, a1), a6), cm(4, pm(K, a2, a6)))
    t2 = pa(K, pm(K, a2, pm(K, a3, a3)), poly.neg(K, pm(K, a1, pm(K, a3, a4))))
    b8 = pa(K, pa(K, t1, t2), poly.neg(K, pm(K, a4, a4)))
    c4 = pa(K, pm(K, b2, b2), cm(-24, b4))
    disc = pa(
        K,
        pa(K, cm(-1, pm(K, pm(K, b2, b2), b8)), cm(-8, pm(K, b4, pm(K, b4, b4)))),
        pa(K, cm(-27, pm(K, b6, b6)), cm(9, pm(K, b2, pm(K, b4, b6)))),
    )
    return disc, c4, b2


def _infinity_degree_condition(deg_disc, deg_c4):
    """Necessary for everywhere-semistable: at infinity the curve is either
    multiplicative (ord j < 0, forcing 4 | deg c4) or good (12 | deg disc)."""
    if deg_c4 is not None and 3 * deg_c4 > deg_disc:
        return deg_c4 % 4 == 0
    return deg_disc % 12 == 0


def _j_is_constant(K, disc, c4):
    if not c4:
        return True  # j = 0
    c43 = poly.mul(K, c4, poly.mul(K, c4, c4))
    if poly.deg(c43) != poly.deg(disc):
        return False
    # proportional over the constants?
    lc = K.div(c43[-1], disc[-1])
    return c43 == poly.scalar_mul(K, lc, disc)


def find_semistable_ordinary_examples(
    q,
    p,
    degree_bound,
    limit,
    budget=DEFAULT_BUDGET,
    scan_bound=tate.DEFAULT_SCAN_BOUND,
):
    """Search coefficient polynomials of degree <= degree_bound, in
    deterministic order, for guard-passing non-isotrivial curves."""
    k = 0
    qq = q
    while qq % p == 0 and qq > 1:
        qq //= p
        k += 1
    if qq != 1:
        raise NonOrdinaryCurve(f"{q} is not a power of {p}")
    K = poly.make_field(p, k)

    out = []
    examined = 0
    exhausted = False
    for level in range(degree_bound + 1):
        if exhausted or len(out) >= limit:
            break
        hi = K.q ** (level + 1)
        lo = K.q**level if level else 0
        codes = [poly.poly_of_code(K, c) for c in range(hi)]
        for c1 in range(hi):
            if exhausted or len(out) >= limit:
                break
            a1 = codes[c1]
            if p == 2 and not a1:
                continue  # not ordinary in characteristic 2
            for c2 in range(hi):
                if exhausted or len(out) >= limit:
                    break
                a2 = codes[c2]
                if p == 3:
                    b2 = poly.add(K, poly.mul(K, a1, a1), a2)
                    if not b2:
                        continue  # not ordinary in characteristic 3
                for c3 in range(hi):
                    if exhausted or len(out) >= limit:
                        break
                    a3 = codes[c3]
                    for c4c in range(hi):
                        if exhausted or len(out) >= limit:
                            break
                        a4 = codes[c4c]
                        for c6 in range(hi):
                            if len(out) >= limit:
                                break
                            if max(c1, c2, c3, c4c, c6) < lo:
                                continue  # seen at an earlier level
                            examined += 1
                            if examined > budget:
                                exhausted = True
                                break
                            a6 = codes[c6]
                            disc, c4, _ = _disc_c4_polys(K, a1, a2, a3, a4, a6)
                            if not disc:
                                continue
                            if _j_is_constant(K, disc, c4):
                                continue
                            dc4 = poly.deg(c4) if c4 else None
                            if not _infinity_degree_condition(poly.deg(disc), dc4):
                                continue
                            try:
                                m = WeierstrassModel.from_polys(K, [a1, a2, a3, a4, a6])
                            except Singular:
                                continue
                            if not m.hasse_nonzero():
                                continue
                            try:
                                sv = tate.survey(m, scan_bound=scan_bound)
                            except (IncompleteScan, NonOrdinaryCurve):
                                continue
                            if tate.semistable_ordinary_guard(sv):
                                out.append(m)
    return SearchResult(
        curves=tuple(out),
        examined=examined,
        budget_exhausted=exhausted,
        degree_bound=degree_bound,
    )
