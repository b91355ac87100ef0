"""Batch analysis: per-curve surveys, identity checks, classification, main
terms, lambda-module counting, and deterministic report emission.

Reports are reproducible byte-for-byte: no timestamps unless requested, all
maps sorted, every number exact.  Mathematical failures are report content,
never exceptions; only I/O errors escape.
"""

from dataclasses import dataclass, field

from . import formal, selmer, tate
from .cache import NullCache, entry_key
from .curvefile import parse_rat
from .errors import FrobtwistError, IncompleteScan, NonOrdinaryCurve
from .iwasawa import quotient_log_size, recover_mu, specialize
from .places import Place
from .version import __version__

SCHEMA = "frobtwist-report/1"


@dataclass
class AnalyzeOptions:
    series_degree: object = None  # None: 2p^2+2
    scan_bound: int = tate.DEFAULT_SCAN_BOUND
    cache: object = field(default_factory=NullCache)
    timestamps: bool = False
    hbar_override: object = None  # (value, justification) or None


def curve_canonical(m):
    return ";".join(a.render() for a in m.coefficients())


def _place_from_str(K, s):
    if s == "inf":
        return Place.infinity(K)
    r = parse_rat(K, s)
    assert r.is_poly()
    return Place.finite(K, r.num)


def _series_degree(K, opts):
    return opts.series_degree or formal.default_series_degree(K.p)


def _survey_payload(m, opts):
    """JSON-able survey summary for one curve, cached by content digest."""
    K = m.K
    N = _series_degree(K, opts)
    ckey = entry_key(
        __version__, K.describe(), curve_canonical(m), "@survey", opts.scan_bound, N
    )
    got = opts.cache.get(ckey)
    if got is not None:
        return got

    payload = {
        "deg_disc": None,
        "semistable": None,
        "ordinary": None,
        "isotrivial": None,
        "violations": [],
        "ss_complete": None,
        "scan_bound": opts.scan_bound,
        "rows": [],
        "error": None,
    }
    try:
        sv = tate.survey(m, scan_bound=opts.scan_bound)
    except IncompleteScan as exc:
        payload["error"] = f"IncompleteScan: {exc}"
        opts.cache.put(ckey, payload)
        return payload
    except NonOrdinaryCurve as exc:
        payload["violations"] = [f"NonOrdinary: {exc}"]
        payload["semistable"] = True
        payload["ordinary"] = False
        payload["isotrivial"] = m.is_isotrivial()
        opts.cache.put(ckey, payload)
        return payload

    payload["deg_disc"] = sv.deg_disc
    payload["semistable"] = sv.semistable
    payload["ordinary"] = sv.ordinary
    payload["isotrivial"] = sv.isotrivial
    payload["ss_complete"] = sv.ss_complete
    payload["violations"] = sorted(
        f"{kind} at {v.render()}" if v is not None else kind for kind, v in sv.violations
    )

    rows = []
    for v in sv.S_b:
        data = sv.local[v]
        if data.kind == "additive":
            log_ker = None
        else:
            log_ker = formal.ker_jv_log(m, data)
        rows.append(
            {
                "place": v.render(),
                "degree": v.degree,
                "ord_disc": data.ord_disc,
                "type": data.type_label(),
                "kodaira": data.kodaira,
                "c": data.c,
                "a": data.a_trace,
                "ordinary": data.ordinary,
                "component_order_even": data.component_order_even,
                "n": 0 if data.kind != "additive" else None,
                "epsilon": None,
                "log_ker_j": log_ker,
                "certified": True,
            }
        )
    if sv.semistable and sv.ordinary:
        for v, data in sv.ss_places:
            vd = formal.verschiebung_data(data.minimal_model, v, reduction=data, N=N)
            if vd.n_v != sv.ss_defects[v]:
                raise FrobtwistError("internal: defect mismatch between scan and data")
            rows.append(
                {
                    "place": v.render(),
                    "degree": v.degree,
                    "ord_disc": 0,
                    "type": data.type_label(),
                    "kodaira": data.kodaira,
                    "c": data.c,
                    "a": data.a_trace,
                    "ordinary": data.ordinary,
                    "component_order_even": None,
                    "n": vd.n_v,
                    "epsilon": vd.epsilon,
                    "log_ker_j": formal.ker_jv_log(m, data, vd),
                    "certified": vd.certified,
                }
            )
    rows.sort(key=lambda r: _place_from_str(K, r["place"]).sort_key())
    payload["rows"] = rows
    opts.cache.put(ckey, payload)
    for r in rows:
        opts.cache.put(
            entry_key(__version__, K.describe(), curve_canonical(m), r["place"]), r
        )
    return payload


def _classification_from_rows(K, rows):
    p = K.p
    S_b = []
    eth_prime = []
    eth = []
    eth0 = []
    for r in rows:
        if r["type"].startswith("Good"):
            continue
        S_b.append(r["place"])
        nonsplit_even = r["type"] == "MultiplicativeNonSplit" and r["component_order_even"]
        if p == 2 and nonsplit_even:
            eth_prime.append(r["place"])
            continue
        eth.append(r["place"])
        if p == 2 or r["type"] == "MultiplicativeSplit":
            eth0.append(r["place"])
    return {
        "S_b": S_b,
        "eth_prime": eth_prime,
        "eth": eth,
        "eth0": eth0,
        "eth1": [],
        "criterion_note": selmer.ETH0_CRITERION_NOTE,
    }


def _hbar_for(m, cls_payload, opts, file_override):
    override = opts.hbar_override or file_override
    if override is not None:
        return override[0], f"override: {override[1]}"
    K = m.K
    p = K.p
    if p == 2:
        k_is_K = True
    elif p == 3:
        try:
            k_is_K = selmer.etale_torsion_field(m).globally_rational
        except FrobtwistError:
            return None, "unknown: torsion field not computable"
    else:
        return None, "unknown: kernel field undecided for p > 3"
    if not k_is_K:
        return None, "unknown: etale p-torsion generates a nontrivial extension"
    eth_places = [_place_from_str(K, s) for s in cls_payload["eth"]]
    val = 1 if all(v.degree % p == 0 for v in eth_places) else 0
    return val, "computed: constant-field extension criterion over k = K"


def _selmer_payload(K, deg_disc, cls_payload, hbar_val, hbar_note, isotrivial):
    p = K.p
    logq = K.degree
    M = (p - 1) * deg_disc // 12 * logq
    n0 = len(cls_payload["eth0"])
    n1 = len(cls_payload["eth1"])
    if hbar_val is None:
        sel_iv = None
        growth_iv = None
    else:
        sel_iv = [M - n0, M + 2 * hbar_val + 1 + n0]
        growth_iv = [M - 2 * hbar_val - 3 * n0, M + 2 * hbar_val + 1 + n0]
    return {
        "main_term": M,
        "log_p_q": logq,
        "hbar": hbar_val,
        "hbar_note": hbar_note,
        "eth0_count": n0,
        "eth1_count": n1,
        "sel_interval": sel_iv,
        "growth_interval": growth_iv,
        "mu_rank_lower_bound": M - n1,
        "mu_rank_equality": M,
        "constant_extension_assumed": True,
        "mu_shift_rule": "(a_1..a_m) -> (a_i - 1 : a_i > 1), sorted descending",
        "isotrivial": isotrivial,
    }


def _analyze_curve(name, m, opts, file_override):
    K = m.K
    p = K.p
    entry = {
        "name": name,
        "model": {
            k: a.render()
            for k, a in zip(("a1", "a2", "a3", "a4", "a6"), m.coefficients())
        },
        "invariants": {
            "disc": m.discriminant().render(),
            "j": m.j_invariant().render(),
        },
    }
    payload = _survey_payload(m, opts)
    entry["places"] = payload["rows"]
    entry["deg_disc_min"] = payload["deg_disc"]
    if payload.get("error"):
        entry["status"] = "error"
        entry["violations"] = [payload["error"]]
        return entry
    if payload["violations"]:
        entry["status"] = "violation"
        entry["violations"] = payload["violations"]
        return entry

    entry["status"] = "ok"
    entry["violations"] = []

    tw = m.frobenius_twist()
    tw_payload = _survey_payload(tw, opts)
    ords = {r["place"]: r["ord_disc"] for r in payload["rows"]}
    ords_tw = {r["place"]: r["ord_disc"] for r in tw_payload["rows"]}
    per_place = []
    twist_ok = tw_payload.get("error") is None
    for s in sorted(
        set(ords) | set(ords_tw), key=lambda s: _place_from_str(K, s).sort_key()
    ):
        o, ot = ords.get(s, 0), ords_tw.get(s, 0)
        ok = ot == p * o
        twist_ok = twist_ok and ok
        per_place.append({"place": s, "ord": o, "ord_twist": ot, "pass": ok})
    total_ok = tw_payload["deg_disc"] == p * payload["deg_disc"]
    twist_ok = twist_ok and total_ok

    lhs = sum(r["n"] * r["degree"] for r in payload["rows"] if r["n"])
    rhs = (p - 1) * payload["deg_disc"] // 12
    disc_ok = lhs == rhs and payload["ss_complete"]

    entry["identities"] = {
        "twist_discriminant": {
            "per_place": per_place,
            "deg_disc": payload["deg_disc"],
            "deg_disc_twist": tw_payload["deg_disc"],
            "pass": twist_ok,
        },
        "supersingular_discrepancy": {
            "lhs": lhs,
            "rhs": rhs,
            "scan_complete": payload["ss_complete"],
            "pass": disc_ok,
        },
    }

    cls_payload = _classification_from_rows(K, payload["rows"])
    entry["classification"] = cls_payload
    hb, note = _hbar_for(m, cls_payload, opts, file_override)
    entry["selmer"] = _selmer_payload(
        K, payload["deg_disc"], cls_payload, hb, note, payload["isotrivial"]
    )
    main_tw = (p - 1) * tw_payload["deg_disc"] // 12 * K.degree
    entry["selmer"]["main_term_twist"] = main_tw
    entry["selmer"]["main_term_scaling_pass"] = (
        main_tw == p * entry["selmer"]["main_term"]
    )
    return entry


def _analyze_lambda(name, Z, opts):
    entry = {
        "name": name,
        "d": Z.d,
        "p": Z.p,
        "precision": Z.B,
        "exponents": list(Z.exponents),
        "generator_count": len(Z.generators),
    }
    work = Z
    if Z.d == 2:
        last_err = None
        for psi in ((0, 1), (1, 0), (1, 1), (1, -1), (1, 2), (2, 1)):
            try:
                work = specialize(Z, psi)
                entry["specialized_along"] = list(psi)
                break
            except FrobtwistError as exc:
                last_err = exc
        else:
            entry["status"] = "error"
            entry["error"] = f"no valid specialization direction found: {last_err}"
            return entry
    table = []
    numax = min(3, work.B)
    for nu in range(1, numax + 1):
        for n in range(0, 4):
            table.append({"nu": nu, "n": n, "log_size": quotient_log_size(work, nu, n)})
    entry["counting"] = table
    rec = recover_mu(work)
    entry["recovered_mu"] = list(rec)
    entry["roundtrip_pass"] = rec == tuple(Z.exponents)
    entry["status"] = "ok" if entry["roundtrip_pass"] else "failed"
    return entry


def analyze(cf, opts=None):
    """Build the full report dict for a parsed curve file."""
    opts = opts or AnalyzeOptions()
    K = cf.K
    report = {
        "schema": SCHEMA,
        "tool": {"name": "frobtwist", "version": __version__},
        "input": {
            "digest": cf.source_digest,
            "p": cf.p,
            "q": cf.q,
            "modulus": K.render_modulus() if K.degree > 1 else None,
        },
        "options": {
            "series_degree": _series_degree(K, opts),
            "scan_degree_bound": opts.scan_bound,
        },
        "curves": [],
        "lambda_modules": [],
    }
    if opts.timestamps:
        import datetime

        report["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    for name, m in cf.curves:
        report["curves"].append(_analyze_curve(name, m, opts, cf.hbar_override))
    for name, Z in cf.lambdas:
        report["lambda_modules"].append(_analyze_lambda(name, Z, opts))
    return report


def verify(cf, opts=None):
    """(exit_status, diagnostics): 0 only if every check passes."""
    report = analyze(cf, opts)
    failures = []
    for c in report["curves"]:
        if c["status"] != "ok":
            failures.append(f"curve {c['name']}: {c['status']}: {'; '.join(c['violations'])}")
            continue
        ids = c["identities"]
        if not ids["twist_discriminant"]["pass"]:
            failures.append(f"curve {c['name']}: twist discriminant identity fails")
        if not ids["supersingular_discrepancy"]["pass"]:
            failures.append(f"curve {c['name']}: supersingular discrepancy identity fails")
        if not c["selmer"]["main_term_scaling_pass"]:
            failures.append(f"curve {c['name']}: main term does not scale by p under twist")
    for lam in report["lambda_modules"]:
        if lam.get("status") != "ok":
            failures.append(f"lambda {lam['name']}: mu recovery round-trip fails")
    return (0 if not failures else 1), failures, report


# -- text rendering ----------------------------------------------------------------


def _fmt(v):
    if v is None:
        return "-"
    if v is True:
        return "yes"
    if v is False:
        return "no"
    return str(v)


def _table(headers, rows):
    widths = [len(h) for h in headers]
    srows = [[_fmt(c) for c in r] for r in rows]
    for r in srows:
        for i, c in enumerate(r):
            widths[i] = max(widths[i], len(c))
    out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    for r in srows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(out)


def render_text(report):
    lines = []
    inp = report["input"]
    lines.append(f"frobtwist {report['tool']['version']} report")
    lines.append(
        f"field: p={inp['p']} q={inp['q']}"
        + (f" modulus={inp['modulus']}" if inp["modulus"] else "")
    )
    lines.append(f"input digest: {inp['digest']}")
    if "generated_at" in report:
        lines.append(f"generated at: {report['generated_at']}")
    for c in report["curves"]:
        lines.append("")
        lines.append(f"== curve {c['name']} ==")
        model = ", ".join(f"{k}={v}" for k, v in c["model"].items() if v != "0")
        lines.append(f"model: {model or 'a_i = 0'}")
        lines.append(f"disc: {c['invariants']['disc']}   j: {c['invariants']['j']}")
        lines.append(f"status: {c['status']}")
        if c["violations"]:
            for v in c["violations"]:
                lines.append(f"  violation: {v}")
        if c.get("deg_disc_min") is not None:
            lines.append(f"deg of minimal discriminant: {c['deg_disc_min']}")
        if c["places"]:
            lines.append(
                _table(
                    ["place", "deg", "ord", "type", "c", "a", "ord?", "n", "eps", "log|ker j|"],
                    [
                        [
                            r["place"],
                            r["degree"],
                            r["ord_disc"],
                            r["kodaira"] if r["type"].startswith("Add") else r["type"],
                            r["c"],
                            r["a"],
                            r["ordinary"],
                            r["n"],
                            r["epsilon"],
                            r["log_ker_j"],
                        ]
                        for r in c["places"]
                    ],
                )
            )
        if c["status"] != "ok":
            continue
        ids = c["identities"]
        td = ids["twist_discriminant"]
        lines.append(
            f"twist identity: deg {td['deg_disc']} -> {td['deg_disc_twist']}"
            f" ({'pass' if td['pass'] else 'FAIL'})"
        )
        sd = ids["supersingular_discrepancy"]
        lines.append(
            f"discrepancy identity: sum n_v deg v = {sd['lhs']}, "
            f"(p-1) deg/12 = {sd['rhs']} ({'pass' if sd['pass'] else 'FAIL'})"
        )
        cls = c["classification"]
        lines.append(
            "bad places: S_b={" + ",".join(cls["S_b"]) + "}"
            " eth'={" + ",".join(cls["eth_prime"]) + "}"
            " eth0={" + ",".join(cls["eth0"]) + "}"
        )
        s = c["selmer"]
        lines.append(
            f"main term M = {s['main_term']}  (twist: {s['main_term_twist']},"
            f" scaling {'pass' if s['main_term_scaling_pass'] else 'FAIL'})"
        )
        lines.append(f"hbar = {_fmt(s['hbar'])}  ({s['hbar_note']})")
        if s["sel_interval"]:
            lines.append(
                f"log_p |Sel_p(twist)| in [{s['sel_interval'][0]}, {s['sel_interval'][1]}]"
            )
            lines.append(
                f"growth term in [{s['growth_interval'][0]}, {s['growth_interval'][1]}]"
            )
        lines.append(
            f"mu-rank >= {s['mu_rank_lower_bound']}; = {s['mu_rank_equality']}"
            " under the constant-extension hypothesis"
        )
    for lam in report["lambda_modules"]:
        lines.append("")
        lines.append(f"== lambda module {lam['name']} ==")
        lines.append(
            f"d={lam['d']} p={lam['p']} exponents={lam['exponents']}"
            f" generators={lam['generator_count']}"
        )
        if lam.get("specialized_along"):
            lines.append(f"specialized along psi = {tuple(lam['specialized_along'])}")
        if lam.get("status") == "error":
            lines.append(f"error: {lam['error']}")
            continue
        lines.append(
            _table(
                ["nu", "n", "log_p size"],
                [[r["nu"], r["n"], r["log_size"]] for r in lam["counting"]],
            )
        )
        lines.append(
            f"recovered mu exponents: {lam['recovered_mu']}"
            f" ({'pass' if lam['roundtrip_pass'] else 'FAIL'})"
        )
    return "\n".join(lines) + "\n"
