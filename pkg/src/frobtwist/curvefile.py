"""The line-oriented curve-file format.

    # comment
    format = 1
    p = 2
    q = 4
    modulus = u^2+u+1            # optional; must match the canonical choice

    [curve NAME]
    a1 = t
    a3 = (t^2+1)/(t+1)           # rational functions in t over the field
    ...                          # omitted a_i default to 0

    [lambda NAME]
    d = 1
    exponents = 3,2,1
    generators = x^2+3*x+3 ; x-3
    precision = 8

    [override]
    hbar = 1
    justification = text...

Coefficients parse over the declared field; constants reduce modulo p, so
"2*t" over F_2 normalizes to 0.  Curve and lambda names must be unique.
"""

from dataclasses import dataclass, field

from . import poly
from .errors import CurveSyntaxError, DuplicateName, FieldMismatch
from .iwasawa import DEFAULT_PRECISION, LambdaModule
from .poly import make_field
from .ratfunc import Rat
from .weierstrass import WeierstrassModel

FORMAT_VERSION = 1


@dataclass
class CurveFile:
    K: object
    p: int
    q: int
    curves: list  # [(name, WeierstrassModel)]
    lambdas: list  # [(name, LambdaModule)]
    hbar_override: object = None  # (value, justification) or None
    source_digest: str = ""


# -- expression parsing ---------------------------------------------------------


class _Tok:
    def __init__(self, kind, val=None):
        self.kind = kind
        self.val = val


def _lex(s, line):
    toks = []
    i = 0
    while i < len(s):
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(s[i:j])))
            i = j
        elif c in "+-*/^()":
            toks.append(_Tok(c))
            i += 1
        elif c.isalpha():
            toks.append(_Tok("var", c))
            i += 1
        else:
            raise CurveSyntaxError(f"unexpected character {c!r}", line)
    toks.append(_Tok("end"))
    return toks


class _ExprParser:
    """Tiny recursive-descent parser producing values via a semantics object."""

    def __init__(self, toks, sem, line):
        self.toks = toks
        self.pos = 0
        self.sem = sem
        self.line = line

    def peek(self):
        return self.toks[self.pos]

    def eat(self, kind=None):
        t = self.toks[self.pos]
        if kind and t.kind != kind:
            raise CurveSyntaxError(f"expected {kind}, found {t.kind}", self.line)
        self.pos += 1
        return t

    def parse(self):
        v = self.expr()
        if self.peek().kind != "end":
            raise CurveSyntaxError("trailing input in expression", self.line)
        return v

    def expr(self):
        neg = False
        if self.peek().kind in "+-":
            neg = self.eat().kind == "-"
        v = self.term()
        if neg:
            v = self.sem.neg(v)
        while self.peek().kind in "+-":
            op = self.eat().kind
            w = self.term()
            v = self.sem.add(v, w) if op == "+" else self.sem.sub(v, w)
        return v

    def term(self):
        v = self.factor()
        while self.peek().kind in "*/":
            op = self.eat().kind
            w = self.factor()
            v = self.sem.mul(v, w) if op == "*" else self.sem.div(v, w)
        return v

    def factor(self):
        v = self.atom()
        while self.peek().kind == "^":
            self.eat()
            e = self.eat("int").val
            v = self.sem.pow(v, e)
        return v

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            self.eat()
            return self.sem.const(t.val)
        if t.kind == "var":
            self.eat()
            return self.sem.var(t.val, self.line)
        if t.kind == "(":
            self.eat()
            v = self.expr()
            self.eat(")")
            return v
        if t.kind == "-":
            self.eat()
            return self.sem.neg(self.atom())
        raise CurveSyntaxError(f"unexpected token {t.kind}", self.line)


class _RatSemantics:
    """Values are rational functions in t over K; 'u' is the field generator."""

    def __init__(self, K):
        self.K = K

    def const(self, n):
        return Rat.const(self.K, n % self.K.p)

    def var(self, name, line):
        if name == "t":
            return Rat.t(self.K)
        if name == "u":
            if self.K.degree == 1:
                raise FieldMismatch("'u' used over a prime field", line)
            return Rat.const(self.K, self.K.p)  # code of the generator
        raise CurveSyntaxError(f"unknown variable {name!r}", line)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def pow(self, a, e):
        return a**e


class _IntPolySemantics:
    """Values are dicts {(i, j): int}: integer polynomials in x (and y)."""

    def __init__(self, nvars):
        self.nvars = nvars

    def const(self, n):
        return {(0, 0): n} if n else {}

    def var(self, name, line):
        if name == "x":
            return {(1, 0): 1}
        if name == "y":
            if self.nvars < 2:
                raise CurveSyntaxError("'y' used in a one-variable block", line)
            return {(0, 1): 1}
        raise CurveSyntaxError(f"unknown variable {name!r}", line)

    def add(self, a, b):
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
            if not out[e]:
                del out[e]
        return out

    def sub(self, a, b):
        return self.add(a, {e: -c for e, c in b.items()})

    def neg(self, a):
        return {e: -c for e, c in a.items()}

    def mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                out[e] = out.get(e, 0) + c1 * c2
                if not out[e]:
                    del out[e]
        return out

    def div(self, a, b):
        raise CurveSyntaxError("division is not allowed in lambda generators", 0)

    def pow(self, a, e):
        out = self.const(1)
        for _ in range(e):
            out = self.mul(out, a)
        return out


def parse_rat(K, text, line=0):
    return _ExprParser(_lex(text, line), _RatSemantics(K), line).parse()


def parse_int_poly(text, nvars, line=0):
    return _ExprParser(_lex(text, line), _IntPolySemantics(nvars), line).parse()


# -- file parsing ----------------------------------------------------------------


def _split_kv(line_text, lineno):
    if "=" not in line_text:
        raise CurveSyntaxError("expected key = value", lineno)
    k, v = line_text.split("=", 1)
    return k.strip(), v.strip()


def parse(data):
    """Parse curve-file bytes (or str) into a CurveFile."""
    import hashlib

    if isinstance(data, bytes):
        digest = hashlib.sha256(data).hexdigest()
        text = data.decode("utf-8")
    else:
        digest = hashlib.sha256(data.encode()).hexdigest()
        text = data

    header = {}
    sections = []  # (kind, name, lineno, dict of key -> (value, lineno))
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise CurveSyntaxError("unterminated section header", lineno)
            inner = line[1:-1].strip()
            parts = inner.split(None, 1)
            kind = parts[0].lower()
            name = parts[1].strip() if len(parts) > 1 else ""
            if kind not in ("curve", "lambda", "override"):
                raise CurveSyntaxError(f"unknown section kind {kind!r}", lineno)
            if kind in ("curve", "lambda") and not name:
                raise CurveSyntaxError(f"{kind} section needs a name", lineno)
            current = (kind, name, lineno, {})
            sections.append(current)
            continue
        k, v = _split_kv(line, lineno)
        if current is None:
            if k in header:
                raise CurveSyntaxError(f"duplicate header key {k!r}", lineno)
            header[k] = (v, lineno)
        else:
            if k in current[3]:
                raise CurveSyntaxError(f"duplicate key {k!r} in section", lineno)
            current[3][k] = (v, lineno)

    def header_int(key, required=True, default=None):
        if key not in header:
            if required:
                raise CurveSyntaxError(f"missing header key {key!r}", 1)
            return default
        v, ln = header[key]
        try:
            return int(v)
        except ValueError:
            raise CurveSyntaxError(f"{key} must be an integer", ln) from None

    fmt = header_int("format")
    if fmt != FORMAT_VERSION:
        raise CurveSyntaxError(f"unsupported format version {fmt}", header["format"][1])
    p = header_int("p")
    q = header_int("q")
    k = 0
    qq = q
    while qq > 1 and qq % p == 0:
        qq //= p
        k += 1
    if qq != 1 or k < 1:
        raise FieldMismatch(f"q = {q} is not a power of p = {p}", header["q"][1])
    try:
        K = make_field(p, k)
    except Exception as exc:
        raise FieldMismatch(str(exc), header["p"][1]) from None
    if "modulus" in header and k > 1:
        want, ln = header["modulus"]
        have = K.render_modulus()
        if want.replace(" ", "") != have.replace(" ", ""):
            raise FieldMismatch(
                f"modulus {want!r} differs from the canonical {have!r}", ln
            )

    curves = []
    lambdas = []
    names = set()
    hbar_override = None
    for kind, name, lineno, body in sections:
        if kind == "curve":
            if name in names:
                raise DuplicateName(f"duplicate name {name!r}", lineno)
            names.add(name)
            coeffs = []
            for key in ("a1", "a2", "a3", "a4", "a6"):
                if key in body:
                    v, ln = body[key]
                    coeffs.append(parse_rat(K, v, ln))
                else:
                    coeffs.append(Rat.const(K, 0))
            for key in body:
                if key not in ("a1", "a2", "a3", "a4", "a6"):
                    raise CurveSyntaxError(f"unknown curve key {key!r}", body[key][1])
            try:
                curves.append((name, WeierstrassModel(K, *coeffs)))
            except Exception as exc:
                raise CurveSyntaxError(f"curve {name!r}: {exc}", lineno) from None
        elif kind == "lambda":
            if name in names:
                raise DuplicateName(f"duplicate name {name!r}", lineno)
            names.add(name)
            d = 1
            if "d" in body:
                d = int(body["d"][0])
            precision = DEFAULT_PRECISION
            if "precision" in body:
                precision = int(body["precision"][0])
            exps = ()
            if "exponents" in body and body["exponents"][0].strip():
                v, ln = body["exponents"]
                try:
                    exps = tuple(int(x) for x in v.split(","))
                except ValueError:
                    raise CurveSyntaxError("exponents must be integers", ln) from None
            gens = []
            if "generators" in body and body["generators"][0].strip():
                v, ln = body["generators"]
                for part in v.split(";"):
                    g = parse_int_poly(part.strip(), d, ln)
                    if d == 1:
                        deg = max((e[0] for e in g), default=0)
                        coeffs = [0] * (deg + 1)
                        for (i, _), c in g.items():
                            coeffs[i] = c
                        gens.append(tuple(coeffs))
                    else:
                        gens.append(g)
            try:
                lambdas.append((name, LambdaModule(p, d, exps, gens, precision)))
            except Exception as exc:
                raise CurveSyntaxError(f"lambda {name!r}: {exc}", lineno) from None
        else:  # override
            if "hbar" not in body or "justification" not in body:
                raise CurveSyntaxError(
                    "override needs both hbar and justification", lineno
                )
            if not body["justification"][0].strip():
                raise CurveSyntaxError("override justification must be non-empty", lineno)
            hbar_override = (int(body["hbar"][0]), body["justification"][0].strip())

    return CurveFile(
        K=K,
        p=p,
        q=q,
        curves=curves,
        lambdas=lambdas,
        hbar_override=hbar_override,
        source_digest=digest,
    )


def render_curve_file(K, named_models, comment=None):
    """Emit models in the curve-file format (used by the search command)."""
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"format = {FORMAT_VERSION}")
    lines.append(f"p = {K.p}")
    lines.append(f"q = {K.q}")
    if K.degree > 1:
        lines.append(f"modulus = {K.render_modulus()}")
    for name, m in named_models:
        lines.append("")
        lines.append(f"[curve {name}]")
        for key, a in zip(("a1", "a2", "a3", "a4", "a6"), m.coefficients()):
            if not a.is_zero():
                lines.append(f"{key} = {a.render()}")
    return "\n".join(lines) + "\n"
