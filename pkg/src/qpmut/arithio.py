"""String syntax and JSON documents for every exchanged object.

Expression grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' ['+'|'-'] INT]
    atom   := INT | VAR | '(' expr ')'
    VAR    := ('x'|'u') INT

One expression may use either the ``x`` or the ``u`` prefix, not both.
"""
from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .errors import DomainError, ParseError
from .exactalg import LaurentPoly, RationalFunction, TropicalElement
from .exactalg.rational import as_rational

SCHEMA_VERSION = 1


# printing

def _format_term(exps, c, prefix, offset, first):
    c = Fraction(c)
    neg = c < 0
    a = -c if neg else c
    factors = []
    for k, e in enumerate(exps, start=1 + offset):
        if e == 1:
            factors.append(f"{prefix}{k}")
        elif e:
            factors.append(f"{prefix}{k}^{e}")
    body = "*".join(factors)
    if not body:
        body = str(a)
    elif a != 1:
        body = f"{a}*{body}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def format_laurent(p: LaurentPoly, prefix="x", offset=0) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(sorted(p.term_map().items(), reverse=True)):
        out.append(_format_term(e, c, prefix, offset, i == 0))
    return "".join(out)


def _split_negative(p: LaurentPoly):
    """p = num / x^d with num a polynomial-in-the-negative-directions and d >= 0."""
    d = tuple(max(-v, 0) for v in p.min_exponents())
    return p.shift(d), LaurentPoly.monomial(d)


def _wrap(s):
    return s if all(ch not in s for ch in " *") else f"({s})"


def print_canonical(value, prefix="x", offset=0) -> str:
    """Canonical string of a LaurentPoly, RationalFunction, TropicalElement
    or rational scalar.  ``offset`` shifts variable numbering (tropical
    generators are named u_{offset+1}, ...)."""
    if isinstance(value, RationalFunction) and value.is_laurent():
        value = value.as_laurent()
    if isinstance(value, LaurentPoly):
        if len(value) < 2 or value.is_polynomial():
            return format_laurent(value, prefix, offset)
        num, den = _split_negative(value)
        return f"({format_laurent(num, prefix, offset)})/{_wrap(format_laurent(den, prefix, offset))}"
    if isinstance(value, RationalFunction):
        num, d = _split_negative(value.num)
        den = value.den * d
        return f"({format_laurent(num, prefix, offset)})/({format_laurent(den, prefix, offset)})"
    if isinstance(value, TropicalElement):
        p = LaurentPoly.monomial(value.exponents)
        return format_laurent(p, "u", offset)
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    raise TypeError(f"cannot print {type(value).__name__}")


# parsing

class _Lexer:
    def __init__(self, s: str):
        self.s = s
        self.toks = []
        i = 0
        b = s.encode("utf-8")
        while i < len(b):
            ch = chr(b[i])
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(b) and chr(b[j]).isdigit():
                    j += 1
                self.toks.append(("int", int(b[i:j]), i))
                i = j
            elif ch in "xu":
                j = i + 1
                while j < len(b) and chr(b[j]).isdigit():
                    j += 1
                if j == i + 1:
                    raise ParseError(f"variable {ch!r} needs an index", offset=i)
                idx = int(b[i + 1:j])
                if idx < 1:
                    raise ParseError("variable indices start at 1", offset=i)
                self.toks.append(("var", (ch, idx), i))
                i = j
            elif ch in "+-*/^()":
                self.toks.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", offset=i)
        self.toks.append(("end", None, len(b)))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        t = self.toks[self.pos]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[0]!r}", offset=t[2])
        self.pos += 1
        return t


def _collect_vars(lex):
    vs = [t for t in lex.toks if t[0] == "var"]
    first = vs[0][1][0] if vs else None
    for t in vs:
        if t[1][0] != first:
            raise ParseError("cannot mix x and u variables", offset=t[2])
    top = max((t[1][1] for t in vs), default=0)
    return first, top


def parse_rational_function(s: str, nvars: int | None = None, offset: int = 0) -> RationalFunction:
    """Parse an expression into a normalized RationalFunction.

    ``nvars`` defaults to the largest variable index used.  ``offset`` is
    subtracted from every variable index (u-variables named from r+1).
    """
    lex = _Lexer(s)
    _, top = _collect_vars(lex)
    n = nvars if nvars is not None else max(top - offset, 1)
    for t in lex.toks:
        if t[0] == "var" and not 1 <= t[1][1] - offset <= n:
            raise ParseError(f"variable {t[1][0]}{t[1][1]} outside 1..{n}", offset=t[2])

    def expr():
        t = lex.peek()
        sign = 1
        if t[0] in "+-":
            lex.take()
            sign = -1 if t[0] == "-" else 1
        v = term()
        if sign < 0:
            v = -v
        while lex.peek()[0] in "+-":
            op = lex.take()[0]
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term():
        v = factor()
        while lex.peek()[0] in "*/":
            op = lex.take()
            rhs = factor()
            if op[0] == "*":
                v = v * rhs
            else:
                if rhs.is_zero():
                    raise DomainError(f"division by zero at byte {op[2]}")
                v = v / rhs
        return v

    def factor():
        v = atom()
        if lex.peek()[0] == "^":
            lex.take()
            sign = 1
            if lex.peek()[0] in "+-":
                sign = -1 if lex.take()[0] == "-" else 1
            k = lex.take("int")[1] * sign
            if k < 0 and v.is_zero():
                raise DomainError("negative power of zero")
            v = v ** k
        return v

    def atom():
        t = lex.take()
        if t[0] == "int":
            return RationalFunction.const(n, t[1])
        if t[0] == "var":
            return RationalFunction.var(n, t[1][1] - offset)
        if t[0] == "(":
            v = expr()
            lex.take(")")
            return v
        raise ParseError(f"unexpected token {t[0]!r}", offset=t[2])

    v = expr()
    t = lex.peek()
    if t[0] != "end":
        raise ParseError(f"trailing input {t[0]!r}", offset=t[2])
    return v


def parse_laurent(s: str, nvars: int | None = None, offset: int = 0) -> LaurentPoly:
    return parse_rational_function(s, nvars, offset).as_laurent()


def parse_tropical(s: str, m: int, offset: int = 0) -> TropicalElement:
    p = parse_laurent(s, m, offset)
    if not p.is_monomial() or p.leading_term()[1] != 1:
        raise ParseError("tropical elements are monic monomials")
    return TropicalElement(p.leading_term()[0])


# JSON documents

_RAT = {"type": "string", "pattern": r"^[+-]?\d+(/\d+)?$"}
_ARROW = {
    "type": "object",
    "properties": {"id": {"type": "string", "minLength": 1},
                   "src": {"type": "integer", "minimum": 1},
                   "tgt": {"type": "integer", "minimum": 1}},
    "required": ["id", "src", "tgt"], "additionalProperties": False,
}
QUIVER_SCHEMA = {
    "type": "object",
    "properties": {"schema_version": {"const": SCHEMA_VERSION},
                   "n": {"type": "integer", "minimum": 0},
                   "r": {"type": "integer", "minimum": 0},
                   "arrows": {"type": "array", "items": _ARROW}},
    "required": ["n", "arrows"], "additionalProperties": False,
}
SEED_SCHEMA = {
    "type": "object",
    "properties": {"schema_version": {"const": SCHEMA_VERSION},
                   "quiver": QUIVER_SCHEMA,
                   "cluster": {"type": "array", "items": {"type": "string"}}},
    "required": ["quiver", "cluster"], "additionalProperties": False,
}
POTENTIAL_SCHEMA = {
    "type": "array",
    "items": {"type": "object",
              "properties": {"coef": _RAT,
                             "cycle": {"type": "array", "items": {"type": "string"}, "minItems": 1}},
              "required": ["coef", "cycle"], "additionalProperties": False},
}
QP_SCHEMA = {
    "type": "object",
    "properties": {"schema_version": {"const": SCHEMA_VERSION},
                   "quiver": QUIVER_SCHEMA,
                   "potential": POTENTIAL_SCHEMA,
                   "trunc": {"type": "integer", "minimum": 3}},
    "required": ["quiver", "potential"], "additionalProperties": False,
}
REP_SCHEMA = {
    "type": "object",
    "properties": {"schema_version": {"const": SCHEMA_VERSION},
                   "dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                   "vdims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                   "maps": {"type": "object",
                            "additionalProperties": {"type": "array",
                                                     "items": {"type": "array", "items": _RAT}}},
                   "qp": QP_SCHEMA},
    "required": ["dims", "vdims", "maps"], "additionalProperties": False,
}
_CHECK = {
    "type": "object",
    "properties": {"passed": {"type": "integer"}, "failed": {"type": "integer"},
                   "counterexamples": {"type": "array"}},
    "required": ["passed", "failed", "counterexamples"], "additionalProperties": False,
}
REPORT_SCHEMA = {
    "type": "object",
    "properties": {"schema_version": {"const": SCHEMA_VERSION},
                   "scenario": {"type": "string"},
                   "depth": {"type": "integer"},
                   "ok": {"type": "boolean"},
                   "sequences": {"type": "integer"},
                   "checks": {"type": "object", "additionalProperties": _CHECK},
                   "timing": {"type": "object", "additionalProperties": {"type": "number"}}},
    "required": ["scenario", "ok", "checks"], "additionalProperties": False,
}

SCHEMAS = {"quiver": QUIVER_SCHEMA, "seed": SEED_SCHEMA, "potential": POTENTIAL_SCHEMA,
           "qp": QP_SCHEMA, "rep": REP_SCHEMA, "report": REPORT_SCHEMA}


def validate(doc, kind):
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        path = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise ParseError(f"{kind} document: {exc.message}", path=path) from None
    return doc


def _strip_version(doc):
    return {k: v for k, v in doc.items() if k != "schema_version"}


def quiver_to_json(q):
    return {"schema_version": SCHEMA_VERSION, "n": q.n, "r": q.r,
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in q.arrows]}


def quiver_from_json(doc, ice=True):
    from .quiver import Arrow, IceQuiver, Quiver
    validate(doc, "quiver")
    arrows = tuple(Arrow(a["id"], a["src"], a["tgt"]) for a in doc["arrows"])
    cls = IceQuiver if ice else Quiver
    return cls(doc["n"], arrows, doc.get("r", doc["n"]))


def seed_to_json(s):
    return {"schema_version": SCHEMA_VERSION, "quiver": quiver_to_json(s.quiver),
            "cluster": [print_canonical(v) for v in s.cluster]}


def seed_from_json(doc):
    from .seedengine import Seed, initial_seed
    if "cluster" not in doc and "arrows" in doc:
        return initial_seed(quiver_from_json(doc))
    validate(doc, "seed")
    q = quiver_from_json(doc["quiver"])
    if len(doc["cluster"]) != q.r:
        raise ParseError(f"cluster has {len(doc['cluster'])} entries, expected {q.r}", path="/cluster")
    cluster = []
    for k, s in enumerate(doc["cluster"]):
        try:
            cluster.append(parse_rational_function(s, q.n))
        except ParseError as exc:
            raise ParseError(str(exc), path=f"/cluster/{k}") from None
    return Seed(q, tuple(cluster))


def potential_to_json(w):
    return [{"coef": str(Fraction(c)), "cycle": list(cyc)} for cyc, c in w.terms]


def potential_from_json(data, quiver, trunc=None):
    from .qpalg import Potential
    validate(data, "potential")
    return Potential.from_terms(quiver, [(d["cycle"], as_rational(d["coef"])) for d in data], trunc)


def qp_to_json(qp):
    return {"schema_version": SCHEMA_VERSION, "quiver": quiver_to_json(qp.quiver),
            "potential": potential_to_json(qp.potential), "trunc": qp.trunc}


def qp_from_json(doc, trunc=None):
    from .qpalg import QP, DEFAULT_TRUNC
    validate(doc, "qp")
    q = quiver_from_json(doc["quiver"], ice=False)
    N = trunc if trunc is not None else doc.get("trunc", DEFAULT_TRUNC)
    return QP(q, potential_from_json(doc["potential"], q, N), N)


def rep_to_json(m, include_qp=False):
    from .exactalg.linalg import to_strings
    doc = {"schema_version": SCHEMA_VERSION, "dims": list(m.dims), "vdims": list(m.vdims),
           "maps": {a.id: to_strings(m.maps[a.id]) for a in m.qp.quiver.arrows}}
    if include_qp:
        doc["qp"] = qp_to_json(m.qp)
    return doc


def rep_from_json(doc, qp=None):
    from .decrep import DecoratedRep
    from .exactalg.linalg import qmatrix
    validate(doc, "rep")
    if qp is None:
        if "qp" not in doc:
            raise ParseError("representation needs a QP (embedded 'qp' or --qp)", path="/qp")
        qp = qp_from_json(doc["qp"])
    dims, vdims = doc["dims"], doc["vdims"]
    n = qp.quiver.n
    if len(dims) != n or len(vdims) != n:
        raise ParseError(f"dims/vdims must have length {n}", path="/dims")
    maps = {}
    ids = {a.id for a in qp.quiver.arrows}
    for k in doc["maps"]:
        if k not in ids:
            raise ParseError(f"unknown arrow {k!r}", path=f"/maps/{k}")
    for a in qp.quiver.arrows:
        shape = (dims[a.src - 1], dims[a.tgt - 1])
        rows = doc["maps"].get(a.id)
        if rows is None:
            if shape[0] * shape[1]:
                raise ParseError(f"missing matrix for arrow {a.id!r}", path=f"/maps/{a.id}")
            rows = []
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise ParseError(f"matrix for {a.id!r} must be {shape[0]}x{shape[1]}", path=f"/maps/{a.id}")
        maps[a.id] = qmatrix(rows, shape)
    return DecoratedRep(qp, tuple(dims), tuple(vdims), maps)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", offset=exc.pos) from None
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def dump_json(doc, path=None):
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
