"""Workspace language: categories, coefficient algebras, representations, morphisms.

Paths compose left to right: ``a;b`` means "first a, then b".  A workspace
is a sequence of items::

    field = Fp(5)
    category { kind = linear relation = d;d }
    rep disk { at 1: dim 1  at 0: dim 1  map d1 = [[1]] }
    rep s0 = stalk(0)
    mor f: disk -> s0 { at 0 = [[1]] }

Parsing produces plain declarations (comparable, printable); ``realize``
turns them into a category on a concrete window plus the named objects.
"""

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Optional

from .category import QuiverSpec, build_category
from .exactlin import QQ, field_from_tag
from .labels import format_label
from .rep import (
    Algebra, amodule, bound_quiver_algebra, dual_numbers, field_algebra,
    free_rep, identity, make_morphism, make_rep, zero_morphism,
)


class DSLError(ValueError):
    """Syntax or reference error with a source position."""

    def __init__(self, message, line, col, expected=None):
        self.line, self.col = line, col
        self.expected = sorted(set(expected)) if expected else []
        self.bare = message
        text = f"line {line}, col {col}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


# ---------------------------------------------------------------------------
# tokens


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*(?:-\d+)?)
  | (?P<punct>->|\.\.|[{}()\[\]=:;,+\-*/])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, punct, eof
    text: str
    line: int
    col: int

    def describe(self):
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text):
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - start + 1))
    return toks


# ---------------------------------------------------------------------------
# declarations


@dataclass(frozen=True)
class Loc:
    line: int = 0
    col: int = 0


def _loc_field():
    return dc_field(default_factory=Loc, compare=False, repr=False)


@dataclass
class CategoryDecl:
    kind: str = "linear"
    N: Optional[int] = None  # nlinear
    m: Optional[int] = None  # cyclic
    zero_length: Optional[int] = None  # from an explicit d;...;d relation
    objects: list = dc_field(default_factory=list)  # finite kind
    arrows: list = dc_field(default_factory=list)  # (name, source, target)
    relations: list = dc_field(default_factory=list)  # [(Fraction, (names...)), ...]
    omit: list = dc_field(default_factory=list)
    loc: Loc = _loc_field()

    def spec(self):
        if self.kind == "linear":
            return QuiverSpec.linear(self.zero_length, self.omit)
        if self.kind == "nlinear":
            return QuiverSpec.nlinear(self.N)
        if self.kind == "cyclic":
            return QuiverSpec.cyclic(self.m, self.zero_length or 2)
        if self.kind == "za3":
            return QuiverSpec.za3()
        return QuiverSpec.finite(self.objects, self.arrows, self.relations)

    @property
    def windowed(self):
        return self.kind in ("linear", "nlinear", "za3")


@dataclass
class AlgebraDecl:
    preset: Optional[str] = "field"  # field | dual, or None for an explicit quiver
    vertices: list = dc_field(default_factory=list)
    arrows: list = dc_field(default_factory=list)
    relations: list = dc_field(default_factory=list)
    loc: Loc = _loc_field()


@dataclass
class RepDecl:
    name: str
    ctor: Optional[tuple] = None  # ("stalk" | "proj", label)
    dims: dict = dc_field(default_factory=dict)  # label -> int or tuple per A-vertex
    actions: dict = dc_field(default_factory=dict)  # (label, A-arrow) -> matrix
    maps: dict = dc_field(default_factory=dict)  # arrow name or (label, label) -> matrix
    loc: Loc = _loc_field()


@dataclass
class MorDecl:
    name: str
    source: str
    target: str
    const: Optional[str] = None  # id | zero
    comps: dict = dc_field(default_factory=dict)  # label -> matrix
    loc: Loc = _loc_field()


@dataclass
class Workspace:
    category: Optional[CategoryDecl] = None
    algebra: AlgebraDecl = dc_field(default_factory=AlgebraDecl)
    field: Optional[str] = None  # "Q" or "Fp:p"
    window: Optional[tuple] = None
    reps: dict = dc_field(default_factory=dict)
    mors: dict = dc_field(default_factory=dict)

    def pretty(self):
        return pretty(self)

    def labels_used(self, names=None):
        """Objects mentioned by the named reps and morphisms (all when None)."""
        out = []
        for r in self.reps.values():
            if names is not None and r.name not in names:
                continue
            if r.ctor:
                out.append(r.ctor[1])
            out.extend(r.dims)
        for m in self.mors.values():
            if names is None or m.name in names:
                out.extend(m.comps)
        return out


# ---------------------------------------------------------------------------
# parser


KINDS = ("linear", "nlinear", "cyclic", "za3", "finite")


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    # -- helpers -----------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, message, expected=None, tok=None):
        t = tok or self.tok
        raise DSLError(message, t.line, t.col, expected)

    def at(self, *texts):
        return self.tok.kind in ("name", "punct") and self.tok.text in texts

    def eat(self, text):
        if not self.at(text):
            self.fail(f"unexpected {self.tok.describe()}", [repr(text)])
        t = self.tok
        self.i += 1
        return t

    def name(self, what="name"):
        if self.tok.kind != "name":
            self.fail(f"unexpected {self.tok.describe()}", [what])
        t = self.tok
        self.i += 1
        return t.text

    def integer(self, signed=True):
        neg = False
        if signed and self.at("-"):
            self.i += 1
            neg = True
        if self.tok.kind != "int":
            self.fail(f"unexpected {self.tok.describe()}", ["integer"])
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    def loc(self):
        return Loc(self.tok.line, self.tok.col)

    # -- atoms -------------------------------------------------------------

    def label(self):
        if self.at("("):
            self.i += 1
            x = self.integer()
            self.eat(",")
            y = self.integer()
            self.eat(")")
            return (x, y)
        if self.tok.kind == "int" or self.at("-"):
            return self.integer()
        if self.tok.kind == "name":
            return self.name()
        self.fail(f"unexpected {self.tok.describe()}", ["object label"])

    def label_list(self):
        out = [self.label()]
        while self.at(","):
            self.i += 1
            out.append(self.label())
        return out

    def scalar(self):
        neg = False
        while self.at("-", "+"):
            neg ^= self.tok.text == "-"
            self.i += 1
        v = Fraction(self.integer(signed=False))
        if self.at("/"):
            self.i += 1
            den = self.tok
            d = self.integer(signed=False)
            if d == 0:
                self.fail("zero denominator", tok=den)
            v /= d
        return -v if neg else v

    def matrix(self):
        start = self.eat("[")
        rows = []
        while not self.at("]"):
            self.eat("[")
            row = []
            while not self.at("]"):
                row.append(self.scalar())
                if not self.at("]"):
                    self.eat(",")
            self.eat("]")
            rows.append(tuple(row))
            if not self.at("]"):
                self.eat(",")
        self.eat("]")
        if len({len(r) for r in rows}) > 1:
            self.fail("matrix rows have different lengths", tok=start)
        return tuple(rows)

    def path(self):
        names = [self.name("arrow name")]
        while self.at(";"):
            self.i += 1
            names.append(self.name("arrow name"))
        return tuple(names)

    def combination(self):
        """Sum of paths with rational coefficients: ``a;b - 2 c;d``."""
        terms = []
        sign = Fraction(1)
        if self.at("-", "+"):
            sign = Fraction(-1 if self.tok.text == "-" else 1)
            self.i += 1
        while True:
            coef = Fraction(1)
            if self.tok.kind == "int":
                coef = self.scalar()
                if self.at("*"):
                    self.i += 1
            terms.append((sign * coef, self.path()))
            if not self.at("+", "-"):
                return terms
            sign = Fraction(-1 if self.tok.text == "-" else 1)
            self.i += 1

    def field_spec(self):
        t = self.tok
        n = self.name("field")
        if n == "Q":
            return "Q"
        if n == "Fp":
            self.eat("(")
            p = self.integer(signed=False)
            self.eat(")")
            if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
                self.fail(f"{p} is not prime", tok=t)
            return f"Fp:{p}"
        self.fail(f"unknown field {n!r}", ["Q", "Fp"], tok=t)

    def window_spec(self):
        t = self.tok
        lo = self.integer()
        self.eat("..")
        hi = self.integer()
        if hi <= lo:
            self.fail("empty window", tok=t)
        return (lo, hi)

    def arrow_decl(self):
        n = self.name("arrow name")
        self.eat(":")
        s = self.label()
        self.eat("->")
        t = self.label()
        return (n, s, t)

    # -- blocks ------------------------------------------------------------

    def workspace(self):
        ws = Workspace()
        seen = set()
        while self.tok.kind != "eof":
            t = self.tok
            if self.at("field"):
                self.i += 1
                self.eat("=")
                ws.field = self.field_spec()
            elif self.at("window"):
                self.i += 1
                self.eat("=")
                ws.window = self.window_spec()
            elif self.at("category"):
                if ws.category is not None:
                    self.fail("second category block")
                ws.category = self.category_block(ws)
            elif self.at("algebra"):
                if "algebra" in seen:
                    self.fail("second algebra block")
                seen.add("algebra")
                ws.algebra = self.algebra_block()
            elif self.at("rep"):
                r = self.rep_block()
                if r.name in ws.reps or r.name in ws.mors:
                    raise DSLError(f"duplicate name {r.name!r}", t.line, t.col)
                ws.reps[r.name] = r
            elif self.at("mor"):
                m = self.mor_block()
                if m.name in ws.reps or m.name in ws.mors:
                    raise DSLError(f"duplicate name {m.name!r}", t.line, t.col)
                ws.mors[m.name] = m
            else:
                self.fail(f"unexpected {self.tok.describe()}",
                          ["field", "window", "category", "algebra", "rep", "mor"])
        if ws.category is None:
            raise DSLError("missing category block", self.tok.line, self.tok.col, ["category"])
        return ws

    def category_block(self, ws):
        loc = self.loc()
        self.eat("category")
        self.eat("{")
        c = CategoryDecl(loc=loc)
        rels = []
        kind_set = False
        while not self.at("}"):
            t = self.tok
            key = self.name("category statement")
            if key == "kind":
                self.eat("=")
                kt = self.tok
                k = self.name("kind")
                if k not in KINDS:
                    self.fail(f"unknown kind {k!r}", list(KINDS), tok=kt)
                c.kind = k
                kind_set = True
                if k == "nlinear":
                    c.N = self._param("N")
                    if c.N < 2:
                        self.fail("N must be at least 2", tok=kt)
                elif k == "cyclic":
                    c.m = self._param("m")
                    if c.m < 1:
                        self.fail("m must be at least 1", tok=kt)
            elif key == "relation":
                self.eat("=")
                rels.append((Loc(self.tok.line, self.tok.col), self.combination()))
            elif key == "objects":
                self.eat("=")
                c.objects = self.label_list()
            elif key == "arrow":
                c.arrows.append(self.arrow_decl())
            elif key == "omit":
                self.eat("=")
                c.omit = [self.integer() for _ in [0]]
                while self.at(","):
                    self.i += 1
                    c.omit.append(self.integer())
            elif key == "field":
                self.eat("=")
                ws.field = self.field_spec()
            elif key == "window":
                self.eat("=")
                ws.window = self.window_spec()
            else:
                self.fail(f"unknown category statement {key!r}",
                          ["kind", "relation", "objects", "arrow", "omit", "field", "window"], tok=t)
        self.eat("}")
        if not kind_set:
            raise DSLError("category needs a kind", loc.line, loc.col, ["kind"])
        self._check_category(c, rels)
        return c

    def _param(self, key):
        self.eat("(")
        self.eat(key)
        self.eat("=")
        v = self.integer(signed=False)
        self.eat(")")
        return v

    def _check_category(self, c, rels):
        if c.kind == "finite":
            if not c.objects:
                raise DSLError("finite category needs objects", c.loc.line, c.loc.col, ["objects"])
            names = {a[0]: a for a in c.arrows}
            objs = set(c.objects)
            for n, s, t in c.arrows:
                if s not in objs or t not in objs:
                    raise DSLError(f"arrow {n} has an endpoint outside the object list",
                                   c.loc.line, c.loc.col)
            for loc, terms in rels:
                _check_relation(names, terms, loc)
                c.relations.append(terms)
            return
        if c.arrows or c.objects:
            raise DSLError(f"kind {c.kind} fixes its own objects and arrows", c.loc.line, c.loc.col)
        if c.omit and c.kind != "linear":
            raise DSLError("omit only applies to kind linear", c.loc.line, c.loc.col)
        for loc, terms in rels:
            if c.kind == "za3":
                raise DSLError("za3 has its mesh relations built in", loc.line, loc.col)
            if len(terms) != 1 or terms[0][0] != 1 or any(n != "d" for n in terms[0][1]) or len(terms[0][1]) < 2:
                raise DSLError("relation must be a path d;d;...;d of length >= 2",
                               loc.line, loc.col, ["d;d", "d;d;d"])
            L = len(terms[0][1])
            if c.kind == "nlinear" and L != c.N:
                raise DSLError(f"nlinear(N={c.N}) implies the relation of length {c.N}, not {L}",
                               loc.line, loc.col)
            if c.zero_length is not None and c.zero_length != L:
                raise DSLError("conflicting relations", loc.line, loc.col)
            if c.kind != "nlinear":
                c.zero_length = L

    def algebra_block(self):
        loc = self.loc()
        self.eat("algebra")
        self.eat("{")
        a = AlgebraDecl(loc=loc)
        rels = []
        explicit = False
        while not self.at("}"):
            t = self.tok
            key = self.name("algebra statement")
            if key == "preset":
                self.eat("=")
                pt = self.tok
                p = self.name("preset")
                if p not in ("field", "dual"):
                    self.fail(f"unknown preset {p!r}", ["field", "dual"], tok=pt)
                a.preset = p
            elif key == "vertices":
                self.eat("=")
                a.vertices = self.label_list()
                explicit = True
            elif key == "arrow":
                a.arrows.append(self.arrow_decl())
                explicit = True
            elif key == "relation":
                self.eat("=")
                rels.append((Loc(self.tok.line, self.tok.col), self.combination()))
                explicit = True
            else:
                self.fail(f"unknown algebra statement {key!r}",
                          ["preset", "vertices", "arrow", "relation"], tok=t)
        self.eat("}")
        if explicit:
            if not a.vertices:
                raise DSLError("algebra needs vertices", loc.line, loc.col, ["vertices"])
            a.preset = None
            names = {x[0]: x for x in a.arrows}
            for n, s, t in a.arrows:
                if s not in a.vertices or t not in a.vertices:
                    raise DSLError(f"arrow {n} has an endpoint outside the vertex list", loc.line, loc.col)
            for rl, terms in rels:
                _check_relation(names, terms, rl)
                a.relations.append(terms)
        return a

    def rep_block(self):
        loc = self.loc()
        self.eat("rep")
        r = RepDecl(self.name("representation name"), loc=loc)
        if self.at("="):
            self.i += 1
            ct = self.tok
            c = self.name("constructor")
            if c not in ("stalk", "proj"):
                self.fail(f"unknown constructor {c!r}", ["stalk", "proj"], tok=ct)
            self.eat("(")
            r.ctor = (c, self.label())
            self.eat(")")
            return r
        self.eat("{")
        while not self.at("}"):
            t = self.tok
            key = self.name("rep statement")
            if key == "at":
                q = self.label()
                self.eat(":")
                if self.at("dim"):
                    self.i += 1
                    if self.at("["):
                        self.i += 1
                        ds = []
                        while not self.at("]"):
                            ds.append(self.integer(signed=False))
                            if not self.at("]"):
                                self.eat(",")
                        self.eat("]")
                        r.dims[q] = tuple(ds)
                    else:
                        r.dims[q] = self.integer(signed=False)
                else:
                    b = self.name("dim or coefficient arrow")
                    self.eat("=")
                    r.actions[(q, b)] = self.matrix()
            elif key == "map":
                if self.tok.kind == "name" and self.toks[self.i + 1].text == "=":
                    key = self.name()
                else:
                    s = self.label()
                    self.eat("->")
                    key = (s, self.label())
                self.eat("=")
                r.maps[key] = self.matrix()
            else:
                self.fail(f"unknown rep statement {key!r}", ["at", "map"], tok=t)
        self.eat("}")
        return r

    def mor_block(self):
        loc = self.loc()
        self.eat("mor")
        m = MorDecl(self.name("morphism name"), "", "", loc=loc)
        self.eat(":")
        m.source = self.name("representation name")
        self.eat("->")
        m.target = self.name("representation name")
        if self.at("="):
            self.i += 1
            ct = self.tok
            c = self.name("id or zero")
            if c not in ("id", "zero"):
                self.fail(f"unknown morphism {c!r}", ["id", "zero"], tok=ct)
            m.const = c
            return m
        self.eat("{")
        while not self.at("}"):
            self.eat("at")
            q = self.label()
            self.eat("=")
            m.comps[q] = self.matrix()
        self.eat("}")
        return m


def _check_relation(names, terms, loc):
    ends = set()
    for _, path in terms:
        for n in path:
            if n not in names:
                raise DSLError(f"unknown arrow {n!r} in relation", loc.line, loc.col, sorted(names))
        for a, b in zip(path, path[1:]):
            if names[a][2] != names[b][1]:
                raise DSLError(f"path {';'.join(path)} is not composable", loc.line, loc.col)
        if len(path) < 2:
            raise DSLError("relation paths must have length >= 2 (admissibility)", loc.line, loc.col)
        ends.add((names[path[0]][1], names[path[-1]][2]))
    if len(ends) != 1:
        raise DSLError("relation terms must share source and target", loc.line, loc.col)


def parse_field(text):
    """Field tag from ``Q``, ``Fp(5)`` or the tag form ``Fp:5``."""
    text = text.strip()
    if text.startswith("Fp:"):
        text = f"Fp({text[3:]})"
    p = _Parser(text)
    tag = p.field_spec()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.describe()}", ["end of input"])
    return tag


def parse_workspace(text):
    ws = _Parser(text).workspace()
    _resolve_references(ws)
    return ws


def _resolve_references(ws):
    for m in ws.mors.values():
        for ref in (m.source, m.target):
            if ref not in ws.reps:
                raise DSLError(f"unresolved reference {ref!r}", m.loc.line, m.loc.col, sorted(ws.reps))
        if m.const == "id" and m.source != m.target:
            raise DSLError("id needs equal source and target", m.loc.line, m.loc.col)


# ---------------------------------------------------------------------------
# printing


def _fmt_scalar(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_matrix(M):
    return "[" + ", ".join("[" + ", ".join(_fmt_scalar(c) for c in row) + "]" for row in M) + "]"


def _fmt_combo(terms):
    out = []
    for k, (c, path) in enumerate(terms):
        p = ";".join(path)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = p if mag == 1 else f"{_fmt_scalar(mag)} {p}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def _fmt_arrow(a):
    return f"arrow {a[0]}: {format_label(a[1])} -> {format_label(a[2])}"


def _fmt_field(tag):
    return "Q" if tag == "Q" else f"Fp({tag[3:]})"


def pretty(ws):
    lines = []
    if ws.field:
        lines.append(f"field = {_fmt_field(ws.field)}")
    if ws.window:
        lines.append(f"window = {ws.window[0]}..{ws.window[1]}")
    c = ws.category
    lines.append("category {")
    kind = c.kind
    if kind == "nlinear":
        kind = f"nlinear(N={c.N})"
    elif kind == "cyclic":
        kind = f"cyclic(m={c.m})"
    lines.append(f"  kind = {kind}")
    if c.objects:
        lines.append("  objects = " + ", ".join(format_label(o) for o in c.objects))
    for a in c.arrows:
        lines.append("  " + _fmt_arrow(a))
    for terms in c.relations:
        lines.append(f"  relation = {_fmt_combo(terms)}")
    if c.zero_length is not None:
        lines.append("  relation = " + ";".join(["d"] * c.zero_length))
    if c.omit:
        lines.append("  omit = " + ", ".join(str(q) for q in c.omit))
    lines.append("}")
    a = ws.algebra
    if a.preset != "field":
        lines.append("algebra {")
        if a.preset:
            lines.append(f"  preset = {a.preset}")
        else:
            lines.append("  vertices = " + ", ".join(format_label(v) for v in a.vertices))
            for x in a.arrows:
                lines.append("  " + _fmt_arrow(x))
            for terms in a.relations:
                lines.append(f"  relation = {_fmt_combo(terms)}")
        lines.append("}")
    for r in ws.reps.values():
        if r.ctor:
            lines.append(f"rep {r.name} = {r.ctor[0]}({format_label(r.ctor[1])})")
            continue
        lines.append(f"rep {r.name} {{")
        for q, d in r.dims.items():
            d = "[" + ", ".join(map(str, d)) + "]" if isinstance(d, tuple) else str(d)
            lines.append(f"  at {format_label(q)}: dim {d}")
        for (q, b), M in r.actions.items():
            lines.append(f"  at {format_label(q)}: {b} = {_fmt_matrix(M)}")
        for key, M in r.maps.items():
            ref = key if isinstance(key, str) else f"{format_label(key[0])} -> {format_label(key[1])}"
            lines.append(f"  map {ref} = {_fmt_matrix(M)}")
        lines.append("}")
    for m in ws.mors.values():
        head = f"mor {m.name}: {m.source} -> {m.target}"
        if m.const:
            lines.append(f"{head} = {m.const}")
            continue
        lines.append(head + " {")
        for q, M in m.comps.items():
            lines.append(f"  at {format_label(q)} = {_fmt_matrix(M)}")
        lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# realization


def column_of(label):
    """Window column of an object label (None for names of finite objects)."""
    if isinstance(label, tuple):
        return label[0]
    if isinstance(label, int):
        return label
    return None


def _err(decl, message):
    return DSLError(message, decl.loc.line, decl.loc.col)


@dataclass
class Realized:
    workspace: Workspace
    cat: Any
    alg: Algebra
    reps: dict
    mors: dict
    window: Any

    def rep(self, name):
        if name not in self.reps:
            raise KeyError(f"no representation named {name!r}")
        return self.reps[name]

    def mor(self, name):
        if name not in self.mors:
            raise KeyError(f"no morphism named {name!r}")
        return self.mors[name]


def make_field(tag):
    return field_from_tag(tag) if tag else QQ


def make_algebra(decl, field):
    if decl.preset == "field":
        return field_algebra(field)
    if decl.preset == "dual":
        return dual_numbers(field)
    try:
        return bound_quiver_algebra(decl.vertices, decl.arrows, decl.relations, field)
    except ValueError as e:
        raise _err(decl, f"inadmissible algebra: {e}") from None


def _to_field(f, M):
    return tuple(tuple(f(c) for c in row) for row in M)


def _build_rep(decl, cat, alg):
    f = cat.field
    if decl.ctor:
        kind, q = decl.ctor
        if q not in cat:
            raise _err(decl, f"object {format_label(q)} is not in the realized category")
        if kind == "stalk":
            M = amodule(alg, {v: int(k == 0) for k, v in enumerate(alg.vertices)})
            return make_rep(cat, {q: M}, {}, alg, name=decl.name)
        F = free_rep(cat, alg, [(q, v) for v in alg.vertices])
        F.name = decl.name
        return F
    values = {}
    for q, d in decl.dims.items():
        if q not in cat:
            raise _err(decl, f"object {format_label(q)} is not in the realized category")
        dims = dict(zip(alg.vertices, d)) if isinstance(d, tuple) else None
        if dims is None:
            if len(alg.vertices) != 1:
                raise _err(decl, "give one dimension per coefficient vertex, as a list")
            dims = {alg.vertices[0]: d}
        acts = {b: _to_field(f, M) for (p, b), M in decl.actions.items() if p == q}
        values[q] = amodule(alg, dims, acts)
    for (p, b) in decl.actions:
        if p not in decl.dims:
            raise _err(decl, f"action at {format_label(p)} without a dimension")
    maps = {key: _to_field(f, M) for key, M in decl.maps.items()}
    return make_rep(cat, values, maps, alg, name=decl.name)


def _build_mor(decl, reps):
    X, Y = reps[decl.source], reps[decl.target]
    if decl.const == "id":
        return identity(X)
    if decl.const == "zero":
        return zero_morphism(X, Y)
    f = X.field
    return make_morphism(X, Y, {q: _to_field(f, M) for q, M in decl.comps.items()})


def realize(ws, window=None, field=None, only=None):
    """Build category, algebra, representations and morphisms.

    ``window`` overrides the declared one; ``field`` (a tag) applies when the
    workspace does not declare one.  ``only`` restricts which named reps and
    morphisms get built (with their dependencies).
    """
    f = make_field(ws.field or field)
    c = ws.category
    win = window or ws.window
    if c.windowed and win is None:
        win = (-6, 6) if c.kind != "za3" else (-8, 8)
    try:
        cat = build_category(c.spec(), win if c.windowed else None, f)
    except ValueError as e:
        raise _err(c, str(e)) from None
    alg = make_algebra(ws.algebra, f)
    need_reps = set(ws.reps) if only is None else set()
    need_mors = set(ws.mors) if only is None else set()
    for n in only or ():
        if n in ws.mors:
            need_mors.add(n)
            need_reps.update((ws.mors[n].source, ws.mors[n].target))
        elif n in ws.reps:
            need_reps.add(n)
        else:
            raise KeyError(f"no representation or morphism named {n!r}")
    reps, mors = {}, {}
    for name in ws.reps:
        if name in need_reps:
            d = ws.reps[name]
            try:
                reps[name] = _build_rep(d, cat, alg)
            except DSLError:
                raise
            except (ValueError, KeyError) as e:
                msg = e.args[0] if e.args else str(e)
                raise _err(d, f"rep {name}: {msg}") from None
    for name in ws.mors:
        if name in need_mors:
            d = ws.mors[name]
            try:
                mors[name] = _build_mor(d, reps)
            except (ValueError, KeyError) as e:
                msg = e.args[0] if e.args else str(e)
                raise _err(d, f"mor {name}: {msg}") from None
    return Realized(ws, cat, alg, reps, mors, win if c.windowed else None)


def nilpotency_hint(ws, field=None):
    """Nilpotency degree of the declared category, read off a small window."""
    c = ws.category
    if c.kind in ("linear", "cyclic"):
        return c.zero_length
    if c.kind == "nlinear":
        return c.N
    cat = build_category(c.spec(), (0, 10) if c.windowed else None, make_field(ws.field or field))
    return cat.nilpotency_degree


__all__ = [
    "DSLError", "Workspace", "CategoryDecl", "AlgebraDecl", "RepDecl", "MorDecl",
    "parse_workspace", "parse_field", "pretty", "realize", "Realized", "tokenize", "column_of",
    "nilpotency_hint", "make_field",
]
