"""Quiver-presented k-linear categories realized on finite windows.

A category is given by a quiver with admissible relations.  Infinite
families (the linear quiver, its N-truncated version, and the repetitive
quiver ZA3) are realized on a finite window of columns; the cyclic quivers
are realized in full.

Paths are tuples of arrow indices written in diagrammatic order: the path
``(a, b)`` means "first a, then b", i.e. the composite ``b ∘ a``.  Hom
bases consist of reduced paths sorted by (length, arrow-name sequence).
"""

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, NamedTuple

from .exactlin import QQ, Matrix, rref_rows, solve


class Arrow(NamedTuple):
    name: str
    source: Any
    target: Any


class Relation(NamedTuple):
    source: Any
    target: Any
    terms: tuple  # of (coefficient, path of arrow indices)


class WindowError(RuntimeError):
    """A computation needed objects beyond the realized window."""


# ---------------------------------------------------------------------------
# specifications


INFINITE_KINDS = ("linear", "nlinear", "za3")


@dataclass(frozen=True)
class QuiverSpec:
    """What the user declares: a kind plus the data it needs.

    For ``finite`` the objects, arrows and relations are explicit, with
    relation terms ``(coefficient, (arrow name, ...))``.  The linear and
    cyclic kinds take ``zero_length``, the number of consecutive arrows
    whose composite vanishes (None means no relations).  ``omitted`` lists
    starting objects whose relation is dropped; this only exists to build
    deliberately broken examples.
    """

    kind: str
    objects: tuple = ()
    arrows: tuple = ()
    relations: tuple = ()
    zero_length: Any = None
    m: Any = None
    omitted: frozenset = frozenset()

    @classmethod
    def finite(cls, objects, arrows, relations=()):
        arrows = tuple(Arrow(*a) for a in arrows)
        rels = tuple(
            tuple((Fraction(c), tuple(p)) for c, p in rel) for rel in relations
        )
        return cls("finite", tuple(objects), arrows, rels)

    @classmethod
    def linear(cls, zero_length=2, omitted=()):
        return cls("linear", zero_length=zero_length, omitted=frozenset(omitted))

    @classmethod
    def nlinear(cls, N):
        if N < 2:
            raise ValueError("N-complexes need N >= 2")
        return cls("nlinear", zero_length=N)

    @classmethod
    def cyclic(cls, m, zero_length=2):
        if m < 1:
            raise ValueError("cyclic quiver needs m >= 1")
        return cls("cyclic", m=m, zero_length=zero_length)

    @classmethod
    def za3(cls):
        return cls("za3")

    @property
    def infinite(self):
        return self.kind in INFINITE_KINDS

    def describe(self):
        if self.kind == "nlinear":
            return f"nlinear(N={self.zero_length})"
        if self.kind == "cyclic":
            return f"cyclic(m={self.m})"
        return self.kind

    def realize(self, window=None):
        if self.kind in ("linear", "nlinear"):
            lo, hi = window or (-6, 6)
            return _realize_linear(self, lo, hi)
        if self.kind == "za3":
            lo, hi = window or (-8, 8)
            return _realize_za3(lo, hi)
        if self.kind == "cyclic":
            return _realize_cyclic(self)
        if self.kind == "finite":
            return _realize_finite(self)
        raise ValueError(f"unknown kind {self.kind!r}")


@dataclass
class Presentation:
    """A finite quiver with relations, plus column data for windows."""

    spec: QuiverSpec
    objects: list
    arrows: list
    relations: list
    window: Any = None
    columns: dict = dc_field(default_factory=dict)
    opposite: bool = False

    def dual(self):
        arrows = [Arrow(a.name, a.target, a.source) for a in self.arrows]
        rels = [
            Relation(r.target, r.source, tuple((c, tuple(reversed(p))) for c, p in r.terms))
            for r in self.relations
        ]
        return Presentation(self.spec, list(self.objects), arrows, rels,
                            self.window, dict(self.columns), not self.opposite)


def _realize_linear(spec, lo, hi):
    if hi - lo < 1:
        raise ValueError("window too small")
    objects = list(range(lo, hi + 1))
    arrows = [Arrow(f"d{q}", q, q - 1) for q in range(lo + 1, hi + 1)]
    idx = {a.source: i for i, a in enumerate(arrows)}
    rels = []
    L = spec.zero_length
    if L is not None:
        for q in range(lo + L, hi + 1):
            if q in spec.omitted:
                continue
            path = tuple(idx[q - k] for k in range(L))
            rels.append(Relation(q, q - L, ((Fraction(1), path),)))
    return Presentation(spec, objects, arrows, rels, (lo, hi), {q: q for q in objects})


def _realize_cyclic(spec):
    m = spec.m
    objects = list(range(m))
    arrows = [Arrow(f"d{q}", q, (q - 1) % m) for q in range(m)]
    rels = []
    L = spec.zero_length
    if L is not None:
        for q in range(m):
            path = tuple((q - k) % m for k in range(L))
            rels.append(Relation(q, (q - L) % m, ((Fraction(1), path),)))
    return Presentation(spec, objects, arrows, rels)


def _za3_objects(lo, hi):
    return [(x, y) for x in range(lo, hi + 1) for y in (1, 0, -1) if (x + y) % 2 == 1]


def _realize_za3(lo, hi):
    if hi - lo < 2:
        raise ValueError("window too small")
    objects = _za3_objects(lo, hi)
    oset = set(objects)
    arrows = []
    for (x, y) in objects:
        targets = [(x + 1, 0)] if y != 0 else [(x + 1, 1), (x + 1, -1)]
        for t in targets:
            if t in oset:
                arrows.append(Arrow(f"({x},{y})>({t[0]},{t[1]})", (x, y), t))
    aidx = {(a.source, a.target): i for i, a in enumerate(arrows)}
    rels = []
    one = Fraction(1)
    for (x, y) in objects:
        if y != 0:
            mid, end = (x + 1, 0), (x + 2, y)
            if end in oset:
                rels.append(Relation((x, y), end, ((one, (aidx[(x, y), mid], aidx[mid, end])),)))
        else:
            end = (x + 2, 0)
            if end in oset:
                terms = tuple(
                    (one, (aidx[(x, y), (x + 1, s)], aidx[(x + 1, s), end])) for s in (1, -1)
                )
                rels.append(Relation((x, y), end, terms))
    return Presentation(QuiverSpec.za3(), objects, arrows, rels, (lo, hi),
                        {o: o[0] for o in objects})


def _realize_finite(spec):
    objects = list(spec.objects)
    oset = set(objects)
    arrows = list(spec.arrows)
    names = {}
    for i, a in enumerate(arrows):
        if a.source not in oset or a.target not in oset:
            raise ValueError(f"arrow {a.name} has an endpoint outside the object list")
        if a.name in names:
            raise ValueError(f"duplicate arrow name {a.name}")
        names[a.name] = i
    rels = []
    for rel in spec.relations:
        terms = []
        ends = set()
        for c, names_path in rel:
            if len(names_path) < 2:
                raise ValueError("relation terms must be paths of length >= 2")
            try:
                path = tuple(names[n] for n in names_path)
            except KeyError as e:
                raise ValueError(f"unknown arrow {e.args[0]} in relation") from None
            for a, b in zip(path, path[1:]):
                if arrows[a].target != arrows[b].source:
                    raise ValueError(f"path {';'.join(names_path)} is not composable")
            ends.add((arrows[path[0]].source, arrows[path[-1]].target))
            terms.append((Fraction(c), path))
        if len(ends) != 1:
            raise ValueError("relation terms must share source and target")
        s, t = ends.pop()
        rels.append(Relation(s, t, tuple(terms)))
    return Presentation(spec, objects, arrows, rels)


# ---------------------------------------------------------------------------
# path reduction


class _Reduction:
    """Normal forms of all paths of length <= B modulo (I + paths of length > B)."""

    def __init__(self, pres, field, B):
        self.B = B
        arrows = pres.arrows
        names = [a.name for a in arrows]
        out = {o: [] for o in pres.objects}
        for i, a in enumerate(arrows):
            out[a.source].append(i)
        for o in out:
            out[o].sort(key=lambda i: names[i])
        # paths[(p, q)] lists paths of length <= B from p to q
        paths = {}
        from_p = {}
        for p in pres.objects:
            layer = [((), p)]
            allp = [((), p)]
            for _ in range(B):
                nxt = []
                for path, end in layer:
                    for i in out[end]:
                        nxt.append((path + (i,), arrows[i].target))
                layer = nxt
                allp.extend(nxt)
                if not nxt:
                    break
            from_p[p] = allp
            for path, end in allp:
                paths.setdefault((p, end), []).append(path)
        to_q = {}
        for (p, q), lst in paths.items():
            to_q.setdefault(q, []).extend((p, u) for u in lst)

        def key(path):
            return (len(path), [names[i] for i in path])

        # ideal generators u ρ v, truncated at length B
        gens = {}
        for rel in pres.relations:
            minlen = min(len(pth) for _, pth in rel.terms)
            if minlen > B:
                continue
            for p, u in to_q.get(rel.source, ()):
                if len(u) + minlen > B:
                    continue
                for v, end in from_p[rel.target]:
                    if len(u) + len(v) + minlen > B:
                        continue
                    vec = {}
                    for c, pth in rel.terms:
                        full = u + pth + v
                        if len(full) <= B:
                            c = field(c)
                            vec[full] = field.norm(vec.get(full, 0) + c)
                    vec = {k: x for k, x in vec.items() if x}
                    if vec:
                        gens.setdefault((p, end), []).append(vec)
        self.basis = {}
        self.nf = {}
        self.top_nonzero = None
        for pair, plist in paths.items():
            cols = sorted(plist, key=key, reverse=True)
            cidx = {pt: j for j, pt in enumerate(cols)}
            rows = []
            for g in gens.get(pair, ()):
                r = [field.zero] * len(cols)
                for pt, x in g.items():
                    r[cidx[pt]] = x
                rows.append(r)
            rrows, piv = rref_rows(rows, len(cols), field)
            pset = set(piv)
            basis = sorted((pt for pt in cols if cidx[pt] not in pset), key=key)
            bidx = {pt: i for i, pt in enumerate(basis)}
            nf = {}
            for pt in basis:
                nf[pt] = {bidx[pt]: field.one}
            for row, pc in zip(rrows, piv):
                vec = {}
                for j, x in enumerate(row):
                    if x and j != pc:
                        vec[bidx[cols[j]]] = field.norm(-x)
                nf[cols[pc]] = vec
            if basis:
                self.basis[pair] = tuple(basis)
            self.nf[pair] = nf
            if self.top_nonzero is None:
                for pt in cols:
                    if len(pt) == B and nf[pt]:
                        self.top_nonzero = (pair, pt)
                        break


def _nilpotence_cap(pres):
    if pres.window is not None:
        lo, hi = pres.window
        return hi - lo
    return max(2 * len(pres.objects), 8)


class Element(NamedTuple):
    """A morphism of the category: coefficients over hom_basis(source, target)."""

    source: Any
    target: Any
    coeffs: tuple


def build_category(spec, window=None, field=QQ, max_length=None):
    """Realize ``spec`` on ``window`` and reduce paths modulo the relations."""
    pres = spec.realize(window) if isinstance(spec, QuiverSpec) else spec
    return KCategory(pres, field, max_length)


class KCategory:
    def __init__(self, pres, field=QQ, max_length=None):
        self.presentation = pres
        self.spec = pres.spec
        self.field = field
        self.objects = list(pres.objects)
        self._oindex = {o: i for i, o in enumerate(self.objects)}
        self.arrows = list(pres.arrows)
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        self.relations = list(pres.relations)
        self.window = pres.window
        self.columns = pres.columns
        self.is_opposite = pres.opposite
        cap = max_length if max_length is not None else _nilpotence_cap(pres)
        self.length_cap = cap
        red = None
        N = None
        for B in range(1, cap + 1):
            red = _Reduction(pres, field, B)
            if red.top_nonzero is None:
                N = B
                break
        self.nilpotency_degree = N
        self.nilpotence_witness = None
        if N is None:
            if red is None:
                red = _Reduction(pres, field, 0)
            pair, path = red.top_nonzero
            self.nilpotence_witness = {
                "source": pair[0], "target": pair[1],
                "path": [self.arrows[i].name for i in path], "length": len(path),
            }
        self._bound = red.B if red is not None else 0
        self._basis = red.basis
        self._nf = red.nf
        self._mult = {}
        self._out = {o: [] for o in self.objects}
        self._in = {o: [] for o in self.objects}
        for (p, q) in self._basis:
            self._out[p].append(q)
            self._in[q].append(p)
        for o in self.objects:
            self._out[o].sort(key=self._oindex.__getitem__)
            self._in[o].sort(key=self._oindex.__getitem__)
        self._serre = None
        self._opp = None

    # ------------------------------------------------------------------
    # hom spaces

    def __repr__(self):
        w = f" window={self.window}" if self.window else ""
        return f"KCategory({self.spec.describe()}{w}, {self.field.tag})"

    def index(self, obj):
        return self._oindex[obj]

    def __contains__(self, obj):
        return obj in self._oindex

    def hom_basis(self, p, q):
        return self._basis.get((p, q), ())

    def dim(self, p, q):
        return len(self._basis.get((p, q), ()))

    def out_support(self, p):
        """Objects q with Q(p, q) nonzero, p included."""
        return self._out[p]

    def in_support(self, q):
        return self._in[q]

    def path_names(self, path):
        return [self.arrows[i].name for i in path]

    def path_nf(self, p, q, path):
        """Coordinates of a path from p to q over hom_basis(p, q)."""
        if len(path) > self._bound or (
            self.nilpotency_degree is not None and len(path) >= self.nilpotency_degree
        ):
            return {}
        return self._nf.get((p, q), {}).get(path, {})

    def mult(self, p, q, r):
        """Structure constants: table[i][j] = coordinates of g_i ∘ f_j."""
        key = (p, q, r)
        tab = self._mult.get(key)
        if tab is None:
            fb = self.hom_basis(p, q)
            gb = self.hom_basis(q, r)
            tab = [[self.path_nf(p, r, f + g) for f in fb] for g in gb]
            self._mult[key] = tab
        return tab

    def identity(self, p):
        basis = self.hom_basis(p, p)
        f = self.field
        return Element(p, p, tuple(f.one if b == () else f.zero for b in basis))

    def zero(self, p, q):
        return Element(p, q, (self.field.zero,) * self.dim(p, q))

    def path(self, names, source=None):
        """The element given by a path of arrow names (diagrammatic order)."""
        if not names:
            return self.identity(source)
        idx = tuple(self.arrow_index[n] for n in names)
        for a, b in zip(idx, idx[1:]):
            if self.arrows[a].target != self.arrows[b].source:
                raise ValueError("path not composable")
        p, q = self.arrows[idx[0]].source, self.arrows[idx[-1]].target
        nf = self.path_nf(p, q, idx)
        f = self.field
        return Element(p, q, tuple(nf.get(i, f.zero) for i in range(self.dim(p, q))))

    def arrow(self, name):
        return self.path([name])

    def compose(self, g, f):
        """g ∘ f for f: p -> q and g: q -> r."""
        if f.target != g.source:
            raise ValueError(f"cannot compose: {f.target!r} != {g.source!r}")
        p, q, r = f.source, f.target, g.target
        fld = self.field
        out = [fld.zero] * self.dim(p, r)
        tab = self.mult(p, q, r)
        for i, gi in enumerate(g.coeffs):
            if not gi:
                continue
            row = tab[i]
            for j, fj in enumerate(f.coeffs):
                if not fj:
                    continue
                c = gi * fj
                for k, x in row[j].items():
                    out[k] = fld.norm(out[k] + c * x)
        return Element(p, r, tuple(out))

    # ------------------------------------------------------------------
    # windows

    def column(self, obj):
        return self.columns.get(obj)

    def in_core(self, obj):
        """True when every hom space touching obj is fully realized."""
        if self.window is None:
            return True
        N = self.nilpotency_degree
        if N is None:
            return False
        lo, hi = self.window
        c = self.columns[obj]
        return lo + N - 1 <= c <= hi - N + 1

    def in_serre_domain(self, obj):
        if self.window is None:
            return True
        N = self.nilpotency_degree
        if N is None:
            return False
        lo, hi = self.window
        c = self.columns[obj]
        return lo + 2 * (N - 1) <= c <= hi - 2 * (N - 1)

    def core(self):
        return [o for o in self.objects if self.in_core(o)]

    def require_core(self, objs, what="computation"):
        bad = [o for o in objs if not self.in_core(o)]
        if bad:
            N = self.nilpotency_degree or 1
            raise WindowError(
                f"{what} needs object {bad[0]!r} outside the window core {self.window}; "
                f"pad the window by at least {N} more columns"
            )

    # ------------------------------------------------------------------

    @property
    def serre(self):
        if self._serre is None:
            res = find_serre(self)
            if isinstance(res, SerreFailure):
                raise RuntimeError(f"no Serre functor: {res.reason} (witness {res.witness!r})")
            self._serre = res
        return self._serre

    def opposite(self):
        if self._opp is None:
            opp = KCategory(self.presentation.dual(), self.field, self.length_cap)
            opp._opp = self
            self._opp = opp
        return self._opp

    def same_as(self, other):
        return other is self or (
            self.field == other.field
            and self.spec == other.spec
            and self.window == other.window
            and self.is_opposite == other.is_opposite
        )

    def to_json(self):
        from .labels import format_label
        hom = {}
        for (p, q), b in sorted(self._basis.items(), key=lambda t: (self.index(t[0][0]), self.index(t[0][1]))):
            hom.setdefault(format_label(p), {})[format_label(q)] = [self.path_names(x) for x in b]
        data = {
            "kind": self.spec.describe(),
            "field": self.field.tag,
            "window": list(self.window) if self.window else None,
            "objects": [format_label(o) for o in self.objects],
            "hom_basis": hom,
            "nilpotency_degree": self.nilpotency_degree,
        }
        return data


# ---------------------------------------------------------------------------
# Serre functor


@dataclass
class SerreFailure:
    reason: str
    witness: Any = None


@dataclass
class SerreData:
    cat: Any
    object_map: dict
    inverse: dict
    trace: dict  # p -> coefficients of a linear form on Q(p, Sp)
    arrow_map: dict = dc_field(default_factory=dict)

    def __call__(self, p):
        return self.object_map[p]

    def inv(self, q):
        try:
            return self.inverse[q]
        except KeyError:
            raise WindowError(f"S^-1({q!r}) is not realized in the window") from None

    def pairing(self, p, q):
        """Matrix of <β, α> = t_p(β ∘ α): rows β in Q(q, Sp), columns α in Q(p, q)."""
        return _pairing_matrix(self.cat, p, q, self.object_map[p], self.trace[p])


def _pairing_matrix(cat, p, q, sp, t):
    f = cat.field
    tab = cat.mult(p, q, sp)
    rows = []
    for row in tab:
        rows.append([f.norm(sum(t[k] * x for k, x in cell.items())) for cell in row])
    return Matrix.trusted(f, rows, cat.dim(p, q))


def _trace_candidates(cat, p, d, seed):
    f = cat.field
    for k in reversed(range(d)):
        yield tuple(f.one if i == k else f.zero for i in range(d))
    yield tuple(f.one for _ in range(d))
    rng = random.Random(seed)
    hi = f.characteristic - 1 if f.characteristic else 7
    for _ in range(24):
        yield tuple(f(rng.randint(0, hi)) for _ in range(d))


def _find_trace(cat, p, y, seed=0):
    d = cat.dim(p, y)
    if d == 0:
        return None
    qs = [q for q in cat.out_support(p) if cat.dim(q, y)]
    for t in _trace_candidates(cat, p, d, seed):
        if all(_pairing_matrix(cat, p, q, y, t).is_invertible() for q in qs):
            return t
    return None


def _dim_profile_out(cat, p):
    return {q: cat.dim(p, q) for q in cat.out_support(p)}


def _dim_profile_in(cat, y):
    return {q: cat.dim(q, y) for q in cat.in_support(y)}


def find_serre(cat, hint=None):
    """Search for a Serre functor; returns SerreData or SerreFailure."""
    if cat.nilpotency_degree is None:
        return SerreFailure("pseudoradical is not nilpotent", cat.nilpotence_witness)
    domain = [p for p in cat.objects if cat.in_serre_domain(p)]
    candidates = [y for y in cat.objects if cat.in_core(y)]
    if not domain:
        return SerreFailure("window too small for a Serre search", cat.window)
    in_prof = {y: _dim_profile_in(cat, y) for y in candidates}
    options = {}
    for p in domain:
        prof = _dim_profile_out(cat, p)
        pool = [hint[p]] if hint is not None and p in hint else candidates
        opts = []
        for y in pool:
            if y in in_prof and in_prof[y] == prof:
                t = _find_trace(cat, p, y, seed=cat.index(p))
                if t is not None:
                    opts.append((y, t))
        if not opts:
            why = "no object with matching hom dimensions and a nondegenerate pairing"
            return SerreFailure(why, p)
        options[p] = opts
    # injective assignment, deterministic backtracking
    assignment = {}
    used = set()

    def backtrack(i):
        if i == len(domain):
            return True
        p = domain[i]
        for y, t in options[p]:
            if y in used:
                continue
            assignment[p] = (y, t)
            used.add(y)
            if backtrack(i + 1):
                return True
            used.discard(y)
            del assignment[p]
        return False

    if not backtrack(0):
        return SerreFailure("no injective assignment of Serre images", domain[0])
    if cat.window is None and len(used) != len(cat.objects):
        return SerreFailure("Serre map is not surjective", None)
    omap = {p: y for p, (y, _) in assignment.items()}
    trace = {p: t for p, (_, t) in assignment.items()}
    data = SerreData(cat, omap, {y: p for p, y in omap.items()}, trace)
    err = _serre_on_arrows(cat, data)
    if err is not None:
        return err
    return data


def _linear_form(cat, t, p, sp, vec):
    """t applied to an element of Q(p, Sp) given as a dict of coordinates."""
    f = cat.field
    return f.norm(sum(t[k] * x for k, x in vec.items()))


def _compose_dicts(cat, p, q, r, g, fvec):
    """Compose coordinate dicts: g over Q(q, r), fvec over Q(p, q)."""
    fld = cat.field
    tab = cat.mult(p, q, r)
    out = {}
    for i, gi in g.items():
        for j, fj in fvec.items():
            for k, x in tab[i][j].items():
                v = fld.norm(out.get(k, 0) + gi * fj * x)
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return out


def _serre_on_arrows(cat, data):
    """Solve <S(f)∘β′, α>_p = <β′, α∘f>_{p′} for every arrow f: p′ -> p."""
    fld = cat.field
    S = data.object_map
    for a in cat.arrows:
        p1, p = a.source, a.target
        if p1 not in S or p not in S:
            continue
        sp1, sp = S[p1], S[p]
        d = cat.dim(sp1, sp)
        fa = {i: x for i, x in enumerate(cat.arrow(a.name).coeffs) if x}
        rows, rhs = [], []
        for q in cat.out_support(p):
            for ib, _ in enumerate(cat.hom_basis(q, sp1)):
                for ia, _ in enumerate(cat.hom_basis(p, q)):
                    beta_alpha = cat.mult(p, q, sp1)[ib][ia]  # β′∘α in Q(p, Sp′)
                    row = []
                    for k in range(d):
                        comp = _compose_dicts(cat, p, sp1, sp, {k: fld.one}, beta_alpha)
                        row.append(_linear_form(cat, data.trace[p], p, sp, comp))
                    alpha_f = _compose_dicts(cat, p1, p, q, {ia: fld.one}, fa)
                    rhs_vec = _compose_dicts(cat, p1, q, sp1, {ib: fld.one}, alpha_f)
                    rows.append(row)
                    rhs.append(_linear_form(cat, data.trace[p1], p1, sp1, rhs_vec))
        if d == 0:
            if any(rhs):
                return SerreFailure(f"naturality fails along arrow {a.name}", a.source)
            data.arrow_map[a.name] = Element(sp1, sp, ())
            continue
        M = Matrix.trusted(fld, rows, d) if rows else Matrix.zeros(fld, 0, d)
        x = solve(M, rhs) if rows else (fld.zero,) * d
        if x is None:
            return SerreFailure(f"naturality fails along arrow {a.name}", a.source)
        data.arrow_map[a.name] = Element(sp1, sp, tuple(x))
    return None


def check_serre_naturality(cat, data):
    """Verify both naturality identities on basis elements; returns a list of failures."""
    fld = cat.field
    S = data.object_map
    bad = []
    # first variable, along each arrow f: p′ -> p
    for a in cat.arrows:
        p1, p = a.source, a.target
        if a.name not in data.arrow_map:
            continue
        sf = {i: x for i, x in enumerate(data.arrow_map[a.name].coeffs) if x}
        fa = {i: x for i, x in enumerate(cat.arrow(a.name).coeffs) if x}
        sp1, sp = S[p1], S[p]
        for q in cat.out_support(p):
            for ib in range(cat.dim(q, sp1)):
                for ia in range(cat.dim(p, q)):
                    lhs = _compose_dicts(cat, q, sp1, sp, sf, {ib: fld.one})
                    lhs = _compose_dicts(cat, p, q, sp, lhs, {ia: fld.one})
                    af = _compose_dicts(cat, p1, p, q, {ia: fld.one}, fa)
                    rhs = _compose_dicts(cat, p1, q, sp1, {ib: fld.one}, af)
                    if _linear_form(cat, data.trace[p], p, sp, lhs) != _linear_form(cat, data.trace[p1], p1, sp1, rhs):
                        bad.append(("N1", a.name, q))
    # second variable, along each arrow g: q -> q′
    for p in S:
        sp = S[p]
        for a in cat.arrows:
            q, q1 = a.source, a.target
            ga = {i: x for i, x in enumerate(cat.arrow(a.name).coeffs) if x}
            for ib in range(cat.dim(q1, sp)):
                for ia in range(cat.dim(p, q)):
                    ga_alpha = _compose_dicts(cat, p, q, q1, ga, {ia: fld.one})
                    lhs = _compose_dicts(cat, p, q1, sp, {ib: fld.one}, ga_alpha)
                    beta_g = _compose_dicts(cat, q, q1, sp, {ib: fld.one}, ga)
                    rhs = _compose_dicts(cat, p, q, sp, beta_g, {ia: fld.one})
                    if lhs != rhs:
                        bad.append(("N2", a.name, p))
    return bad


# ---------------------------------------------------------------------------
# setup validation


def has_cycles(cat):
    """Directed cycle in the graph with an edge p -> q whenever r(p, q) != 0."""
    edges = {}
    for (p, q), basis in cat._basis.items():
        if p != q or any(len(b) > 0 for b in basis):
            edges.setdefault(p, []).append(q)
    color = {}
    for start in cat.objects:
        if start in color:
            continue
        stack = [(start, iter(edges.get(start, ())))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                continue
            c = color.get(nxt)
            if c == 1:
                return True
            if c is None:
                color[nxt] = 1
                stack.append((nxt, iter(edges.get(nxt, ()))))
    return False


@dataclass
class Verdict:
    passed: bool
    witness: Any = None
    detail: str = ""

    def to_json(self):
        from .labels import jsonable
        return {"pass": self.passed, "witness": jsonable(self.witness), "detail": self.detail}


@dataclass
class SetupReport:
    preadditivity: Verdict
    hom_finiteness: Verdict
    local_boundedness: Verdict
    serre: Verdict
    strong_retraction: Verdict
    nilpotence: Verdict
    has_cycles: bool
    nilpotency_degree: Any = None
    serre_data: Any = None

    CONDITIONS = ("preadditivity", "hom_finiteness", "local_boundedness", "serre",
                  "strong_retraction", "nilpotence")

    @property
    def all_pass(self):
        return all(getattr(self, c).passed for c in self.CONDITIONS)

    def failures(self):
        return [c for c in self.CONDITIONS if not getattr(self, c).passed]

    def to_json(self):
        from .labels import format_label
        out = {c: getattr(self, c).to_json() for c in self.CONDITIONS}
        out["has_cycles"] = self.has_cycles
        out["nilpotence_degree"] = self.nilpotency_degree
        out["all_pass"] = self.all_pass
        if self.serre_data is not None:
            out["serre_map"] = {
                format_label(p): format_label(q) for p, q in self.serre_data.object_map.items()
            }
        return out


def _check_strong_retraction(cat):
    # g ∘ f must have no identity component when f, g are radical or p != q
    for (p, q), fb in cat._basis.items():
        gb = cat.hom_basis(q, p)
        hb = cat.hom_basis(p, p)
        if not gb or () not in hb:
            continue
        idpos = hb.index(())
        tab = cat.mult(p, q, p)
        for i, g in enumerate(gb):
            for j, f in enumerate(fb):
                if p == q and (not f or not g):
                    continue
                if tab[i][j].get(idpos):
                    return Verdict(False, {"object": p, "via": q},
                                   "a composite of radical maps has an identity component")
    return Verdict(True)


def _check_local_boundedness(cat):
    if cat.window is None:
        return Verdict(True, None, "finitely many objects")
    lo, hi = cat.window
    span = hi - lo
    mid_lo, mid_hi = lo + span // 3, hi - span // 3
    for o in cat.objects:
        c = cat.columns[o]
        if not (mid_lo <= c <= mid_hi):
            continue
        for q in list(cat.out_support(o)) + list(cat.in_support(o)):
            cq = cat.columns[q]
            if cq in (lo, hi):
                return Verdict(False, o, f"support of {o!r} reaches the window edge {cq}")
    return Verdict(True)


def validate_setup(cat, hint=None):
    """Check every standing hypothesis on the realized window."""
    N = cat.nilpotency_degree
    cyc = has_cycles(cat)
    if N is None:
        nil = Verdict(False, cat.nilpotence_witness,
                      f"a path of length {cat.nilpotence_witness['length']} is nonzero")
    else:
        nil = Verdict(True, None, f"r^{N} = 0")
    if N is None and (cyc or cat.window is None):
        homfin = Verdict(False, cat.nilpotence_witness, "nonzero paths of unbounded length")
    else:
        homfin = Verdict(True)
    loc = _check_local_boundedness(cat)
    serre_data = None
    res = find_serre(cat, hint)
    if isinstance(res, SerreFailure):
        serre = Verdict(False, res.witness, res.reason)
    else:
        bad = check_serre_naturality(cat, res)
        if bad:
            serre = Verdict(False, bad[0], "naturality check failed")
        else:
            serre_data = res
            serre = Verdict(True)
            cat._serre = res
    sr = _check_strong_retraction(cat)
    return SetupReport(Verdict(True, None, "by construction"), homfin, loc, serre, sr, nil,
                       cyc, N, serre_data)
