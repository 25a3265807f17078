"""Finitely supported representations Q -> mod(A) and their morphisms.

A representation is stored on the vertices ``(q, v)`` of the product of
the category Q with the quiver of the coefficient algebra A.  Maps along
arrows of Q are recorded per A-vertex and maps along arrows of A per object
of Q; the two families commute.  A-modules are representations over the
one-object category with the same coefficient algebra.

Matrices act on column vectors, so a map ``V -> W`` is ``dim W x dim V``.
"""

from functools import lru_cache

from .category import KCategory, QuiverSpec, build_category
from .exactlin import (
    Matrix, QuotientMap, left_inverse, rref_rows, sparse_kernel,
)


POINT = "*"


# ---------------------------------------------------------------------------
# coefficient algebras


class Algebra:
    """A finite-dimensional coefficient algebra presented by a bound quiver.

    The ground field is the bound quiver with one vertex and no arrows.
    """

    def __init__(self, cat, name="A", gldim_finite=None):
        if cat.nilpotency_degree is None:
            raise ValueError("coefficient algebra relations are not admissible (radical not nilpotent)")
        self.cat = cat
        self.name = name
        self.field = cat.field
        self.vertices = cat.objects
        self.arrows = cat.arrows
        self.is_field = len(cat.objects) == 1 and not cat.arrows
        self._gldim_finite = gldim_finite
        self._opp = None

    def __repr__(self):
        return f"Algebra({self.name}, {self.field.tag})"

    def index(self, v):
        return self.cat.index(v)

    def dim(self):
        return sum(self.cat.dim(v, w) for v in self.vertices for w in self.vertices)

    def opposite(self):
        if self._opp is None:
            self._opp = Algebra(self.cat.opposite(), self.name + "^op", self._gldim_finite)
            self._opp._opp = self
        return self._opp

    def same_as(self, other):
        return self is other or (self.cat.same_as(other.cat))

    @property
    def gldim_finite(self):
        if self._gldim_finite is None:
            from .homology import global_dimension
            self._gldim_finite = global_dimension(self) is not None
        return self._gldim_finite


@lru_cache(maxsize=None)
def point_category(field):
    return build_category(QuiverSpec.finite([POINT], []), field=field)


@lru_cache(maxsize=None)
def field_algebra(field):
    return Algebra(point_category(field), "k", gldim_finite=True)


def dual_numbers(field):
    spec = QuiverSpec.finite([POINT], [("x", POINT, POINT)], [[(1, ("x", "x"))]])
    return Algebra(build_category(spec, field=field), "k[x]/(x^2)", gldim_finite=False)


def bound_quiver_algebra(vertices, arrows, relations, field, name="A", gldim_finite=None):
    spec = QuiverSpec.finite(vertices, arrows, relations)
    return Algebra(build_category(spec, field=field), name, gldim_finite)


# ---------------------------------------------------------------------------
# representations


class RelationError(ValueError):
    def __init__(self, message, relation=None, residual=None):
        super().__init__(message)
        self.relation = relation
        self.residual = residual


class Representation:
    """An object of Q,A-Mod with finite support."""

    def __init__(self, cat, alg, dims, qmaps=None, amaps=None, check=True, name=None):
        self.cat = cat
        self.alg = alg
        self.field = cat.field
        self.name = name
        self._dims = {o: n for o, n in dims.items() if n}
        for (q, v) in self._dims:
            if q not in cat:
                raise ValueError(f"object {q!r} is not realized in {cat}")
        self._qmaps = {}
        for (a, v), M in (qmaps or {}).items():
            arr = cat.arrows[a]
            s, t = self.dim((arr.source, v)), self.dim((arr.target, v))
            if s and t and not M.is_zero():
                if M.shape != (t, s):
                    raise ValueError(f"arrow {arr.name} needs a {t}x{s} matrix, got {M.shape}")
                self._qmaps[(a, v)] = M
        self._amaps = {}
        for (q, b), M in (amaps or {}).items():
            arr = alg.arrows[b]
            s, t = self.dim((q, arr.source)), self.dim((q, arr.target))
            if s and t and not M.is_zero():
                if M.shape != (t, s):
                    raise ValueError(f"A-arrow {arr.name} at {q!r} needs a {t}x{s} matrix")
                self._amaps[(q, b)] = M
        self._pm = {}
        self._vertices = None
        if check:
            self.check()

    # -- basic data --------------------------------------------------------

    def dim(self, o):
        return self._dims.get(o, 0)

    def dim_at(self, q):
        """Total dimension of the value at q."""
        return sum(self.dim((q, v)) for v in self.alg.vertices)

    @property
    def total_dim(self):
        return sum(self._dims.values())

    def vertices(self):
        if self._vertices is None:
            c, a = self.cat, self.alg
            self._vertices = sorted(self._dims, key=lambda o: (c.index(o[0]), a.index(o[1])))
        return self._vertices

    def support(self):
        seen = []
        for (q, _) in self.vertices():
            if not seen or seen[-1] != q:
                seen.append(q)
        return seen

    def dim_vector(self):
        return {q: self.dim_at(q) for q in self.support()}

    def is_zero(self):
        return not self._dims

    def qmap(self, a, v):
        M = self._qmaps.get((a, v))
        if M is None:
            arr = self.cat.arrows[a]
            return Matrix.zeros(self.field, self.dim((arr.target, v)), self.dim((arr.source, v)))
        return M

    def amap(self, q, b):
        M = self._amaps.get((q, b))
        if M is None:
            arr = self.alg.arrows[b]
            return Matrix.zeros(self.field, self.dim((q, arr.target)), self.dim((q, arr.source)))
        return M

    def arrow_maps(self):
        """Yield (source vertex, target vertex, matrix) for every arrow of Q x A."""
        for a, arr in enumerate(self.cat.arrows):
            for v in self.alg.vertices:
                s, t = (arr.source, v), (arr.target, v)
                if self.dim(s) or self.dim(t):
                    yield ("Q", a, v), s, t, self.qmap(a, v)
        for b, arr in enumerate(self.alg.arrows):
            for q in self.support():
                s, t = (q, arr.source), (q, arr.target)
                if self.dim(s) or self.dim(t):
                    yield ("A", q, b), s, t, self.amap(q, b)

    # -- actions of basis paths -------------------------------------------

    def qpath(self, p, path, v):
        """Matrix of a Q-path from p (arrow indices, diagrammatic) at A-vertex v."""
        key = ("Q", p, path, v)
        M = self._pm.get(key)
        if M is None:
            if not path:
                M = Matrix.identity(self.field, self.dim((p, v)))
            else:
                M = self.qpath(p, path[:-1], v)
                M = self.qmap(path[-1], v) @ M
            self._pm[key] = M
        return M

    def apath(self, q, v, path):
        key = ("A", q, v, path)
        M = self._pm.get(key)
        if M is None:
            if not path:
                M = Matrix.identity(self.field, self.dim((q, v)))
            else:
                M = self.apath(q, v, path[:-1])
                M = self.amap(q, path[-1]) @ M
            self._pm[key] = M
        return M

    def qbasis(self, p, r, k, v):
        """Action of the k-th basis element of Q(p, r) at A-vertex v."""
        return self.qpath(p, self.cat.hom_basis(p, r)[k], v)

    def abasis(self, q, v, w, k):
        return self.apath(q, v, self.alg.cat.hom_basis(v, w)[k])

    def act(self, elem, v):
        """Matrix of a Q-element (category Element) at A-vertex v."""
        f = self.field
        out = Matrix.zeros(f, self.dim((elem.target, v)), self.dim((elem.source, v)))
        for k, c in enumerate(elem.coeffs):
            if c:
                out = out + self.qbasis(elem.source, elem.target, k, v).scale(c)
        return out

    def tensor_action(self, src, tgt, qcoef, acoef=None):
        """Matrix of a Q x A element from src=(q, v) to tgt=(r, w).

        ``qcoef`` pairs (k, c) index Q-basis paths q -> r; the A-part is a
        list of (k, c) over A(v, w), defaulting to the identity.
        """
        (q, v), (r, w) = src, tgt
        f = self.field
        out = Matrix.zeros(f, self.dim(tgt), self.dim(src))
        if not self.dim(src) or not self.dim(tgt):
            return out
        for (kq, ka), c in qcoef.items():
            M = self.qbasis(q, r, kq, w) @ self.abasis(q, v, w, ka)
            out = out + M.scale(c)
        return out

    # -- validation --------------------------------------------------------

    def check(self):
        f = self.field
        cat, alg = self.cat, self.alg
        for rel in cat.relations:
            for v in alg.vertices:
                if not self.dim((rel.source, v)) or not self.dim((rel.target, v)):
                    continue
                total = Matrix.zeros(f, self.dim((rel.target, v)), self.dim((rel.source, v)))
                for c, path in rel.terms:
                    total = total + self.qpath(rel.source, path, v).scale(f(c))
                if not total.is_zero():
                    names = " + ".join(
                        f"{c}*" + ";".join(cat.arrows[i].name for i in p) for c, p in rel.terms
                    )
                    raise RelationError(f"relation {names} violated at A-vertex {v!r}", names, total)
        for rel in alg.cat.relations:
            for q in self.support():
                if not self.dim((q, rel.source)) or not self.dim((q, rel.target)):
                    continue
                total = Matrix.zeros(f, self.dim((q, rel.target)), self.dim((q, rel.source)))
                for c, path in rel.terms:
                    total = total + self.apath(q, rel.source, path).scale(f(c))
                if not total.is_zero():
                    names = " + ".join(
                        f"{c}*" + ";".join(alg.arrows[i].name for i in p) for c, p in rel.terms
                    )
                    raise RelationError(f"A-relation {names} violated at {q!r}", names, total)
        for a, arr in enumerate(cat.arrows):
            for b, brr in enumerate(alg.arrows):
                s, t = arr.source, arr.target
                v, w = brr.source, brr.target
                if not self.dim((s, v)) or not self.dim((t, w)):
                    continue
                lhs = self.qmap(a, w) @ self.amap(s, b)
                rhs = self.amap(t, b) @ self.qmap(a, v)
                if lhs != rhs:
                    raise RelationError(
                        f"arrow {arr.name} does not commute with A-arrow {brr.name}", None, lhs - rhs
                    )
        return True

    # -- comparisons and values ---------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.cat is other.cat
            and self.alg is other.alg
            and self._dims == other._dims
            and self._qmaps == other._qmaps
            and self._amaps == other._amaps
        )

    def __hash__(self):
        return id(self)

    def __repr__(self):
        from .labels import format_label
        dv = ", ".join(f"{format_label(q)}:{n}" for q, n in self.dim_vector().items())
        nm = f"{self.name} " if self.name else ""
        return f"<Representation {nm}[{dv}]>"

    def value(self, q):
        """The A-module at q, as a representation of the one-object category."""
        pt = point_category(self.field)
        dims = {(POINT, v): self.dim((q, v)) for v in self.alg.vertices}
        amaps = {(POINT, b): self.amap(q, b) for b in range(len(self.alg.arrows))}
        return Representation(pt, self.alg, dims, {}, amaps, check=False)

    def qmatrix(self, a):
        """Block-diagonal matrix of Q-arrow a on the full A-module values."""
        return Matrix.block_diag(self.field, [self.qmap(a, v) for v in self.alg.vertices])

    def to_json(self):
        from .labels import format_label
        vals = {}
        for q in self.support():
            vals[format_label(q)] = amodule_to_json(self.value(q))
        arrows = {}
        for a, arr in enumerate(self.cat.arrows):
            if self.dim_at(arr.source) and self.dim_at(arr.target):
                M = self.qmatrix(a)
                if not M.is_zero():
                    arrows[arr.name] = M.to_json()
        return {"support": [format_label(q) for q in self.support()], "values": vals, "arrows": arrows}


def amodule_to_json(M):
    if M.alg.is_field:
        return M.total_dim
    return {
        "dims": {str(v): M.dim((POINT, v)) for v in M.alg.vertices},
        "arrows": {arr.name: M.amap(POINT, b).to_json()
                   for b, arr in enumerate(M.alg.arrows) if not M.amap(POINT, b).is_zero()},
    }


def representation_from_json(cat, alg, data):
    from .labels import parse_label
    values = {}
    for key, val in data["values"].items():
        q = parse_label(key)
        if isinstance(val, int):
            values[q] = val
        else:
            dims = {_vertex(alg, v): n for v, n in val["dims"].items()}
            maps = {name: Matrix.from_json(m) for name, m in val["arrows"].items()}
            values[q] = amodule(alg, dims, maps)
    arrows = {name: Matrix.from_json(m) for name, m in data["arrows"].items()}
    return make_rep(cat, values, arrows, alg)


def _vertex(alg, text):
    for v in alg.vertices:
        if str(v) == text:
            return v
    raise ValueError(f"unknown A-vertex {text!r}")


# ---------------------------------------------------------------------------
# constructors


def amodule(alg, dims, maps=None):
    """An A-module: an int for the ground field, else dims per vertex and arrow matrices."""
    pt = point_category(alg.field)
    if isinstance(dims, int):
        if not alg.is_field:
            raise ValueError("a bare dimension only describes modules over the ground field")
        dims = {alg.vertices[0]: dims}
    f = alg.field
    amaps = {}
    for name, M in (maps or {}).items():
        b = alg.cat.arrow_index[name]
        amaps[(POINT, b)] = M if isinstance(M, Matrix) else _as_matrix(f, M, dims[alg.arrows[b].target], dims[alg.arrows[b].source])
    return Representation(pt, alg, {(POINT, v): n for v, n in dims.items()}, {}, amaps)


def _as_matrix(field, data, rows, cols):
    if isinstance(data, Matrix):
        return data
    if not data:
        return Matrix.zeros(field, rows, cols)
    return Matrix(field, data)


def _split_blocks(M, dims_src, dims_tgt, what):
    """Split a block-diagonal matrix by A-vertex; refuse off-diagonal blocks."""
    blocks = []
    r0 = c0 = 0
    for ds, dt in zip(dims_src, dims_tgt):
        blocks.append(M.submatrix(range(r0, r0 + dt), range(c0, c0 + ds)))
        r0 += dt
        c0 += ds
    # anything outside the diagonal must vanish
    rebuilt = Matrix.block_diag(M.field, blocks)
    if rebuilt != M:
        raise ValueError(f"{what}: matrix mixes different vertices of the coefficient quiver")
    return blocks


def make_rep(cat, values, arrows=None, alg=None, name=None):
    """Build and validate a representation.

    ``values`` maps objects to dimensions (ground field) or A-modules;
    ``arrows`` maps arrow names, or (source, target) pairs, to matrices on
    the full values.
    """
    if alg is None:
        alg = field_algebra(cat.field)
    f = cat.field
    dims, amaps = {}, {}
    for q, M in values.items():
        if isinstance(M, int):
            M = amodule(alg, M)
        if M.alg is not alg:
            raise ValueError("value over a different coefficient algebra")
        for v in alg.vertices:
            dims[(q, v)] = M.dim((POINT, v))
        for b in range(len(alg.arrows)):
            amaps[(q, b)] = M.amap(POINT, b)
    qmaps = {}
    for key, M in (arrows or {}).items():
        a = resolve_arrow(cat, key)
        arr = cat.arrows[a]
        ds = [dims.get((arr.source, v), 0) for v in alg.vertices]
        dt = [dims.get((arr.target, v), 0) for v in alg.vertices]
        M = _as_matrix(f, M, sum(dt), sum(ds))
        if M.shape != (sum(dt), sum(ds)):
            raise ValueError(f"arrow {arr.name} needs a {sum(dt)}x{sum(ds)} matrix, got {M.shape}")
        for v, blk in zip(alg.vertices, _split_blocks(M, ds, dt, arr.name)):
            qmaps[(a, v)] = blk
    return Representation(cat, alg, dims, qmaps, amaps, check=True, name=name)


def resolve_arrow(cat, key):
    if isinstance(key, int):
        return key
    if isinstance(key, str):
        if key not in cat.arrow_index:
            raise KeyError(f"unknown arrow {key!r}")
        return cat.arrow_index[key]
    s, t = key
    found = [i for i, a in enumerate(cat.arrows) if a.source == s and a.target == t]
    if len(found) != 1:
        raise KeyError(f"no unique arrow {s!r} -> {t!r}")
    return found[0]


def zero_rep(cat, alg=None):
    return Representation(cat, alg or field_algebra(cat.field), {}, check=False)


def stalk_rep(cat, q, M=1, alg=None):
    """M placed at q, zero elsewhere, all arrows acting by zero."""
    if isinstance(M, int):
        alg = alg or field_algebra(cat.field)
        M = amodule(alg, M)
    return make_rep(cat, {q: M}, {}, M.alg)


def induced_rep(cat, q, M):
    """Q(q, -) ⊗ M, with arrows acting by composition on the left factor."""
    if isinstance(M, int):
        M = amodule(field_algebra(cat.field), M)
    alg = M.alg
    f = cat.field
    dims, qmaps, amaps = {}, {}, {}
    mdims = {v: M.dim((POINT, v)) for v in alg.vertices}
    for p in cat.out_support(q):
        k = cat.dim(q, p)
        for v in alg.vertices:
            dims[(p, v)] = k * mdims[v]
        for b in range(len(alg.arrows)):
            amaps[(p, b)] = kron(Matrix.identity(f, k), M.amap(POINT, b))
    for a, arr in enumerate(cat.arrows):
        s, t = arr.source, arr.target
        ds, dt = cat.dim(q, s), cat.dim(q, t)
        if not ds or not dt:
            continue
        C = _left_mult_matrix(cat, q, s, t, a)
        for v in alg.vertices:
            if mdims[v]:
                qmaps[(a, v)] = kron(C, Matrix.identity(f, mdims[v]))
    return Representation(cat, alg, dims, qmaps, amaps, check=False)


def _left_mult_matrix(cat, q, s, t, a):
    """Matrix of α ↦ a ∘ α from Q(q, s) to Q(q, t)."""
    f = cat.field
    ae = cat.arrow(cat.arrows[a].name)
    ai = {i: x for i, x in enumerate(ae.coeffs) if x}
    tab = cat.mult(q, s, t)
    cols = []
    for j in range(cat.dim(q, s)):
        col = [f.zero] * cat.dim(q, t)
        for i, c in ai.items():
            for k, x in tab[i][j].items():
                col[k] = f.norm(col[k] + c * x)
        cols.append(col)
    return Matrix.from_columns(f, cols, cat.dim(q, t))


def kron(A, B):
    f = A.field
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append([f.norm(x * y) for x in ra for y in rb])
    return Matrix.trusted(f, rows, A.ncols * B.ncols)


def proj_rep(cat, q, M=1):
    """The projective generator Q(q, -) ⊗ M for a projective A-module M."""
    if not isinstance(M, int) and not M.alg.is_field and not is_projective(M):
        raise ValueError("proj_rep needs a projective coefficient module")
    return induced_rep(cat, q, M)


def inj_rep(cat, serre, q, M=1):
    """Q(S^-1 q, -) ⊗ M, which is identified with Hom_k(Q(-, q), M)."""
    if serre is None:
        raise ValueError("inj_rep needs Serre data")
    if not isinstance(M, int) and not M.alg.is_field and not is_injective(M):
        raise ValueError("inj_rep needs an injective coefficient module")
    return induced_rep(cat, serre.inv(q), M)


def coinduced_rep(cat, q, M=1):
    """Hom_k(Q(-, q), M), built directly from the hom spaces into q."""
    if isinstance(M, int):
        M = amodule(field_algebra(cat.field), M)
    alg = M.alg
    f = cat.field
    mdims = {v: M.dim((POINT, v)) for v in alg.vertices}
    dims, qmaps, amaps = {}, {}, {}
    for p in cat.in_support(q):
        k = cat.dim(p, q)
        for v in alg.vertices:
            dims[(p, v)] = k * mdims[v]
        for b in range(len(alg.arrows)):
            amaps[(p, b)] = kron(Matrix.identity(f, k), M.amap(POINT, b))
    for a, arr in enumerate(cat.arrows):
        s, t = arr.source, arr.target
        ds, dt = cat.dim(s, q), cat.dim(t, q)
        if not ds or not dt:
            continue
        # (a·φ)(β′) = φ(β′ ∘ a) for β′ in Q(t, q)
        ae = {i: x for i, x in enumerate(cat.arrow(arr.name).coeffs) if x}
        tab = cat.mult(s, t, q)
        rows = []
        for bprime in range(dt):
            row = [f.zero] * ds
            for i, c in ae.items():
                for k, x in tab[bprime][i].items():
                    row[k] = f.norm(row[k] + c * x)
            rows.append(row)
        C = Matrix.trusted(f, rows, ds)
        for v in alg.vertices:
            if mdims[v]:
                qmaps[(a, v)] = kron(C, Matrix.identity(f, mdims[v]))
    return Representation(cat, alg, dims, qmaps, amaps, check=False)


def serre_identification(cat, serre, q, M=1):
    """The isomorphism Q(S^-1 q, -) ⊗ M -> Hom_k(Q(-, q), M) given by the pairing."""
    src = induced_rep(cat, serre.inv(q), M)
    tgt = coinduced_rep(cat, q, M)
    p0 = serre.inv(q)
    f = cat.field
    comps = {}
    for p in cat.out_support(p0):
        if not cat.dim(p, q):
            continue
        G = serre.pairing(p0, p)  # rows β in Q(p, q), cols α in Q(p0, p)
        for v in src.alg.vertices:
            n = src.dim((p, v)) // max(cat.dim(p0, p), 1)
            if not n:
                continue
            comps[(p, v)] = kron(G, Matrix.identity(f, n))
    return RepMorphism(src, tgt, comps)


# ---------------------------------------------------------------------------
# free modules over Q x A


def free_rep(cat, alg, gens):
    """⊕_g Q(q_g, -) ⊗ A e_{v_g}; records generator positions."""
    f = cat.field
    acat = alg.cat
    dims = {}
    blocks = {}  # vertex -> list of (g, qdim, adim, offset)
    for g, (q, v) in enumerate(gens):
        for p in cat.out_support(q):
            kq = cat.dim(q, p)
            for w in acat.out_support(v):
                ka = acat.dim(v, w)
                o = (p, w)
                off = dims.get(o, 0)
                blocks.setdefault(o, []).append((g, kq, ka, off))
                dims[o] = off + kq * ka
    qmaps, amaps = {}, {}
    for a, arr in enumerate(cat.arrows):
        s, t = arr.source, arr.target
        for w in alg.vertices:
            so, to = (s, w), (t, w)
            if so not in dims or to not in dims:
                continue
            rows = [[f.zero] * dims[so] for _ in range(dims[to])]
            tblocks = {g: (kq, ka, off) for g, kq, ka, off in blocks[to]}
            for g, kq, ka, off in blocks[so]:
                if g not in tblocks:
                    continue
                _, _, toff = tblocks[g]
                C = _left_mult_matrix(cat, gens[g][0], s, t, a)
                for i in range(C.nrows):
                    for j in range(C.ncols):
                        c = C.rows[i][j]
                        if c:
                            for x in range(ka):
                                rows[toff + i * ka + x][off + j * ka + x] = c
            qmaps[(a, w)] = Matrix.trusted(f, rows, dims[so])
    for b, brr in enumerate(alg.arrows):
        v1, w1 = brr.source, brr.target
        for p in cat.objects:
            so, to = (p, v1), (p, w1)
            if so not in dims or to not in dims:
                continue
            rows = [[f.zero] * dims[so] for _ in range(dims[to])]
            tblocks = {g: (kq, ka, off) for g, kq, ka, off in blocks[to]}
            for g, kq, ka, off in blocks[so]:
                if g not in tblocks:
                    continue
                _, tka, toff = tblocks[g]
                B = _left_mult_matrix(acat, gens[g][1], v1, w1, b)
                for y in range(kq):
                    for i in range(B.nrows):
                        for j in range(B.ncols):
                            c = B.rows[i][j]
                            if c:
                                rows[toff + y * tka + i][off + y * ka + j] = c
            amaps[(p, b)] = Matrix.trusted(f, rows, dims[so])
    F = Representation(cat, alg, dims, qmaps, amaps, check=False)
    F.free_gens = list(gens)
    F.free_blocks = blocks
    return F


def generator_position(F, g):
    o = F.free_gens[g]
    for h, kq, ka, off in F.free_blocks[o]:
        if h == g:
            return o, off
    raise KeyError(g)


def free_morphism(F, X, elements):
    """The morphism F -> X sending generator g to the vector elements[g] in X(o_g)."""
    f = X.field
    comps = {}
    for o, blist in F.free_blocks.items():
        p, w = o
        if not X.dim(o):
            continue
        cols = []
        for g, kq, ka, off in blist:
            q, v = F.free_gens[g]
            x = elements[g]
            for iq in range(kq):
                Mq = X.qbasis(q, p, iq, w)
                for ia in range(ka):
                    col = Mq.apply(X.abasis(q, v, w, ia).apply(x)) if X.dim((q, v)) else (f.zero,) * X.dim(o)
                    cols.append(col)
        comps[o] = Matrix.from_columns(f, cols, X.dim(o))
    return RepMorphism(F, X, comps)


def element_coords(F, o, vec):
    """Split a vector of F(o) into {generator: {(kq, ka): coefficient}}."""
    out = {}
    for g, kq, ka, off in F.free_blocks.get(o, ()):
        part = {}
        for iq in range(kq):
            for ia in range(ka):
                c = vec[off + iq * ka + ia]
                if c:
                    part[(iq, ia)] = c
        if part:
            out[g] = part
    return out


# ---------------------------------------------------------------------------
# morphisms


class RepMorphism:
    """A natural transformation given by one matrix per product vertex."""

    def __init__(self, source, target, components=None, check=False):
        if source.cat is not target.cat or source.alg is not target.alg:
            raise ValueError("morphism between representations of different categories")
        self.source = source
        self.target = target
        self.field = source.field
        self._comp = {}
        for o, M in (components or {}).items():
            s, t = source.dim(o), target.dim(o)
            if not s or not t:
                continue
            if M.shape != (t, s):
                raise ValueError(f"component at {o!r} must be {t}x{s}, got {M.shape}")
            if not M.is_zero():
                self._comp[o] = M
        if check and not self.is_natural():
            raise ValueError("components are not natural")

    def component(self, o):
        M = self._comp.get(o)
        if M is None:
            return Matrix.zeros(self.field, self.target.dim(o), self.source.dim(o))
        return M

    def component_at(self, q):
        alg = self.source.alg
        return Matrix.block_diag(self.field, [self.component((q, v)) for v in alg.vertices])

    def vertices(self):
        return sorted(set(self.source.vertices()) | set(self.target.vertices()),
                      key=lambda o: (self.source.cat.index(o[0]), self.source.alg.index(o[1])))

    def is_natural(self):
        X, Y = self.source, self.target
        for key, s, t, Mx in X.arrow_maps():
            if key[0] == "Q":
                My = Y.qmap(key[1], key[2])
            else:
                My = Y.amap(key[1], key[2])
            if self.component(t) @ Mx != My @ self.component(s):
                return False
        for key, s, t, My in Y.arrow_maps():
            if key[0] == "Q":
                Mx = X.qmap(key[1], key[2])
            else:
                Mx = X.amap(key[1], key[2])
            if self.component(t) @ Mx != My @ self.component(s):
                return False
        return True

    def __matmul__(self, other):
        """self ∘ other."""
        if other.target is not self.source and not _same_rep(other.target, self.source):
            raise ValueError("morphisms are not composable")
        comps = {}
        for o in other.source.vertices():
            if self.target.dim(o):
                comps[o] = self.component(o) @ other.component(o)
        return RepMorphism(other.source, self.target, comps)

    def _binary(self, other, sign):
        comps = {}
        for o in set(self._comp) | set(other._comp):
            comps[o] = self.component(o) + other.component(o).scale(sign)
        return RepMorphism(self.source, self.target, comps)

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return RepMorphism(self.source, self.target, {o: M.scale(c) for o, M in self._comp.items()})

    def is_zero(self):
        return not self._comp

    def __eq__(self, other):
        return (
            isinstance(other, RepMorphism)
            and _same_rep(self.source, other.source)
            and _same_rep(self.target, other.target)
            and self._comp == other._comp
        )

    __hash__ = object.__hash__

    def is_mono(self):
        return all(self.component(o).rank() == self.source.dim(o) for o in self.source.vertices())

    def is_epi(self):
        return all(self.component(o).rank() == self.target.dim(o) for o in self.target.vertices())

    def is_iso(self):
        return self.source.dim_vector() == self.target.dim_vector() and self.is_mono() and self.is_epi()

    def inverse(self):
        if not self.is_iso():
            raise ValueError("not an isomorphism")
        return RepMorphism(self.target, self.source, {o: self.component(o).inverse() for o in self.source.vertices()})

    def to_json(self):
        from .labels import format_label
        comps = {}
        for q in sorted({o[0] for o in self.vertices()}, key=self.source.cat.index):
            M = self.component_at(q)
            if not M.is_zero():
                comps[format_label(q)] = M.to_json()
        return {"components": comps}


def _same_rep(X, Y):
    return X is Y or X == Y


def identity(X):
    f = X.field
    return RepMorphism(X, X, {o: Matrix.identity(f, X.dim(o)) for o in X.vertices()})


def zero_morphism(X, Y):
    return RepMorphism(X, Y, {})


def make_morphism(X, Y, components):
    """Morphism from per-object matrices on the full values; checks naturality."""
    alg = X.alg
    comps = {}
    for q, M in components.items():
        ds = [X.dim((q, v)) for v in alg.vertices]
        dt = [Y.dim((q, v)) for v in alg.vertices]
        M = _as_matrix(X.field, M, sum(dt), sum(ds))
        if M.shape != (sum(dt), sum(ds)):
            raise ValueError(f"component at {q!r} must be {sum(dt)}x{sum(ds)}")
        for v, blk in zip(alg.vertices, _split_blocks(M, ds, dt, f"component at {q!r}")):
            comps[(q, v)] = blk
    phi = RepMorphism(X, Y, comps)
    if not phi.is_natural():
        raise ValueError("components do not commute with the arrows")
    return phi


# ---------------------------------------------------------------------------
# Hom spaces


class HomSpace:
    """A basis of Hom(X, Y) together with a coordinate map."""

    def __init__(self, X, Y, basis, free, layout):
        self.source = X
        self.target = Y
        self.basis = basis
        self._free = free
        self._layout = layout  # list of (vertex, offset, rows, cols)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def flatten(self, phi):
        out = []
        for o, off, r, c in self._layout:
            M = phi.component(o)
            for row in M.rows:
                out.extend(row)
        return out

    def coords(self, phi):
        """Coordinates of phi in the basis (phi must be a morphism)."""
        flat = self.flatten(phi)
        return tuple(flat[j] for j in self._free)

    def combine(self, coeffs):
        f = self.source.field
        out = zero_morphism(self.source, self.target)
        for c, b in zip(coeffs, self.basis):
            if c:
                out = out + b.scale(c)
        return out


def hom_space(X, Y):
    """Basis of Hom_{Q,A}(X, Y) by solving the commuting-square system."""
    if X.cat is not Y.cat or X.alg is not Y.alg:
        raise ValueError("representations over different categories")
    f = X.field
    p = f.characteristic
    layout = []
    offset = {}
    n = 0
    for o in X.vertices():
        if Y.dim(o):
            r, c = Y.dim(o), X.dim(o)
            layout.append((o, n, r, c))
            offset[o] = (n, r, c)
            n += r * c
    eqs = []
    seen = set()
    for rep in (X, Y):
        for key, s, t, _ in rep.arrow_maps():
            if key in seen:
                continue
            seen.add(key)
            if not Y.dim(t) or not X.dim(s):
                continue
            if key[0] == "Q":
                Mx, My = X.qmap(key[1], key[2]), Y.qmap(key[1], key[2])
            else:
                Mx, My = X.amap(key[1], key[2]), Y.amap(key[1], key[2])
            # phi_t Mx - My phi_s = 0, an (dim Y(t)) x (dim X(s)) system
            ot, os_ = offset.get(t), offset.get(s)
            for r in range(Y.dim(t)):
                for c in range(X.dim(s)):
                    eq = {}
                    if ot is not None:
                        base, _, ct = ot
                        for k in range(ct):
                            x = Mx.rows[k][c]
                            if x:
                                eq[base + r * ct + k] = x
                    if os_ is not None:
                        base, _, cs = os_
                        myr = My.rows[r]
                        for k in range(len(myr)):
                            y = myr[k]
                            if y:
                                idx = base + k * cs + c
                                v = eq.get(idx, 0) - y
                                if p:
                                    v %= p
                                if v:
                                    eq[idx] = v
                                else:
                                    eq.pop(idx, None)
                    if eq:
                        eqs.append(eq)
    free, sols = sparse_kernel(eqs, n, f)
    basis = []
    for sol in sols:
        comps = {}
        for o, off, r, c in layout:
            rows = [[sol.get(off + i * c + j, f.zero) for j in range(c)] for i in range(r)]
            comps[o] = Matrix.trusted(f, rows, c)
        basis.append(RepMorphism(X, Y, comps))
    return HomSpace(X, Y, basis, free, layout)


# ---------------------------------------------------------------------------
# abelian structure


def _rebuild(cat, alg, dims, X, fn):
    """New representation whose arrow maps are fn(key, s, t, X-matrix)."""
    qmaps, amaps = {}, {}
    for key, s, t, M in X.arrow_maps():
        if not dims.get(s) or not dims.get(t):
            continue
        N = fn(s, t, M)
        if key[0] == "Q":
            qmaps[(key[1], key[2])] = N
        else:
            amaps[(key[1], key[2])] = N
    return Representation(cat, alg, dims, qmaps, amaps, check=False)


def kernel(phi):
    """(K, inclusion K -> source)."""
    X = phi.source
    f = X.field
    incl, linv, dims = {}, {}, {}
    for o in X.vertices():
        M = phi.component(o)
        ker = M.kernel()
        if ker:
            I = Matrix.from_columns(f, ker, X.dim(o))
            incl[o] = I
            linv[o] = left_inverse(I)
            dims[o] = len(ker)
    K = _rebuild(X.cat, X.alg, dims, X, lambda s, t, M: linv[t] @ M @ incl[s])
    return K, RepMorphism(K, X, incl)


def cokernel(phi):
    """(C, projection target -> C)."""
    Y = phi.target
    f = Y.field
    proj, sect, dims = {}, {}, {}
    for o in Y.vertices():
        M = phi.component(o)
        q = QuotientMap(f, Y.dim(o), M.columns() if M.ncols else [])
        if q.dim:
            proj[o] = q.matrix()
            sect[o] = q.section()
            dims[o] = q.dim
    C = _rebuild(Y.cat, Y.alg, dims, Y, lambda s, t, M: proj[t] @ M @ sect[s])
    return C, RepMorphism(Y, C, proj)


def image(phi):
    """(I, epi source -> I, mono I -> target)."""
    Y = phi.target
    f = Y.field
    incl, linv, dims = {}, {}, {}
    for o in Y.vertices():
        M = phi.component(o)
        cols = M.image() if M.ncols else []
        if cols:
            J = Matrix.from_columns(f, cols, Y.dim(o))
            incl[o] = J
            linv[o] = left_inverse(J)
            dims[o] = len(cols)
    I = _rebuild(Y.cat, Y.alg, dims, Y, lambda s, t, M: linv[t] @ M @ incl[s])
    epi = RepMorphism(phi.source, I, {o: linv[o] @ phi.component(o) for o in incl})
    return I, epi, RepMorphism(I, Y, incl)


def direct_sum(*reps):
    """(S, inclusions, projections) for a direct sum with blocks in argument order."""
    X0 = reps[0]
    cat, alg, f = X0.cat, X0.alg, X0.field
    verts = set()
    for X in reps:
        verts |= set(X.vertices())
    dims = {o: sum(X.dim(o) for X in reps) for o in verts}
    qmaps, amaps = {}, {}
    keys = set()
    for X in reps:
        for key, s, t, _ in X.arrow_maps():
            keys.add((key, s, t))
    for key, s, t in keys:
        blocks = []
        for X in reps:
            blocks.append(X.qmap(key[1], key[2]) if key[0] == "Q" else X.amap(key[1], key[2]))
        M = Matrix.block_diag(f, blocks)
        if key[0] == "Q":
            qmaps[(key[1], key[2])] = M
        else:
            amaps[(key[1], key[2])] = M
    S = Representation(cat, alg, dims, qmaps, amaps, check=False)
    incs, projs = [], []
    for i, X in enumerate(reps):
        ic, pc = {}, {}
        for o in X.vertices():
            off = sum(Y.dim(o) for Y in reps[:i])
            n = X.dim(o)
            rows_i = [[f.one if r == off + c else f.zero for c in range(n)] for r in range(dims[o])]
            ic[o] = Matrix.trusted(f, rows_i, n)
            pc[o] = ic[o].T
        incs.append(RepMorphism(X, S, ic))
        projs.append(RepMorphism(S, X, pc))
    return S, incs, projs


def morphism_into_sum(S, maps):
    """The morphism Z -> S = X_1 ⊕ ... given by its components maps[i]: Z -> X_i."""
    f = S.field
    Z = maps[0].source
    comps = {}
    for o in Z.vertices():
        if not S.dim(o):
            continue
        rows = []
        for m in maps:
            rows.extend(m.component(o).rows)
        comps[o] = Matrix.trusted(f, rows, Z.dim(o))
    return RepMorphism(Z, S, comps)


def morphism_from_sum(S, maps):
    """The morphism S = X_1 ⊕ ... -> Z given by components maps[i]: X_i -> Z."""
    f = S.field
    Z = maps[0].target
    comps = {}
    for o in S.vertices():
        if not Z.dim(o):
            continue
        comps[o] = Matrix.hstack(f, [m.component(o) for m in maps], Z.dim(o))
    return RepMorphism(S, Z, comps)


# ---------------------------------------------------------------------------
# tops, covers, projectivity


def radical_span(X, o):
    """Spanning vectors of the image of all arrows into vertex o."""
    q, v = o
    vecs = []
    for key, s, t, M in X.arrow_maps():
        if t == o and M.ncols:
            vecs.extend(M.columns())
    return vecs


def top_generators(X):
    """Per vertex, standard basis vectors lifting a basis of the top X / rad X."""
    gens = []
    for o in X.vertices():
        q = QuotientMap(X.field, X.dim(o), radical_span(X, o))
        for j in q.free:
            vec = [X.field.zero] * X.dim(o)
            vec[j] = X.field.one
            gens.append((o, tuple(vec)))
    return gens


def projective_cover(X):
    """(F, ε: F ↠ X) with F free on lifts of the top of X."""
    tops = top_generators(X)
    F = free_rep(X.cat, X.alg, [o for o, _ in tops])
    eps = free_morphism(F, X, [x for _, x in tops])
    return F, eps


def is_projective(X):
    F, _ = projective_cover(X)
    return F.total_dim == X.total_dim


def dual_rep(X):
    """D X = Hom_k(X, k) as a representation of Q^op with coefficients A^op."""
    cat, alg = X.cat.opposite(), X.alg.opposite()
    qmaps = {(a, v): M.T for (a, v), M in X._qmaps.items()}
    amaps = {(q, b): M.T for (q, b), M in X._amaps.items()}
    return Representation(cat, alg, dict(X._dims), qmaps, amaps, check=False)


def is_injective(X):
    return is_projective(dual_rep(X))


# ---------------------------------------------------------------------------
# Yoneda


class Yoneda:
    """Hom(Q(q, -) ⊗ M, X) ≅ Hom_A(M, X(q)), both directions explicit."""

    def __init__(self, cat, q, M, X):
        self.cat = cat
        self.q = q
        self.M = M if not isinstance(M, int) else amodule(X.alg, M)
        self.X = X
        self.P = induced_rep(cat, q, self.M)
        self.Xq = X.value(q)

    def forward(self, phi):
        """Restrict to id ⊗ M at q."""
        f = self.X.field
        comps = {}
        for v in self.M.alg.vertices:
            m = self.M.dim((POINT, v))
            if not m or not self.X.dim((self.q, v)):
                continue
            # id_q is basis index 0 of Q(q, q)
            C = phi.component((self.q, v))
            comps[(POINT, v)] = C.submatrix(range(C.nrows), range(m))
        return RepMorphism(self.M, self.Xq, comps)

    def backward(self, h):
        """α ⊗ m ↦ X(α)(h(m))."""
        f = self.X.field
        comps = {}
        for o in self.P.vertices():
            p, v = o
            if not self.X.dim(o):
                continue
            hv = h.component((POINT, v))
            cols = []
            for k in range(self.cat.dim(self.q, p)):
                A = self.X.qbasis(self.q, p, k, v) @ hv
                cols.extend(A.columns())
            comps[o] = Matrix.from_columns(f, cols, self.X.dim(o))
        return RepMorphism(self.P, self.X, comps)


def yoneda(cat, q, M, X):
    return Yoneda(cat, q, M, X)
