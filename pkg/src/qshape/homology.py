"""Minimal projective resolutions and the homology functors built from them.

``cohom(q, i, X)`` is Ext^i over Q from the simple functor at q into X,
computed from the minimal resolution of that simple and the Yoneda
isomorphism.  ``hom_tor(q, i, X)`` is Tor_i over Q of the simple right
module at q with X, computed from a resolution over the opposite category.
"""

from dataclasses import dataclass, field as dc_field
from typing import Any

from .category import WindowError
from .exactlin import Matrix, Subquotient, kernel_basis
from .rep import (
    POINT, Representation, element_coords, field_algebra, free_morphism, free_rep,
    kernel, point_category, stalk_rep, top_generators,
)


# ---------------------------------------------------------------------------
# resolutions


class ProjResolution:
    """A minimal projective resolution, extended on demand.

    ``layers[n]`` lists the vertices (q, v) of the generators of the n-th
    free term.  ``differential[n]`` (n >= 1) maps each generator of layer n
    to its image in layer n-1, as ``{h: {(kq, ka): coefficient}}`` over the
    basis of Q(q_h, q_g) ⊗ A(v_h, v_g).  ``augmentation`` holds the images
    of the layer-0 generators in the resolved module.
    """

    def __init__(self, M, check_window=True):
        self.target = M
        self.cat = M.cat
        self.alg = M.alg
        self.check_window = check_window
        tops = top_generators(M)
        self.layers = [[o for o, _ in tops]]
        self.augmentation = [x for _, x in tops]
        self._check(self.layers[0], 0)
        F0 = free_rep(self.cat, self.alg, self.layers[0])
        self.free = [F0]
        eps = free_morphism(F0, M, self.augmentation)
        self.differential = [None]
        self._syzygy = kernel(eps)

    @property
    def computed_to(self):
        return len(self.layers) - 1

    def _check(self, gens, n):
        if not self.check_window:
            return
        objs = sorted({q for q, _ in gens}, key=self.cat.index)
        self.cat.require_core(objs, f"resolution layer {n}")

    def extend_to(self, n):
        while self.computed_to < n:
            K, inc = self._syzygy
            m = self.computed_to
            if K.is_zero():
                self.layers.append([])
                self.differential.append([])
                self.free.append(free_rep(self.cat, self.alg, []))
                continue
            tops = top_generators(K)
            gens = [o for o, _ in tops]
            self._check(gens, m + 1)
            prev = self.free[m]
            images = [inc.component(o).apply(x) for o, x in tops]
            F = free_rep(self.cat, self.alg, gens)
            d = free_morphism(F, prev, images)
            self.layers.append(gens)
            self.differential.append([element_coords(prev, o, vec) for (o, _), vec in zip(tops, images)])
            self.free.append(F)
            self._syzygy = kernel(d)
        return self

    def length(self, cap):
        """Projective dimension if it is at most cap, else None."""
        self.extend_to(cap + 1)
        for n, layer in enumerate(self.layers):
            if not layer:
                return n - 1
        return None

    def is_minimal(self):
        for n in range(1, len(self.layers)):
            for g, entries in enumerate(self.differential[n]):
                og = self.layers[n][g]
                for h, coef in entries.items():
                    if self.layers[n - 1][h] == og and coef.get((0, 0)):
                        return False
        return True


def min_proj_resolution(M, n):
    return ProjResolution(M).extend_to(n)


def _stalk_resolution(cat, q):
    cache = cat.__dict__.setdefault("_stalk_res", {})
    res = cache.get(q)
    if res is None:
        res = ProjResolution(stalk_rep(cat, q, 1, field_algebra(cat.field)))
        cache[q] = res
    return res


# ---------------------------------------------------------------------------
# homology values


@dataclass
class HomologyValue:
    q: Any
    i: int
    variance: str  # "cohom" or "tor"
    dims: dict  # A-vertex -> dimension
    action: dict = dc_field(default_factory=dict)  # A-arrow name -> Matrix
    trivial_action: bool = True

    @property
    def dim(self):
        return sum(self.dims.values())

    def to_json(self):
        from .labels import format_label
        out = {"q": format_label(self.q) if isinstance(self.q, tuple) else self.q,
               "i": self.i, "variance": self.variance, "dim": self.dim}
        if self.trivial_action:
            out["A_action"] = None
        else:
            out["A_action"] = {
                "dims": {str(v): n for v, n in self.dims.items()},
                "arrows": {k: M.to_json() for k, M in self.action.items()},
            }
        return out


class _Complex:
    """A complex of vector spaces per A-vertex with matrices between terms.

    ``terms[n][v]`` lists the blocks (vertex dims) of the n-th term and
    ``maps`` returns the matrix of the differential out of term n.
    """

    def __init__(self, field, dims, diff):
        self.field = field
        self.dims = dims  # n -> v -> int
        self.diff = diff  # (n, v) -> Matrix from term n to term n + step

    def subquotient(self, n, v, incoming, outgoing):
        f = self.field
        dim = self.dims[n][v]
        if not dim:
            return None
        Dout = self.diff(outgoing, v) if outgoing is not None else None
        Z = kernel_basis(Dout) if Dout is not None and Dout.nrows else [
            tuple(f.one if i == j else f.zero for i in range(dim)) for j in range(dim)
        ]
        Din = self.diff(incoming, v) if incoming is not None else None
        B = Din.columns() if Din is not None and Din.ncols else []
        return Subquotient(f, dim, Z, B)


def _qelem_action(X, p, r, coef, v):
    """Matrix of Σ c·(basis path kq of Q(p, r)) on X at A-vertex v."""
    f = X.field
    out = None
    for (kq, _ka), c in coef.items():
        M = X.qbasis(p, r, kq, v).scale(c)
        out = M if out is None else out + M
    if out is None:
        out = Matrix.zeros(f, X.dim((r, v)), X.dim((p, v)))
    return out


def _yoneda_terms(X, res, n, v):
    """Blocks of Hom(F_n, X) at A-vertex v: one X(q_g, v) per generator."""
    return [X.dim((q, v)) for (q, _) in res.layers[n]]


def _yoneda_diff(X, res, n, v):
    """Matrix Hom(F_n, X) -> Hom(F_{n+1}, X) at A-vertex v."""
    f = X.field
    src = _yoneda_terms(X, res, n, v)
    tgt = _yoneda_terms(X, res, n + 1, v)
    rows = []
    for g, entries in enumerate(res.differential[n + 1]):
        qg = res.layers[n + 1][g][0]
        blocks = []
        for h, dim_h in enumerate(src):
            coef = entries.get(h)
            qh = res.layers[n][h][0]
            if coef is None or not dim_h or not tgt[g]:
                blocks.append(Matrix.zeros(f, tgt[g], dim_h))
            else:
                blocks.append(_qelem_action(X, qh, qg, coef, v))
        rows.append(Matrix.hstack(f, blocks, tgt[g]))
    return Matrix.vstack(f, rows, sum(src))


def _tor_terms(X, res, n, v):
    return [X.dim((q, v)) for (q, _) in res.layers[n]]


def _tor_diff(X, res, n, v):
    """Matrix C_n -> C_{n-1} of the tensored resolution over the opposite category."""
    f = X.field
    src = _tor_terms(X, res, n, v)
    tgt = _tor_terms(X, res, n - 1, v)
    opp = res.cat
    blocks_by_g = []
    for g, entries in enumerate(res.differential[n]):
        pg = res.layers[n][g][0]
        col = []
        for h, dim_h in enumerate(tgt):
            ph = res.layers[n - 1][h][0]
            coef = entries.get(h)
            if coef is None or not dim_h or not src[g]:
                col.append(Matrix.zeros(f, dim_h, src[g]))
                continue
            M = Matrix.zeros(f, dim_h, src[g])
            for (kq, _), c in coef.items():
                path = opp.hom_basis(ph, pg)[kq]  # op path ph -> pg, i.e. a Q path pg -> ph
                M = M + X.qpath(pg, tuple(reversed(path)), v).scale(c)
            col.append(M)
        blocks_by_g.append(Matrix.vstack(f, col, src[g]))
    return Matrix.hstack(f, blocks_by_g, sum(tgt))


def _a_action(X, sqs, layers, blocks_of, alg):
    """Induced A-arrow matrices on homology, from block-diagonal X(q_g, b)."""
    out = {}
    f = X.field
    for b, arr in enumerate(alg.arrows):
        v, w = arr.source, arr.target
        sv, sw = sqs.get(v), sqs.get(w)
        if sv is None or sw is None:
            continue
        blocks = [X.amap(q, b) for (q, _) in layers]
        M = Matrix.block_diag(f, blocks) if blocks else None
        cols = [sw.coords(M.apply(z)) for z in sv.reps]
        out[arr.name] = Matrix.from_columns(f, cols, sw.dim)
    return out


def _cohom_sq(X, q, i):
    res = _stalk_resolution(X.cat, q).extend_to(i + 1)
    sqs = {}
    for v in X.alg.vertices:
        dim = sum(_yoneda_terms(X, res, i, v))
        if not dim:
            continue
        f = X.field
        Dout = _yoneda_diff(X, res, i, v)
        Z = kernel_basis(Dout) if Dout.nrows else [
            tuple(f.one if a == b else f.zero for a in range(dim)) for b in range(dim)]
        B = []
        if i >= 1:
            Din = _yoneda_diff(X, res, i - 1, v)
            B = Din.columns() if Din.ncols else []
        sq = Subquotient(f, dim, Z, B)
        if sq.dim:
            sqs[v] = sq
    return res, sqs


def cohom(q, i, X):
    """H^i_[q](X) = Ext^i_Q(simple at q, X), with its A-module structure."""
    res, sqs = _cohom_sq(X, q, i)
    dims = {v: sq.dim for v, sq in sqs.items()}
    action = _a_action(X, sqs, res.layers[i], None, X.alg) if X.alg.arrows else {}
    return HomologyValue(q, i, "cohom", dims, action, X.alg.is_field)


def _tor_sq(X, q, i):
    opp = X.cat.opposite()
    res = _stalk_resolution(opp, q).extend_to(i + 1)
    sqs = {}
    f = X.field
    for v in X.alg.vertices:
        dim = sum(_tor_terms(X, res, i, v))
        if not dim:
            continue
        if i >= 1:
            Dout = _tor_diff(X, res, i, v)
            Z = kernel_basis(Dout) if Dout.nrows else None
        else:
            Z = None
        if Z is None:
            Z = [tuple(f.one if a == b else f.zero for a in range(dim)) for b in range(dim)]
        Din = _tor_diff(X, res, i + 1, v)
        B = Din.columns() if Din.ncols else []
        sq = Subquotient(f, dim, Z, B)
        if sq.dim:
            sqs[v] = sq
    return res, sqs


def hom_tor(q, i, X):
    """H_i^[q](X) = Tor_i^Q(simple right module at q, X)."""
    res, sqs = _tor_sq(X, q, i)
    dims = {v: sq.dim for v, sq in sqs.items()}
    action = _a_action(X, sqs, res.layers[i], None, X.alg) if X.alg.arrows else {}
    return HomologyValue(q, i, "tor", dims, action, X.alg.is_field)


# ---------------------------------------------------------------------------
# relevance windows and predicates


def _reach(cat, objs, steps, step):
    cur = set(objs)
    for _ in range(steps):
        nxt = set(cur)
        for o in cur:
            nxt.update(step(o))
        cur = nxt
    return sorted(cur, key=cat.index)


def cohom_relevant(cat, support, i):
    """Objects q for which H^i_[q] can be nonzero on something supported in support."""
    return _reach(cat, support, i, cat.in_support)


def tor_relevant(cat, support, i):
    return _reach(cat, support, i, cat.out_support)


def is_exact(X, check_dual=True, witness=False):
    """H^1_[q](X) = 0 for all q; optionally confirmed through H_1."""
    bad = None
    for q in cohom_relevant(X.cat, X.support(), 1):
        if cohom(q, 1, X).dim:
            bad = q
            break
    verdict = bad is None
    if check_dual:
        dual_bad = None
        for q in tor_relevant(X.cat, X.support(), 1):
            if hom_tor(q, 1, X).dim:
                dual_bad = q
                break
        if (dual_bad is None) != verdict:
            raise AssertionError("exactness via H^1 and via H_1 disagree")
    if witness:
        return verdict, bad
    return verdict


def is_exact_via_tor(X):
    return all(hom_tor(q, 1, X).dim == 0 for q in tor_relevant(X.cat, X.support(), 1))


def cohom_map(q, i, phi):
    """Matrices of H^i_[q](phi) per A-vertex, with domain and codomain dimensions."""
    X, Y = phi.source, phi.target
    _, sx = _cohom_sq(X, q, i)
    res, sy = _cohom_sq(Y, q, i)
    f = X.field
    out = {}
    for v in X.alg.vertices:
        a, b = sx.get(v), sy.get(v)
        da, db = (a.dim if a else 0), (b.dim if b else 0)
        if a is None:
            out[v] = Matrix.zeros(f, db, 0)
            continue
        blocks = [phi.component((qg, v)) for (qg, _) in res.layers[i]]
        M = Matrix.block_diag(f, blocks)
        cols = [(b.coords(M.apply(z)) if b else ()) for z in a.reps]
        out[v] = Matrix.from_columns(f, cols, db)
    return out


def _is_iso_maps(maps):
    return all(M.nrows == M.ncols and M.rank() == M.nrows for M in maps.values())


def is_weq(phi, objects=None, witness=False):
    """H^1_[q](phi) and H^2_[q](phi) are isomorphisms for every relevant q."""
    X, Y = phi.source, phi.target
    supp = set(X.support()) | set(Y.support())
    qs = objects if objects is not None else cohom_relevant(X.cat, supp, 2)
    for i in (1, 2):
        for q in qs:
            if not _is_iso_maps(cohom_map(q, i, phi)):
                return (False, (q, i)) if witness else False
    return (True, None) if witness else True


# ---------------------------------------------------------------------------
# Ext over Q,A


def ext_qa(i, X, Y):
    """dim Ext^i_{Q,A}(X, Y) from a minimal resolution of X in Q,A-Mod."""
    if X.cat is not Y.cat or X.alg is not Y.alg:
        raise ValueError("representations over different categories")
    res = ProjResolution(X).extend_to(i + 1)
    f = X.field

    def terms(n):
        return [Y.dim(o) for o in res.layers[n]]

    def diff(n):
        src, tgt = terms(n), terms(n + 1)
        rows = []
        for g, entries in enumerate(res.differential[n + 1]):
            og = res.layers[n + 1][g]
            blocks = []
            for h, dh in enumerate(src):
                coef = entries.get(h)
                if coef is None or not dh or not tgt[g]:
                    blocks.append(Matrix.zeros(f, tgt[g], dh))
                else:
                    blocks.append(Y.tensor_action(res.layers[n][h], og, coef))
            rows.append(Matrix.hstack(f, blocks, tgt[g]))
        return Matrix.vstack(f, rows, sum(src))

    dim = sum(terms(i))
    if not dim:
        return 0
    Dout = diff(i)
    Z = kernel_basis(Dout) if Dout.nrows else [
        tuple(f.one if a == b else f.zero for a in range(dim)) for b in range(dim)]
    B = []
    if i >= 1:
        Din = diff(i - 1)
        B = Din.columns() if Din.ncols else []
    return Subquotient(f, dim, Z, B).dim


def global_dimension(alg, cap=None):
    """Global dimension of a bound quiver algebra if at most cap, else None."""
    cap = cap if cap is not None else 2 * len(alg.vertices) + 2
    pt = point_category(alg.field)
    best = 0
    for v in alg.vertices:
        S = Representation(pt, alg, {(POINT, v): 1}, check=False)
        pd = ProjResolution(S, check_window=False).length(cap)
        if pd is None:
            return None
        best = max(best, pd)
    return best


# ---------------------------------------------------------------------------
# closed-form oracles


def _degree_map(X, q, steps):
    """Matrix of the composite of ``steps`` differentials starting in degree q."""
    f = X.field
    cat = X.cat
    M = Matrix.identity(f, X.dim_at(q))
    for k in range(q, q - steps, -1):
        name = f"d{k}"
        if name in cat.arrow_index:
            A = X.qmatrix(cat.arrow_index[name])
        else:
            A = Matrix.zeros(f, X.dim_at(k - 1), X.dim_at(k))
        M = A @ M
    return M


def ch_oracle(X, j):
    """Classical homology dim ker(d_j) - rank(d_{j+1}) of a complex."""
    if X.cat.spec.kind not in ("linear", "nlinear") or X.cat.spec.zero_length != 2:
        raise ValueError("ch_oracle needs the complex-shaped linear category")
    n = X.dim_at(j)
    if not n:
        return 0
    return n - _degree_map(X, j, 1).rank() - _degree_map(X, j + 1, 1).rank()


def nch_oracle(X, j, q):
    """ⱼH_q = Ker(X_q -> X_{q-j}) / Im(X_{q+N-j} -> X_q) for an N-complex."""
    if X.cat.spec.kind not in ("linear", "nlinear") or X.cat.spec.zero_length is None:
        raise ValueError("nch_oracle needs an N-truncated linear category")
    N = X.cat.spec.zero_length
    if not 0 < j < N:
        raise ValueError(f"j must satisfy 0 < j < {N}")
    n = X.dim_at(q)
    if not n:
        return 0
    return n - _degree_map(X, q, j).rank() - _degree_map(X, q + N - j, N - j).rank()


def nch_cohom_formula(X, q, i):
    """Expected dim H^i_[q](X) for an N-complex, by the parity of i."""
    N = X.cat.spec.zero_length
    if i % 2:
        return nch_oracle(X, N - 1, q - 1 - (i - 1) * N // 2)
    return nch_oracle(X, 1, q - i * N // 2)


def nch_tor_formula(X, q, i):
    """Expected dim H_i^[q](X) for an N-complex.

    The op-resolution of the simple at q has generators q, q+1, q+N, q+N+1, ...
    with connecting paths of lengths 1, N-1, 1, ..., so odd degrees see 1H
    and even degrees see (N-1)H.
    """
    N = X.cat.spec.zero_length
    if i % 2:
        return nch_oracle(X, 1, q + 1 + (i - 1) * N // 2)
    return nch_oracle(X, N - 1, q + i * N // 2)
