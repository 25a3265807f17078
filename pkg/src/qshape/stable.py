"""Stable-category calculus on semiprojective objects.

Semiprojective objects form a Frobenius category whose projective-injectives
are the projective objects of Q,A-Mod.  Suspension is the cokernel of the
embedding of an object into a projective-injective; stable Homs are Homs
modulo maps factoring through a projective.
"""

import random
from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

from .category import has_cycles
from .exactlin import Matrix, QuotientMap, right_inverse
from .homology import is_exact, is_weq
from .rep import (
    POINT, RepMorphism, Representation, cokernel, direct_sum, free_rep, hom_space,
    identity, induced_rep, is_injective, is_projective, kernel, morphism_from_sum,
    morphism_into_sum, projective_cover, kron, zero_morphism,
)


SEMISIMPLE = "SemisimpleCoefficients"
RIGHT_BOUNDED = "RightBoundedProjectiveValues"
LEFT_BOUNDED = "LeftBoundedInjectiveValues"
FILTRATION = "ProjectiveFiltration"
UNKNOWN = "Unknown"

LINEAR_KINDS = ("linear", "nlinear")


class PreconditionError(ValueError):
    pass


class UnsupportedError(NotImplementedError):
    pass


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    object: Any
    kind: str  # "semiprojective" or "semiinjective"
    reason: str
    detail: str = ""

    def __bool__(self):
        return self.reason != UNKNOWN

    def to_json(self):
        return {"kind": self.kind, "reason": self.reason, "detail": self.detail}


def _semisimple(alg):
    return not alg.arrows


def values_projective(X):
    return all(is_projective(X.value(q)) for q in X.support())


def values_injective(X):
    return all(is_injective(X.value(q)) for q in X.support())


def certify_semiprojective(X, filtration=None):
    """Strongest available reason for X to lie in the left perpendicular of E.

    ``filtration`` is an optional increasing list of monomorphisms into X
    whose successive quotients should be projective objects.
    """
    if _semisimple(X.alg):
        return Certificate(X, "semiprojective", SEMISIMPLE, "coefficient algebra has global dimension 0")
    kind = X.cat.spec.kind
    if kind in LINEAR_KINDS and not X.cat.is_opposite and values_projective(X):
        return Certificate(X, "semiprojective", RIGHT_BOUNDED,
                           "finite support, every value projective over A")
    if filtration is not None:
        bad = _check_filtration(X, filtration)
        if bad is None:
            return Certificate(X, "semiprojective", FILTRATION,
                               f"{len(filtration)} steps with projective quotients")
        return Certificate(X, "semiprojective", UNKNOWN, bad)
    return Certificate(X, "semiprojective", UNKNOWN, "no applicable criterion")


def certify_semiinjective(X):
    if _semisimple(X.alg):
        return Certificate(X, "semiinjective", SEMISIMPLE, "coefficient algebra has global dimension 0")
    kind = X.cat.spec.kind
    if kind in LINEAR_KINDS and not X.cat.is_opposite and values_injective(X):
        return Certificate(X, "semiinjective", LEFT_BOUNDED,
                           "finite support, every value injective over A")
    return Certificate(X, "semiinjective", UNKNOWN, "no applicable criterion")


def factor_through_mono(mono, phi):
    """The unique psi with mono @ psi == phi, or None if phi does not factor."""
    from .exactlin import solve
    f = phi.source.field
    comps = {}
    for o in phi.source.vertices():
        M = phi.component(o)
        J = mono.component(o)
        cols = []
        for c in M.columns():
            if not any(c):
                cols.append((f.zero,) * mono.source.dim(o))
                continue
            x = solve(J, c) if J.ncols else None
            if x is None:
                return None
            cols.append(x)
        if mono.source.dim(o):
            comps[o] = Matrix.from_columns(f, cols, mono.source.dim(o))
    return RepMorphism(phi.source, mono.source, comps)


def _check_filtration(X, steps):
    prev = None
    for n, inc in enumerate(steps):
        if inc.target is not X or not inc.is_mono():
            return f"step {n} is not a monomorphism into the object"
        if prev is None:
            Q = inc.source
        else:
            j = factor_through_mono(inc, prev)
            if j is None:
                return f"step {n - 1} is not contained in step {n}"
            Q, _ = cokernel(j)
        if not is_projective(Q):
            return f"quotient at step {n} is not projective"
        prev = inc
    if prev is None or not prev.is_iso():
        return "filtration does not end at the object"
    return None


# ---------------------------------------------------------------------------
# conflations, suspension, loops


@dataclass
class Conflation:
    """0 -> source -> middle -> target -> 0 with the middle term projective."""

    source: Representation
    middle: Representation
    target: Representation
    mono: RepMorphism
    epi: RepMorphism
    blocks: list = dc_field(default_factory=list)  # (q, S^-1 q) per summand of the middle term
    incs: list = dc_field(default_factory=list)
    projs: list = dc_field(default_factory=list)
    certificate: Optional[Certificate] = None

    def to_json(self, full=False):
        from .labels import format_label
        out = {
            "source": self.source.to_json(),
            "middle": self.middle.to_json(),
            "target": self.target.to_json(),
            "middle_summands": [[format_label(q), format_label(s)] for q, s in self.blocks],
        }
        if full:
            out["mono"] = self.mono.to_json()
            out["epi"] = self.epi.to_json()
        return out


def _require_semiprojective(P, what):
    cert = certify_semiprojective(P)
    if not cert:
        raise PreconditionError(f"{what} needs a certified semiprojective object ({cert.detail})")
    if not _semisimple(P.alg) and not values_projective(P):
        raise PreconditionError(f"{what} needs projective values over A")
    return cert


def _embedding_block(P, q, src, serre, p, v):
    """Component at (p, v) of the map P -> Q(src, -) ⊗ P(q) into one summand."""
    cat, f = P.cat, P.field
    nq = cat.dim(p, q)
    na = cat.dim(src, p)
    m = P.dim((q, v))
    if not nq or not na or not m or not P.dim((p, v)):
        return Matrix.zeros(f, na * m, P.dim((p, v)))
    Ginv = serre.pairing(src, p).inverse()  # rows α in Q(src, p), columns β in Q(p, q)
    B = [P.qbasis(p, q, j, v) for j in range(nq)]
    rows = []
    for a in range(na):
        acc = None
        for j in range(nq):
            c = Ginv.rows[a][j]
            if c:
                term = B[j].scale(c)
                acc = term if acc is None else acc + term
        if acc is None:
            acc = Matrix.zeros(f, m, P.dim((p, v)))
        rows.extend(acc.rows)
    return Matrix.trusted(f, rows, P.dim((p, v)))


def embed_projective(P):
    """The conflation P -> R -> ΣP with R = ⊕_q Q(S⁻¹q, -) ⊗ P(q).

    The embedding sends x in P(p) to the element of ⊕_q Q(S⁻¹q, p) ⊗ P(q)
    dual, under the Serre pairing, to β ↦ P(β)x.
    """
    cached = P.__dict__.get("_conflation")
    if cached is not None:
        return cached
    cert = _require_semiprojective(P, "the projective embedding")
    cat = P.cat
    serre = cat.serre
    qs = P.support()
    if not qs:
        conf = Conflation(P, P, P, identity(P), identity(P), [], [], [], cert)
        P._conflation = conf
        return conf
    blocks = []
    for q in qs:
        src = serre.inv(q)
        cat.require_core([src], "the projective embedding")
        blocks.append((q, src))
    parts = [induced_rep(cat, src, P.value(q)) for q, src in blocks]
    R, incs, projs = direct_sum(*parts)
    f = P.field
    comps = {}
    for (p, v) in P.vertices():
        total = Matrix.zeros(f, R.dim((p, v)), P.dim((p, v)))
        for (q, src), part, inc in zip(blocks, parts, incs):
            if not part.dim((p, v)):
                continue
            blk = _embedding_block(P, q, src, serre, p, v)
            total = total + inc.component((p, v)) @ blk
        comps[(p, v)] = total
    mono = RepMorphism(P, R, comps)
    if not mono.is_natural() or not mono.is_mono():
        raise RuntimeError("projective embedding is not a natural monomorphism")
    C, epi = cokernel(mono)
    conf = Conflation(P, R, C, mono, epi, blocks, incs, projs, cert)
    P._conflation = conf
    return conf


def suspend(P):
    return embed_projective(P).target


def loop_conflation(P):
    """ΩP -> F -> P with F the projective cover of P."""
    F, eps = projective_cover(P)
    K, inc = kernel(eps)
    return Conflation(K, F, P, inc, eps)


def loop(P):
    return loop_conflation(P).source


def suspension_power(P, k):
    if k < 1:
        raise ValueError("k must be at least 1")
    X = P
    for _ in range(k):
        X = suspend(X)
    return X


def _section(epi):
    """Right inverses of an epimorphism, per vertex."""
    return {o: right_inverse(epi.component(o)) for o in epi.target.vertices()}


def middle_map(phi):
    """The map of projective-injective middles R_X -> R_Y extending phi."""
    X, Y = phi.source, phi.target
    cx, cy = embed_projective(X), embed_projective(Y)
    f = X.field
    yblock = {q: i for i, (q, _) in enumerate(cy.blocks)}
    comps = {}
    for o in cx.middle.vertices():
        r, w = o
        if not cy.middle.dim(o):
            continue
        total = Matrix.zeros(f, cy.middle.dim(o), cx.middle.dim(o))
        for i, (q, src) in enumerate(cx.blocks):
            j = yblock.get(q)
            if j is None:
                continue
            k = X.cat.dim(src, r)
            if not k or not X.dim((q, w)) or not Y.dim((q, w)):
                continue
            blk = kron(Matrix.identity(f, k), phi.component((q, w)))
            total = total + cy.incs[j].component(o) @ blk @ cx.projs[i].component(o)
        comps[o] = total
    return RepMorphism(cx.middle, cy.middle, comps)


def suspend_morphism(phi):
    """Σφ: ΣX -> ΣY induced on cokernels by the extension of phi to the middles."""
    cx, cy = embed_projective(phi.source), embed_projective(phi.target)
    h = middle_map(phi)
    sec = _section(cx.epi)
    comps = {}
    for o in cx.target.vertices():
        if cy.target.dim(o):
            comps[o] = cy.epi.component(o) @ h.component(o) @ sec[o]
    return RepMorphism(cx.target, cy.target, comps)


# ---------------------------------------------------------------------------
# the classic shift for complexes


def classic_shift(P):
    """(ΣP)_d = P_{d-1} with differential -∂, over the complex-shaped category."""
    cat = P.cat
    if cat.spec.kind not in LINEAR_KINDS or cat.spec.zero_length != 2:
        raise ValueError("the shift with sign flip is the suspension only for complexes")
    f = P.field
    lo, hi = cat.window
    dims, qmaps, amaps = {}, {}, {}
    for (q, v) in P.vertices():
        if q + 1 > hi:
            raise ValueError("shift leaves the window")
        dims[(q + 1, v)] = P.dim((q, v))
    for (a, v), M in P._qmaps.items():
        src = cat.arrows[a].source
        b = cat.arrow_index[f"d{src + 1}"]
        qmaps[(b, v)] = M.scale(-1)
    for (q, b), M in P._amaps.items():
        amaps[(q + 1, b)] = M
    return Representation(cat, P.alg, dims, qmaps, amaps)


def shift_comparison(P):
    """Explicit isomorphism classic_shift(P) -> suspend(P).

    Degree d of the shift is P_{d-1}, which sits in the middle term as the
    identity-path part of the summand generated at d = S⁻¹(d-1); projecting
    to the cokernel gives the comparison map.
    """
    conf = embed_projective(P)
    S = classic_shift(P)
    block = {q: i for i, (q, _) in enumerate(conf.blocks)}
    comps = {}
    for (d, v) in S.vertices():
        # Q(d, d) is spanned by the identity, so the summand at (d, v) is P(d-1, v) itself
        inc = conf.incs[block[d - 1]].component((d, v))
        comps[(d, v)] = conf.epi.component((d, v)) @ inc
    return S, RepMorphism(S, conf.target, comps)


# ---------------------------------------------------------------------------
# stable Homs


class StableHom:
    """Hom(X, Y) modulo the maps factoring through a projective object."""

    def __init__(self, ambient, sub_vectors, label="projective"):
        self.ambient = ambient
        self.source, self.target = ambient.source, ambient.target
        self.quotient = QuotientMap(ambient.source.field, ambient.dim, sub_vectors)
        self.sub_dim = self.quotient.sub_dim
        self.dim = self.quotient.dim
        self.label = label

    @property
    def sub_basis(self):
        return [self.ambient.combine(r) for r in self.quotient._rows]

    @property
    def reps(self):
        return [self.ambient.basis[j] for j in self.quotient.free]

    def coords(self, phi):
        return self.quotient(self.ambient.coords(phi))

    def is_zero(self, phi):
        return self.quotient.contains(self.ambient.coords(phi))

    def to_json(self, full=False):
        out = {"dim": self.dim, "hom_dim": self.ambient.dim, "factoring_dim": self.sub_dim,
               "through": self.label}
        if full:
            out["representatives"] = [m.to_json() for m in self.reps]
        return out


def stable_hom(X, Y):
    """Quotient of Hom(X, Y) by {π∘ψ : ψ: X -> F} for the projective cover π: F ↠ Y."""
    H = hom_space(X, Y)
    F, pi = projective_cover(Y)
    sub = [H.coords(pi @ psi) for psi in hom_space(X, F).basis]
    return StableHom(H, sub)


def stable_hom_injective(X, Y):
    """Quotient of Hom(X, Y) by {ψ∘ι : ψ: R -> Y} for the injective embedding ι: X -> R."""
    H = hom_space(X, Y)
    conf = embed_projective(X)
    sub = [H.coords(psi @ conf.mono) for psi in hom_space(conf.middle, Y).basis]
    return StableHom(H, sub, "injective")


def factors_through_projective(phi):
    return stable_hom(phi.source, phi.target).is_zero(phi)


def is_stably_zero(X):
    """The identity of X factors through a projective, i.e. X is projective."""
    return stable_hom(X, X).is_zero(identity(X))


# ---------------------------------------------------------------------------
# semiprojective resolutions


@dataclass
class SemiprojResolution:
    source: Representation  # the resolved object X
    P: Representation
    phi: RepMorphism  # P -> X
    certificate: Certificate
    truncated_at: Optional[int] = None
    weq_objects: Optional[list] = None  # objects on which the weq check is meaningful

    def verify(self):
        return is_weq(self.phi, objects=self.weq_objects)


def semiproj_resolution(X):
    """A semiprojective P with a weak equivalence P -> X.

    Over semisimple coefficients (or when X is already certified) this is the
    identity.  For complexes and N-complexes over a bound quiver algebra the
    resolution is built degree by degree from the bottom of the support: at
    degree q, P_q is the projective cover of the pullback of X_q -> X_{q-1}
    along the maps from the part of P_{q-1} killed by the next N-2
    differentials.  The construction stops when the pullback vanishes above
    the support or at the top of the window core, which is then recorded.
    """
    cert = certify_semiprojective(X)
    if cert:
        return SemiprojResolution(X, X, identity(X), cert)
    cat, alg = X.cat, X.alg
    if cat.spec.kind not in LINEAR_KINDS or has_cycles(cat) or cat.is_opposite:
        raise UnsupportedError(
            "semiprojective resolutions over non-semisimple coefficients are implemented "
            "only for complexes and N-complexes (categories without cycles of linear shape)")
    N = cat.spec.zero_length
    lo, hi = cat.window
    top = hi - (N - 1)
    supp = X.support()
    start, last = supp[0], supp[-1]
    P = {}  # degree -> A-module
    d = {}  # degree -> morphism P_q -> P_{q-1}
    phi = {}  # degree -> morphism P_q -> X_q
    truncated = None

    def xdiff(q):
        a = cat.arrow_index.get(f"d{q}")
        comps = {}
        for v in alg.vertices:
            if X.dim((q, v)) and X.dim((q - 1, v)):
                comps[(POINT, v)] = X.qmap(a, v)
        return RepMorphism(X.value(q), X.value(q - 1), comps)

    def composite(q, steps):
        """P_q -> P_{q-steps}, or None when some intermediate term is missing."""
        m = identity(P[q])
        for k in range(q, q - steps, -1):
            if k - 1 not in P:
                return None
            m = d[k] @ m
        return m

    q = start
    while q <= top:
        Xq = X.value(q)
        if q - 1 in P:
            # part of P_{q-1} on which the next N-1 differentials vanish
            c = composite(q - 1, N - 1)
            if c is None or c.target.is_zero():
                K, kinc = P[q - 1], identity(P[q - 1])
            else:
                K, kinc = kernel(c)
            if K.is_zero():
                W, wx, wp = Xq, identity(Xq), None
            else:
                S, incs, projs = direct_sum(Xq, K)
                dx = xdiff(q)
                gap = dx @ projs[0] - phi[q - 1] @ kinc @ projs[1]
                W, winc = kernel(gap)
                wx = projs[0] @ winc
                wp = kinc @ projs[1] @ winc
        else:
            W, wx, wp = Xq, identity(Xq), None
        if W.is_zero():
            if q > last:
                break
            q += 1
            continue
        F, eps = projective_cover(W)
        P[q] = F
        phi[q] = wx @ eps
        if wp is not None:
            d[q] = wp @ eps
        elif q - 1 in P:
            d[q] = zero_morphism(F, P[q - 1])
        q += 1
    else:
        truncated = top

    # assemble the N-complex of projective A-modules
    dims, qmaps, amaps, comps = {}, {}, {}, {}
    for k, F in P.items():
        for v in alg.vertices:
            if F.dim((POINT, v)):
                dims[(k, v)] = F.dim((POINT, v))
                if X.dim((k, v)):
                    comps[(k, v)] = phi[k].component((POINT, v))
        for b in range(len(alg.arrows)):
            amaps[(k, b)] = F.amap(POINT, b)
    for k, m in d.items():
        a = cat.arrow_index[f"d{k}"]
        for v in alg.vertices:
            if m.source.dim((POINT, v)) and m.target.dim((POINT, v)):
                qmaps[(a, v)] = m.component((POINT, v))
    PX = Representation(cat, alg, dims, qmaps, amaps)
    mor = RepMorphism(PX, X, comps, check=True)
    pcert = certify_semiprojective(PX)
    weq_objects = None
    if truncated is not None:
        from .homology import cohom_relevant
        qs = cohom_relevant(cat, set(PX.support()) | set(supp), 2)
        weq_objects = [o for o in qs if cat.column(o) <= truncated - 2 * N]
    return SemiprojResolution(X, PX, mor, pcert, truncated, weq_objects)


def dq_hom(X, Y):
    """Hom in the Q-shaped derived category via semiprojective resolutions.

    When the resolution of Y had to be cut at the window top, the target is
    Y itself instead: every object is fibrant in the projective structure, so
    Hom(P_X, Y) modulo maps through projectives is the same group, and it
    avoids the spurious homology at the cut.
    """
    rx, ry = semiproj_resolution(X), semiproj_resolution(Y)
    return stable_hom(rx.P, Y if ry.truncated_at is not None else ry.P)


# ---------------------------------------------------------------------------
# cones and triangles


@dataclass
class Triangle:
    X: Representation
    Y: Representation
    C: Representation
    SX: Representation
    f: RepMorphism
    g: RepMorphism
    h: RepMorphism

    def legs(self):
        return [self.f, self.g, self.h]

    def to_json(self, full=False):
        out = {name: obj.to_json() for name, obj in
               (("X", self.X), ("Y", self.Y), ("C", self.C), ("SX", self.SX))}
        if full:
            out["legs"] = [m.to_json() for m in self.legs()]
        return out


def cone(phi):
    """Mapping cone as the pushout of X -> R -> ΣX along phi."""
    X, Y = phi.source, phi.target
    _require_semiprojective(X, "cone")
    _require_semiprojective(Y, "cone")
    conf = embed_projective(X)
    S, incs, projs = direct_sum(conf.middle, Y)
    u = morphism_into_sum(S, [conf.mono, phi.scale(-1)])
    C, pc = cokernel(u)
    g = pc @ incs[1]
    sec = _section(pc)
    # (r, y) ↦ π(r) kills the image of u because π∘ι = 0
    down = conf.epi @ projs[0]
    hcomps = {}
    for o in C.vertices():
        if conf.target.dim(o):
            hcomps[o] = down.component(o) @ sec[o]
    h = RepMorphism(C, conf.target, hcomps)
    return Triangle(X, Y, C, conf.target, phi, g, h)


# ---------------------------------------------------------------------------
# model structures


def classify_morphism(phi, structure="projective"):
    """Flags weq/cof/fib/trivial_cof/trivial_fib; None marks an undecided flag."""
    mono, epi = phi.is_mono(), phi.is_epi()
    weq = is_weq(phi)
    K, _ = kernel(phi)
    C, _ = cokernel(phi)
    if structure == "projective":
        fib = epi
        if mono:
            cert = certify_semiprojective(C)
            cof = True if cert else None
        else:
            cof = False
        trivial_cof = mono and is_projective(C)
        trivial_fib = epi and is_exact(K)
    elif structure == "injective":
        cof = mono
        if epi:
            cert = certify_semiinjective(K)
            fib = True if cert else None
        else:
            fib = False
        trivial_fib = epi and is_injective(K)
        trivial_cof = mono and is_exact(C)
    else:
        raise ValueError("structure must be 'projective' or 'injective'")
    return {"structure": structure, "weq": weq, "cof": cof, "fib": fib,
            "trivial_cof": trivial_cof, "trivial_fib": trivial_fib,
            "mono": mono, "epi": epi}


# ---------------------------------------------------------------------------
# perfect objects


def is_strictly_perfect(X):
    return values_projective(X)


def perfect_witness(X, K, phi):
    if phi.source is not K or phi.target is not X:
        raise ValueError("phi must be a morphism K -> X")
    return is_strictly_perfect(K) and bool(certify_semiprojective(K)) and is_weq(phi)


# ---------------------------------------------------------------------------
# projective summands and stable isomorphism


def _identity_coefficient_form(X, o):
    """Matrix B[x, r] = identity coefficient of r(x) for r in Hom(X, P) and x in X(o)."""
    P = free_rep(X.cat, X.alg, [o])
    H = hom_space(X, P)
    f = X.field
    n = X.dim(o)
    rows = []
    for i in range(n):
        e = [f.zero] * n
        e[i] = f.one
        rows.append([r.component(o).apply(e)[0] if P.dim(o) else f.zero for r in H.basis])
    return P, H, Matrix.trusted(f, rows, H.dim)


def strip_projective_summands(X):
    """(X', [removed vertices]) with X ≅ X' ⊕ (projectives) and X' free of them.

    A summand P(o) exists iff some x in X(o) and r: X -> P(o) have r(x) with
    a nonzero identity coefficient, because End P(o) is local; then X splits
    as the image of x plus ker r.
    """
    removed = []
    current = X
    changed = True
    while changed:
        changed = False
        for o in current.vertices():
            P, H, B = _identity_coefficient_form(current, o)
            if not H.dim or B.is_zero():
                continue
            i, j = next((i, j) for i, row in enumerate(B.rows) for j, c in enumerate(row) if c)
            K, _ = kernel(H.basis[j])
            removed.append(o)
            current = K
            changed = True
            break
    return current, removed


def find_isomorphism(X, Y, rng=None, tries=200):
    """An explicit isomorphism X -> Y, or None if none is found."""
    if X.vertices() != Y.vertices() or any(X.dim(o) != Y.dim(o) for o in X.vertices()):
        return None
    H = hom_space(X, Y)
    f = X.field
    if X.is_zero():
        return RepMorphism(X, Y, {})
    if not H.dim:
        return None
    p = f.characteristic
    if p and p ** H.dim <= 4096:
        import itertools
        for coeffs in itertools.product(range(p), repeat=H.dim):
            phi = H.combine([f(c) for c in coeffs])
            if phi.is_iso():
                return phi
        return None
    rng = rng or random.Random(0)
    span = p - 1 if p else 50
    for _ in range(tries):
        phi = H.combine([f(rng.randint(-span if not p else 0, span)) for _ in range(H.dim)])
        if phi.is_iso():
            return phi
    return None


@dataclass
class StableIso:
    X_core: Representation
    Y_core: Representation
    removed_X: list
    removed_Y: list
    iso: Optional[RepMorphism]

    def __bool__(self):
        return self.iso is not None


def stably_isomorphic(X, Y, rng=None):
    Xc, rx = strip_projective_summands(X)
    Yc, ry = strip_projective_summands(Y)
    return StableIso(Xc, Yc, rx, ry, find_isomorphism(Xc, Yc, rng))
