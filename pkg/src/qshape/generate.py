"""Random instances for property tests and demos.

All generators take a ``random.Random`` so runs are reproducible.
"""

from .exactlin import Matrix, kernel_basis
from .rep import (
    POINT, RepMorphism, amodule, cokernel, field_algebra, free_rep, free_morphism,
    hom_space, kernel, make_rep,
)


def _scalar(field, rng, sparse=0.3):
    if rng.random() < sparse:
        return field.zero
    if field.characteristic:
        return field(rng.randrange(field.characteristic))
    return field(rng.randint(-2, 2))


def random_matrix(field, rng, rows, cols, sparse=0.3):
    return Matrix.trusted(field, [[_scalar(field, rng, sparse) for _ in range(cols)] for _ in range(rows)], cols)


def _low_rank(field, rng, rows, cols):
    """A random matrix whose rank is drawn uniformly up to min(rows, cols)."""
    r = rng.randint(0, min(rows, cols))
    A = random_matrix(field, rng, rows, r, 0.0)
    B = random_matrix(field, rng, r, cols, 0.0)
    if r == 0:
        return Matrix.zeros(field, rows, cols)
    return A @ B


def random_linear_rep(cat, rng, lo, hi, maxdim=3, dims=None):
    """A random N-complex of vector spaces supported in degrees [lo, hi].

    Each differential is drawn from the maps killed by the composite of the
    previous N-1 differentials, so the relation holds by construction.
    """
    f = cat.field
    N = cat.spec.zero_length
    if dims is None:
        dims = {q: rng.randint(0, maxdim) for q in range(lo, hi + 1)}
    maps = {}
    for q in range(lo + 1, hi + 1):
        src, tgt = dims.get(q, 0), dims.get(q - 1, 0)
        if not src or not tgt:
            continue
        # composite d_{q-N+1} ... d_{q-1}: X_{q-1} -> X_{q-N}
        C = Matrix.identity(f, tgt)
        for k in range(q - 1, q - N, -1):
            D = maps.get(k)
            if D is None:
                C = None
                break
            C = D @ C
        if C is None or C.nrows == 0:
            K = Matrix.identity(f, tgt)
        else:
            ker = kernel_basis(C)
            if not ker:
                continue
            K = Matrix.from_columns(f, ker, tgt)
        R = _low_rank(f, rng, K.ncols, src)
        maps[q] = K @ R
    values = {q: n for q, n in dims.items() if n}
    arrows = {f"d{q}": M for q, M in maps.items() if not M.is_zero()}
    return make_rep(cat, values, arrows)


def random_linear_rep_over(cat, alg, rng, values):
    """A random N-complex with prescribed A-module values {degree: module}.

    The differential at each degree is a random A-linear map chosen among
    those killed by the composite of the previous N-1 differentials.
    """
    f = cat.field
    N = cat.spec.zero_length
    degs = sorted(values)
    maps = {}
    for q in degs:
        if q - 1 not in values:
            continue
        H = hom_space(values[q], values[q - 1])
        if not H.dim:
            continue
        comp = None
        ok = True
        for k in range(q - 1, q - N, -1):
            if k not in maps:
                ok = False
                break
            comp = maps[k] if comp is None else maps[k] @ comp
        if ok and comp is not None:
            # linear conditions on coefficients: comp ∘ h = 0
            cols = []
            for h in H.basis:
                flat = []
                c = comp @ h
                for o in c.vertices():
                    for row in c.component(o).rows:
                        flat.extend(row)
                cols.append(flat)
            n = len(cols[0]) if cols else 0
            if n:
                M = Matrix.from_columns(f, cols, n)
                sols = kernel_basis(M)
            else:
                sols = [tuple(f.one if i == j else f.zero for i in range(H.dim)) for j in range(H.dim)]
        else:
            sols = [tuple(f.one if i == j else f.zero for i in range(H.dim)) for j in range(H.dim)]
        if not sols:
            continue
        coeffs = [f.zero] * H.dim
        for s in sols:
            c = _scalar(f, rng, 0.3)
            for i, x in enumerate(s):
                coeffs[i] = f.norm(coeffs[i] + c * x)
        maps[q] = H.combine(coeffs)
    arrows = {}
    for q, h in maps.items():
        M = h.component_at(POINT)
        if not M.is_zero():
            arrows[f"d{q}"] = M
    return make_rep(cat, dict(values), arrows, alg)


def free_amodule(alg, n):
    """A^n as a left module over a one-vertex algebra."""
    if alg.is_field:
        return amodule(alg, n)
    if len(alg.vertices) != 1:
        raise ValueError("free_amodule expects a one-vertex algebra")
    from .rep import point_category
    pt = point_category(alg.field)
    F = free_rep(pt, alg, [(POINT, alg.vertices[0])] * n)
    return F


def random_morphism(X, Y, rng, H=None):
    H = H or hom_space(X, Y)
    f = X.field
    return H.combine([_scalar(f, rng, 0.2) for _ in range(H.dim)])


def random_presented_rep(cat, rng, objects, alg=None, ngens=3, nrels=2):
    """Cokernel of a random map between free representations.

    Works for every kind of category, including the cyclic ones where the
    degree-by-degree sampler does not apply.
    """
    alg = alg or field_algebra(cat.field)
    f = cat.field
    gens0 = [(rng.choice(objects), rng.choice(alg.vertices)) for _ in range(rng.randint(1, ngens))]
    gens1 = [(rng.choice(objects), rng.choice(alg.vertices)) for _ in range(rng.randint(0, nrels))]
    F0 = free_rep(cat, alg, gens0)
    if not gens1:
        return F0
    F1 = free_rep(cat, alg, gens1)
    elements = []
    for o in gens1:
        n = F0.dim(o)
        elements.append(tuple(_scalar(f, rng, 0.4) for _ in range(n)))
    phi = free_morphism(F1, F0, elements)
    C, _ = cokernel(phi)
    return C
