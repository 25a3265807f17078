"""Exact dense linear algebra over the rationals and prime fields.

Scalars over Q are ints when integral and ``fractions.Fraction`` otherwise;
scalars over F_p are plain ints in ``range(p)``.  Matrices are immutable row-major tuples.  Echelon forms
always take the leftmost available pivot column and the topmost row holding
a nonzero entry in it, so every basis produced here is reproducible.
"""

from fractions import Fraction
from functools import lru_cache


class Field:
    """Common interface of the two field families."""

    characteristic = 0
    tag = "?"

    def __call__(self, value):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def norm(self, x):
        return x

    def to_str(self, x):
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.tag == self.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag


class Rationals(Field):
    tag = "Q"
    characteristic = 0
    # integral values stay plain ints; they hash and compare like Fractions
    # and keep the common unimodular case out of Fraction arithmetic
    zero = 0
    one = 1

    def __call__(self, value):
        if isinstance(value, str):
            value = Fraction(value.strip())
        elif type(value) is int:
            return value
        else:
            value = Fraction(value)
        return value.numerator if value.denominator == 1 else value

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if x == 1 or x == -1:
            return int(x)
        return 1 / Fraction(x)

    def norm(self, x):
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def to_str(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PrimeField(Field):
    def __init__(self, p):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.tag = f"Fp:{p}"
        self.zero = 0
        self.one = 1

    def __call__(self, value):
        p = self.characteristic
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{p}")
            return value.numerator * pow(value.denominator, p - 2, p) % p
        return int(value) % p

    def inv(self, x):
        p = self.characteristic
        if x % p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, p - 2, p)

    def norm(self, x):
        return x % self.characteristic


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def field_from_tag(tag):
    """Inverse of ``Field.tag``: ``"Q"`` or ``"Fp:<p>"``."""
    if tag == "Q":
        return QQ
    if tag.startswith("Fp:"):
        return GF(int(tag[3:]))
    raise ValueError(f"unknown field tag {tag!r}")


# ---------------------------------------------------------------------------
# row reduction on plain lists


def rref_rows(rows, ncols, field):
    """Reduced row echelon form of a list of rows.

    Returns ``(rows, pivots)`` with only the nonzero rows kept.
    """
    rows = [list(r) for r in rows]
    p = field.characteristic
    pivots = []
    r = 0
    n = len(rows)
    for c in range(ncols):
        if r == n:
            break
        piv = None
        for i in range(r, n):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        lead = pr[c]
        if lead != 1:
            inv = field.inv(lead)
            if p:
                pr = [x * inv % p for x in pr]
            else:
                pr = [x * inv for x in pr]
            rows[r] = pr
        for i in range(n):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    if p:
                        rows[i] = [(a - f * b) % p for a, b in zip(ri, pr)]
                    else:
                        rows[i] = [a - f * b for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank_of_rows(rows, ncols, field):
    return len(rref_rows(rows, ncols, field)[1])


def kernel_from_rref(rrows, pivots, ncols, field):
    """Null space basis read off an RREF: free variable set to 1."""
    pset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(rrows, pivots):
            if row[f]:
                v[pc] = field.norm(-row[f])
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# Matrix


class Matrix:
    """Immutable dense matrix over a field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None, _trusted=False):
        self.field = field
        if _trusted:
            self.rows = rows
        else:
            self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        if not _trusted:
            for r in self.rows:
                if len(r) != ncols:
                    raise ValueError("ragged matrix")

    # constructors

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, tuple((z,) * ncols for _ in range(nrows)), ncols, _trusted=True)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        rows = tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        return cls(field, rows, n, _trusted=True)

    @classmethod
    def from_columns(cls, field, columns, nrows):
        columns = list(columns)
        rows = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls(field, rows, len(columns), _trusted=True)

    @classmethod
    def trusted(cls, field, rows, ncols):
        return cls(field, tuple(tuple(r) for r in rows), ncols, _trusted=True)

    # basic protocol

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.tag, self.ncols, self.rows))

    def __repr__(self):
        f = self.field
        body = "; ".join(" ".join(f.to_str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.field.tag}]({self.nrows}x{self.ncols}: {body})"

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self):
        rows = tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols))
        return Matrix(self.field, rows, self.nrows, _trusted=True)

    # arithmetic

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.characteristic
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            if not nz:
                out.append((self.field.zero,) * other.ncols)
                continue
            row = []
            for col in cols:
                s = 0
                for k, a in nz:
                    b = col[k]
                    if b:
                        s += a * b
                row.append(s % p if p else self.field.norm(s))
            out.append(tuple(row))
        return Matrix(self.field, tuple(out), other.ncols, _trusted=True)

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        p = self.field.characteristic
        nz = [(k, a) for k, a in enumerate(vec) if a]
        out = []
        for r in self.rows:
            s = 0
            for k, a in nz:
                b = r[k]
                if b:
                    s += a * b
            out.append(s % p if p else self.field.norm(s))
        return tuple(out)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        p = self.field.characteristic
        if p:
            rows = tuple(
                tuple((a + sign * b) % p for a, b in zip(r, s))
                for r, s in zip(self.rows, other.rows)
            )
        else:
            rows = tuple(
                tuple(a + sign * b for a, b in zip(r, s))
                for r, s in zip(self.rows, other.rows)
            )
        return Matrix(self.field, rows, self.ncols, _trusted=True)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        f = self.field
        c = f(c)
        rows = tuple(tuple(f.norm(c * x) for x in r) for r in self.rows)
        return Matrix(f, rows, self.ncols, _trusted=True)

    # block operations

    def submatrix(self, row_idx, col_idx):
        rows = tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx)
        return Matrix(self.field, rows, len(col_idx), _trusted=True)

    @staticmethod
    def hstack(field, blocks, nrows):
        if not blocks:
            return Matrix.zeros(field, nrows, 0)
        rows = tuple(sum((b.rows[i] for b in blocks), ()) for i in range(nrows))
        return Matrix(field, rows, sum(b.ncols for b in blocks), _trusted=True)

    @staticmethod
    def vstack(field, blocks, ncols):
        rows = tuple(r for b in blocks for r in b.rows)
        return Matrix(field, rows, ncols, _trusted=True)

    @staticmethod
    def block_diag(field, blocks):
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        z = field.zero
        rows = []
        off = 0
        for b in blocks:
            for r in b.rows:
                rows.append((z,) * off + r + (z,) * (m - off - b.ncols))
            off += b.ncols
        return Matrix(field, tuple(rows), m, _trusted=True)

    # reductions

    def rref(self):
        rows, piv = rref_rows(self.rows, self.ncols, self.field)
        return Matrix(self.field, tuple(tuple(r) for r in rows), self.ncols, _trusted=True), piv

    def rank(self):
        return rank_of_rows(self.rows, self.ncols, self.field)

    def kernel(self):
        rows, piv = rref_rows(self.rows, self.ncols, self.field)
        return kernel_from_rref(rows, piv, self.ncols, self.field)

    def image(self):
        """Basis of the column space (the pivot columns of the matrix)."""
        _, piv = rref_rows(self.rows, self.ncols, self.field)
        return [self.column(j) for j in piv]

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self):
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        f = self.field
        aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(self.rows)]
        rows, piv = rref_rows(aug, 2 * n, f)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("singular matrix")
        return Matrix(f, tuple(tuple(r[n:]) for r in rows[:n]), n, _trusted=True)

    # serialization

    def to_json(self):
        f = self.field
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "field": f.tag,
            "entries": [f.to_str(x) for r in self.rows for x in r],
        }

    @classmethod
    def from_json(cls, data):
        f = field_from_tag(data["field"])
        r, c = data["rows"], data["cols"]
        ent = data["entries"]
        if len(ent) != r * c:
            raise ValueError("entries length does not match rows x cols")
        rows = [ent[i * c:(i + 1) * c] for i in range(r)]
        return cls(f, rows, c)


# ---------------------------------------------------------------------------
# the three public operations


def kernel_basis(M):
    """Basis of {v : Mv = 0}, one vector per free column with that entry 1."""
    return M.kernel()


def solve(M, b):
    """A solution of Mx = b with zeros in non-pivot coordinates, or None."""
    if len(b) != M.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.nrows}")
    f = M.field
    b = [f(x) for x in b]
    aug = [list(r) + [bi] for r, bi in zip(M.rows, b)]
    rows, piv = rref_rows(aug, M.ncols + 1, f)
    if piv and piv[-1] == M.ncols:
        return None
    x = [f.zero] * M.ncols
    for row, pc in zip(rows, piv):
        x[pc] = row[-1]
    return tuple(x)


def subquotient_dim(ambient_dim, U, W, field):
    """dim span(U) / (span(U) ∩ span(W)) = rank(U ∪ W) − rank(W)."""
    for v in list(U) + list(W):
        if len(v) != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
    U = [[field(x) for x in v] for v in U]
    W = [[field(x) for x in v] for v in W]
    return rank_of_rows(U + W, ambient_dim, field) - rank_of_rows(W, ambient_dim, field)


# ---------------------------------------------------------------------------
# helpers built on the above


def left_inverse(M):
    """L with L @ M = I for M of full column rank."""
    f = M.field
    rows, piv = rref_rows(M.T.rows, M.nrows, f)
    if len(piv) != M.ncols:
        raise ValueError("matrix is not injective")
    sub = M.submatrix(piv, range(M.ncols)).inverse()
    z = f.zero
    out = [[z] * M.nrows for _ in range(M.ncols)]
    for j, r in enumerate(piv):
        for i in range(M.ncols):
            out[i][r] = sub.rows[i][j]
    return Matrix.trusted(f, out, M.nrows)


def right_inverse(M):
    """R with M @ R = I for M of full row rank."""
    return left_inverse(M.T).T


class QuotientMap:
    """The projection V -> V / W for W given by spanning vectors.

    Coordinates on the quotient are the non-pivot coordinates left after
    reducing by the echelon form of W, so ``section`` picks standard basis
    vectors as representatives.
    """

    def __init__(self, field, dim, spanning):
        self.field = field
        self.ambient = dim
        rows, piv = rref_rows([list(v) for v in spanning], dim, field)
        self._rows = rows
        self._pivots = piv
        pset = set(piv)
        self.free = [j for j in range(dim) if j not in pset]
        self.dim = len(self.free)

    @property
    def sub_dim(self):
        return len(self._pivots)

    def reduce(self, v):
        f = self.field
        p = f.characteristic
        v = list(v)
        for row, pc in zip(self._rows, self._pivots):
            c = v[pc]
            if c:
                if p:
                    v = [(a - c * b) % p for a, b in zip(v, row)]
                else:
                    v = [a - c * b for a, b in zip(v, row)]
        return v

    def __call__(self, v):
        v = self.reduce(v)
        return tuple(v[j] for j in self.free)

    def contains(self, v):
        return not any(self.reduce(v))

    def matrix(self):
        cols = []
        z, o = self.field.zero, self.field.one
        for j in range(self.ambient):
            e = [z] * self.ambient
            e[j] = o
            cols.append(self(e))
        return Matrix.from_columns(self.field, cols, self.dim)

    def section(self):
        z, o = self.field.zero, self.field.one
        cols = []
        for j in self.free:
            e = [z] * self.ambient
            e[j] = o
            cols.append(tuple(e))
        return Matrix.from_columns(self.field, cols, self.ambient)


class Subquotient:
    """Z / B for subspaces B ⊆ Z of a common ambient space.

    ``reps`` are representatives in Z of a basis of Z / B and ``coords``
    expresses an element of Z in that basis.
    """

    def __init__(self, field, dim, Z, B):
        self.field = field
        self.ambient = dim
        q = QuotientMap(field, dim, B)
        self._q = q
        images = [q(z) for z in Z]
        rows, piv = rref_rows([list(x) for x in zip(*images)] if images else [], len(Z), field)
        chosen = piv
        self.reps = [tuple(Z[i]) for i in chosen]
        self.dim = len(self.reps)
        if self.dim:
            C = Matrix.from_columns(field, [images[i] for i in chosen], q.dim)
            self._left = left_inverse(C)
        else:
            self._left = None

    def coords(self, v):
        if not self.dim:
            return ()
        return self._left.apply(self._q(v))


def sparse_kernel(eqs, ncols, field):
    """Kernel of a sparse system given as a list of {column: coefficient}.

    Returns ``(free, basis)``: the free columns and the basis of the
    solution space with free coordinate 1 and the other free coordinates 0,
    as dicts.  This is the same basis ``kernel_basis`` would produce.
    """
    p = field.characteristic
    pivrows = {}
    for eq in eqs:
        row = {c: v for c, v in eq.items() if v}
        while row:
            c = min(row)
            prow = pivrows.get(c)
            if prow is None:
                inv = field.inv(row[c])
                if p:
                    row = {k: v * inv % p for k, v in row.items()}
                else:
                    row = {k: v * inv for k, v in row.items()}
                pivrows[c] = row
                break
            f = row[c]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    # back substitution: make every pivot row free of later pivots
    order = sorted(pivrows, reverse=True)
    solved = {}
    for c in order:
        row = pivrows[c]
        out = {}
        for k, v in row.items():
            if k == c:
                continue
            if k in solved:
                for kk, vv in solved[k].items():
                    nv = out.get(kk, 0) + v * vv
                    if p:
                        nv %= p
                    if nv:
                        out[kk] = nv
                    else:
                        out.pop(kk, None)
            else:
                nv = out.get(k, 0) + v
                if p:
                    nv %= p
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        # x_c = - sum out[k] x_k over free k
        solved[c] = {k: field.norm(-v) for k, v in out.items()}
    free = [j for j in range(ncols) if j not in pivrows]
    basis = []
    for fcol in free:
        vec = {fcol: field.one}
        for c, expr in solved.items():
            v = expr.get(fcol)
            if v:
                vec[c] = v
        basis.append(vec)
    return free, basis
