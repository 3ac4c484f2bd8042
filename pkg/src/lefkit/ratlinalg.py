"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; matrices are immutable dense
row-major tables.  Everything here is exact: no floats appear anywhere.
Subspaces of Q^d are passed around as lists of column vectors (tuples)
and can be put in canonical form with :func:`canonical_basis`, so that two
subspaces are equal iff their canonical bases are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContractError

Rational = Fraction
Vector = tuple  # tuple of Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or "a/b" string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ContractError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ContractError(f"not a rational: {x!r}") from exc
    raise ContractError(f"not a rational: {x!r}")


def qstr(x: Fraction) -> str:
    """Canonical string form: "a/b", or "a" for integers."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable) -> Vector:
    return tuple(Q(x) for x in xs)


class RatMatrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "ncols", "_hash")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        rows = tuple(tuple(Q(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ContractError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ContractError("ragged matrix rows")
        self.rows = rows
        self.ncols = ncols
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "RatMatrix":
        m = object.__new__(cls)
        m.rows = rows
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, m: int, n: int) -> "RatMatrix":
        return cls._raw(tuple((ZERO,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "RatMatrix":
        cols = [vec(c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise ContractError("column length mismatch")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def scalar(cls, n: int, s) -> "RatMatrix":
        return cls.identity(n) * Q(s)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._raw(
            tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.nrows
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(qstr(x) for x in r) for r in self.rows)
        return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ContractError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same(other)
        return RatMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same(other)
        return RatMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def __mul__(self, s) -> "RatMatrix":
        s = Q(s)
        return RatMatrix._raw(tuple(tuple(a * s for a in r) for r in self.rows), self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ContractError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.T.rows
            return RatMatrix._raw(
                tuple(
                    tuple(_dot(r, c) for c in cols) for r in self.rows
                ),
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ContractError(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(_dot(r, v) for r in self.rows)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.nrows != other.nrows:
            raise ContractError("hstack row mismatch")
        return RatMatrix._raw(
            tuple(r + s for r, s in zip(self.rows, other.rows)), self.ncols + other.ncols
        )

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.ncols:
            raise ContractError("vstack column mismatch")
        return RatMatrix._raw(self.rows + other.rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix._raw(
            tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols)
        )

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.T

    def to_json(self) -> list:
        return [[qstr(x) for x in r] for r in self.rows]


def _dot(r, c):
    s = ZERO
    for a, b in zip(r, c):
        if a and b:
            s += a * b
    return s


def block(rows_of_blocks: Sequence[Sequence[RatMatrix]]) -> RatMatrix:
    """Assemble a block matrix; every block row must agree in height."""
    out = None
    for brow in rows_of_blocks:
        r = brow[0]
        for b in brow[1:]:
            r = r.hstack(b)
        out = r if out is None else out.vstack(r)
    return out


# ---------------------------------------------------------------------------
# elimination


def _rref(rows: list[list[Fraction]], ncols: int):
    """In-place reduced row echelon form.  Returns pivot column list."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = ONE / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(A: RatMatrix) -> tuple[RatMatrix, list[int]]:
    rows = [list(r) for r in A.rows]
    piv = _rref(rows, A.ncols)
    return RatMatrix._raw(tuple(tuple(r) for r in rows), A.ncols), piv


def rank(A: RatMatrix) -> int:
    return len(rref(A)[1])


def canonical_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical basis (nonzero rows of the RREF) of the span of ``vectors``."""
    rows = [list(vec(v)) for v in vectors]
    for r in rows:
        if len(r) != dim:
            raise ContractError("vector length mismatch")
    piv = _rref(rows, dim)
    return [tuple(rows[i]) for i in range(len(piv))]


def kernel(A: RatMatrix) -> list[Vector]:
    """Canonical basis of Ker(A)."""
    rows = [list(r) for r in A.rows]
    piv = _rref(rows, A.ncols)
    free = [j for j in range(A.ncols) if j not in set(piv)]
    basis = []
    for f in free:
        v = [ZERO] * A.ncols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -rows[i][f]
        basis.append(tuple(v))
    return canonical_basis(basis, A.ncols)


def image(A: RatMatrix) -> list[Vector]:
    """Canonical basis of Im(A) (column space)."""
    return canonical_basis(A.T.rows, A.nrows)


def image_kernel(A: RatMatrix) -> tuple[list[Vector], list[Vector]]:
    return image(A), kernel(A)


def solve(A: RatMatrix, b: Sequence) -> tuple[Vector, list[Vector]] | None:
    """Solve A x = b.

    Returns ``(particular, nullspace_basis)`` or ``None`` when inconsistent.
    The particular solution sets every free variable to zero.
    """
    b = vec(b)
    if len(b) != A.nrows:
        raise ContractError(f"rhs length {len(b)} does not match {A.nrows} rows")
    rows = [list(r) + [bi] for r, bi in zip(A.rows, b)]
    piv = _rref(rows, A.ncols + 1)
    if piv and piv[-1] == A.ncols:
        return None
    x = [ZERO] * A.ncols
    for i, p in enumerate(piv):
        x[p] = rows[i][A.ncols]
    return tuple(x), kernel(A)


def solve_matrix(A: RatMatrix, B: RatMatrix) -> RatMatrix | None:
    """Particular solution X of A X = B (free variables zero), or None."""
    if A.nrows != B.nrows:
        raise ContractError("solve_matrix row mismatch")
    rows = [list(r) + list(s) for r, s in zip(A.rows, B.rows)]
    n = A.ncols
    piv = _rref(rows, n + B.ncols)
    if any(p >= n for p in piv):
        return None
    X = [[ZERO] * B.ncols for _ in range(n)]
    for i, p in enumerate(piv):
        X[p] = rows[i][n:]
    return RatMatrix(X, B.ncols)


def inverse(A: RatMatrix) -> RatMatrix:
    n, m = A.shape
    if n != m:
        raise ContractError("inverse of non-square matrix")
    rows = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A.rows)]
    piv = _rref(rows, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ContractError("matrix is singular")
    return RatMatrix([r[n:] for r in rows], n)


def is_invertible(A: RatMatrix) -> bool:
    return A.nrows == A.ncols and rank(A) == A.nrows


def det(A: RatMatrix) -> Fraction:
    n, m = A.shape
    if n != m:
        raise ContractError("determinant of non-square matrix")
    rows = [list(r) for r in A.rows]
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        piv = rows[c][c]
        d *= piv
        for i in range(c + 1, n):
            f = rows[i][c] / piv
            if f:
                for j in range(c, n):
                    rows[i][j] -= f * rows[c][j]
    return d


def signature(G: RatMatrix) -> tuple[int, int, int]:
    """Sylvester signature (n_plus, n_minus, n_zero) of a symmetric matrix.

    Symmetric Gaussian elimination by congruence; a zero diagonal with a
    nonzero off-diagonal entry a_ij is repaired by x_i <- x_i + x_j.
    """
    if not G.is_symmetric():
        raise ContractError("signature of a non-symmetric matrix")
    a = [list(r) for r in G.rows]
    n = len(a)
    plus = minus = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i]), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # congruence with the elementary matrix adding basis vector j to i
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            k = i
        d = a[k][k]
        if d > 0:
            plus += 1
        else:
            minus += 1
        active.remove(k)
        for i in active:
            f = a[i][k] / d
            if f:
                for j in active:
                    a[i][j] -= f * a[k][j]
        for i in active:
            a[i][k] = a[k][i] = ZERO
    return plus, minus, n - plus - minus


# ---------------------------------------------------------------------------
# subspaces as column bases


def basis_matrix(basis: Sequence[Vector], dim: int) -> RatMatrix:
    return RatMatrix.from_columns(basis, dim)


def in_span(v: Sequence, basis: Sequence[Vector]) -> bool:
    v = vec(v)
    if not basis:
        return all(x == 0 for x in v)
    return solve(basis_matrix(basis, len(v)), v) is not None


def coordinates(v: Sequence, basis: Sequence[Vector]) -> Vector:
    """Coordinates of ``v`` in an independent ``basis``; ContractError if outside."""
    v = vec(v)
    if not basis:
        if any(v):
            raise ContractError("vector is not in the (zero) span")
        return ()
    sol = solve(basis_matrix(basis, len(v)), v)
    if sol is None:
        raise ContractError("vector is not in the span")
    return sol[0]


def same_subspace(a: Sequence[Vector], b: Sequence[Vector], dim: int) -> bool:
    return canonical_basis(a, dim) == canonical_basis(b, dim)


def contains(big: Sequence[Vector], small: Sequence[Vector], dim: int) -> bool:
    return len(canonical_basis(list(big) + list(small), dim)) == len(canonical_basis(big, dim))


def subspace_sum(a, b, dim: int) -> list[Vector]:
    return canonical_basis(list(a) + list(b), dim)


def intersection(a: Sequence[Vector], b: Sequence[Vector], dim: int) -> list[Vector]:
    if not a or not b:
        return []
    A = basis_matrix(a, dim).hstack(-basis_matrix(b, dim))
    out = []
    for k in kernel(A):
        out.append(basis_matrix(a, dim) @ k[: len(a)])
    return canonical_basis(out, dim)


def complement(sub: Sequence[Vector], dim: int, within: Sequence[Vector] | None = None) -> list[Vector]:
    """Extend ``sub`` to a basis of ``within`` (default Q^dim) by echelon pivoting.

    Returns only the added vectors.  Candidates are tried in order: the
    canonical basis of ``within``, or the unit vectors of Q^dim.
    """
    cands = canonical_basis(within, dim) if within is not None else [
        tuple(ONE if i == j else ZERO for i in range(dim)) for j in range(dim)
    ]
    current = canonical_basis(sub, dim)
    added = []
    for c in cands:
        nxt = canonical_basis(current + [c], dim)
        if len(nxt) > len(current):
            added.append(c)
            current = nxt
    return added


def orthogonal_complement(G: RatMatrix, sub: Sequence[Vector]) -> list[Vector]:
    """{y : x^T G y = 0 for all x in sub}, inside the column space of G."""
    if not sub:
        return [tuple(ONE if i == j else ZERO for i in range(G.ncols)) for j in range(G.ncols)]
    S = basis_matrix(sub, G.nrows)
    return kernel(S.T @ G)


# ---------------------------------------------------------------------------
# linear systems in matrix unknowns (sparse Gauss-Jordan)


class MatrixSystem:
    """Linear equations  sum_k A_k X_k B_k = C  in matrix unknowns X_k.

    Used to set up brute-force oracles: every uniqueness claim in the
    library can be re-derived by writing all constraints into one system
    and checking that its solution space is a single point.
    """

    def __init__(self):
        self.unknowns: dict[str, tuple[int, int]] = {}
        self._offset: dict[str, int] = {}
        self._nvars = 0
        self._rows: list[dict[int, Fraction]] = []
        self._rhs: list[Fraction] = []

    def unknown(self, name: str, shape: tuple[int, int]) -> str:
        if name in self.unknowns:
            raise ContractError(f"duplicate unknown {name}")
        self.unknowns[name] = shape
        self._offset[name] = self._nvars
        self._nvars += shape[0] * shape[1]
        return name

    @property
    def nvars(self) -> int:
        return self._nvars

    def equation(self, terms, const: RatMatrix | None = None, shape=None):
        """Add  sum A @ X @ B == const  for terms (A, name, B); A/B may be None."""
        eqs: dict[tuple[int, int], dict[int, Fraction]] = {}
        out_shape = shape
        for A, name, B in terms:
            r, s = self.unknowns[name]
            off = self._offset[name]
            A = RatMatrix.identity(r) if A is None else A
            B = RatMatrix.identity(s) if B is None else B
            if A.ncols != r or B.nrows != s:
                raise ContractError(f"term shape mismatch for {name}")
            sh = (A.nrows, B.ncols)
            if out_shape is None:
                out_shape = sh
            elif out_shape != sh:
                raise ContractError("inconsistent equation shapes")
            for p in range(A.nrows):
                arow = A.rows[p]
                for ri in range(r):
                    a = arow[ri]
                    if not a:
                        continue
                    for si in range(s):
                        brow = B.rows[si]
                        for q in range(B.ncols):
                            b = brow[q]
                            if b:
                                d = eqs.setdefault((p, q), {})
                                k = off + ri * s + si
                                d[k] = d.get(k, ZERO) + a * b
        if out_shape is None:
            if const is None:
                return
            out_shape = const.shape
        if const is not None and const.shape != out_shape:
            raise ContractError("constant shape mismatch")
        for p in range(out_shape[0]):
            for q in range(out_shape[1]):
                row = {k: v for k, v in eqs.get((p, q), {}).items() if v}
                c = const.rows[p][q] if const is not None else ZERO
                if row or c:
                    self._rows.append(row)
                    self._rhs.append(c)

    def solve(self):
        """Return (particular solution dict or None, nullity)."""
        red = self._reduce()
        if red is None:
            return None, None
        rows, rhs, pivot_rows = red
        x = [ZERO] * self._nvars
        for pi, pc in pivot_rows:
            x[pc] = rhs[pi]
        return self._unpack(x), self._nvars - len(pivot_rows)

    def solution_space(self):
        """Return (particular dict, list of homogeneous basis dicts) or None."""
        red = self._reduce()
        if red is None:
            return None
        rows, rhs, pivot_rows = red
        x = [ZERO] * self._nvars
        for pi, pc in pivot_rows:
            x[pc] = rhs[pi]
        pivcols = {pc for _, pc in pivot_rows}
        basis = []
        for f in range(self._nvars):
            if f in pivcols:
                continue
            v = [ZERO] * self._nvars
            v[f] = ONE
            for pi, pc in pivot_rows:
                c = rows[pi].get(f)
                if c:
                    v[pc] = -c
            basis.append(self._unpack(v))
        return self._unpack(x), basis

    def _unpack(self, x):
        out = {}
        for name, (r, s) in self.unknowns.items():
            off = self._offset[name]
            out[name] = RatMatrix(
                [x[off + i * s: off + (i + 1) * s] for i in range(r)], s
            ) if r else RatMatrix.zeros(0, s)
        return out

    def _reduce(self):
        rows = [dict(r) for r in self._rows]
        rhs = list(self._rhs)
        pivot_rows: list[tuple[int, int]] = []  # (row index, column)
        for i in range(len(rows)):
            row = rows[i]
            # reduce by existing pivots
            for pi, pc in pivot_rows:
                f = row.get(pc)
                if f:
                    prow = rows[pi]
                    for k, v in prow.items():
                        nv = row.get(k, ZERO) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    rhs[i] -= f * rhs[pi]
            if not row:
                if rhs[i]:
                    return None
                continue
            c = min(row)
            inv = ONE / row[c]
            for k in row:
                row[k] *= inv
            rhs[i] *= inv
            # eliminate c from earlier pivot rows (keep reduced form)
            for pi, pc in pivot_rows:
                prow = rows[pi]
                f = prow.get(c)
                if f:
                    for k, v in row.items():
                        nv = prow.get(k, ZERO) - f * v
                        if nv:
                            prow[k] = nv
                        else:
                            prow.pop(k, None)
                    rhs[pi] -= f * rhs[i]
            pivot_rows.append((i, c))
        return rows, rhs, pivot_rows
