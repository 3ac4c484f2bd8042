"""Lefschetz modules: hard Lefschetz checks, primitive decomposition, Lambda.

A Lefschetz module with center n/2 is a graded space V with a degree-one
operator L such that L^{n-2i}: V^i -> V^{n-i} is bijective for every
i <= n/2.  Twists are not tracked; the integer ``n`` is all we carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import floor

from .errors import ContractError, HardLefschetzFailure
from .graded import GradedMap, GradedSpace
from .ratlinalg import (
    MatrixSystem,
    RatMatrix,
    basis_matrix,
    inverse,
    is_invertible,
    kernel,
)


class LefschetzModule:
    """Graded space ``space`` with operator ``L`` of degree +1 and center n/2."""

    __slots__ = ("space", "L", "n")

    def __init__(self, space: GradedSpace, L: GradedMap, n: int):
        if n < 0:
            raise ContractError("center parameter n must be non-negative")
        if L.source != space or L.target != space or L.shift != 1:
            raise ContractError("L must be a degree +1 endomorphism of the space")
        self.space = space
        self.L = L
        self.n = int(n)

    @classmethod
    def from_blocks(cls, dims, L_blocks, n) -> "LefschetzModule":
        space = GradedSpace(dims)
        return cls(space, GradedMap(space, space, 1, L_blocks), n)

    @classmethod
    def zero(cls, n: int = 0) -> "LefschetzModule":
        sp = GradedSpace()
        return cls(sp, GradedMap.zero(sp, sp, 1), n)

    def dim(self, i: int) -> int:
        return self.space.dim(i)

    @property
    def degrees(self):
        return self.space.degrees

    def Lpow(self, i: int, k: int) -> RatMatrix:
        """L^k restricted to V^i."""
        return self.L.power_block(i, k)

    def primitive_degrees(self) -> list[int]:
        """Integers i <= n/2 that can carry primitive classes."""
        sp = self.space.span()
        if sp is None:
            return []
        lo = min(sp[0], self.n - sp[1])
        return list(range(lo, floor(self.n / 2) + 1))

    def with_center(self, n: int) -> "LefschetzModule":
        return LefschetzModule(self.space, self.L, n)

    def __repr__(self):
        return f"LefschetzModule(n={self.n}, dims={self.space.dims})"


@dataclass(frozen=True)
class HardLefschetzReport:
    holds: bool
    failures: tuple[int, ...]


def check_hard_lefschetz(M: LefschetzModule) -> HardLefschetzReport:
    """Test bijectivity of L^{n-2i}: V^i -> V^{n-i} for every i <= n/2."""
    failures = []
    for i in M.primitive_degrees():
        a, b = M.dim(i), M.dim(M.n - i)
        if a != b or (a and not is_invertible(M.Lpow(i, M.n - 2 * i))):
            failures.append(i)
    # a degree above the center with no partner below is also a failure
    return HardLefschetzReport(not failures, tuple(failures))


def require_hard_lefschetz(M: LefschetzModule, what: str = "module") -> None:
    rep = check_hard_lefschetz(M)
    if not rep.holds:
        raise HardLefschetzFailure(
            f"hard Lefschetz fails for {what} with center {M.n}/2", rep)


@dataclass(frozen=True)
class PrimitiveDecomposition:
    """Primitive bases and the Lefschetz basis of every degree.

    ``expansion[i]`` lists (j, a, k) for the columns of ``basis[i]``: the
    column is L^k applied to the a-th primitive vector of degree j, k=i-j.
    """

    module: LefschetzModule
    primitive_bases: dict
    expansion: dict
    basis: dict
    basis_inv: dict

    def coordinates(self, i: int, v):
        """Coordinates of v in the Lefschetz basis of degree i."""
        return self.basis_inv[i] @ v


def primitive_parts(M: LefschetzModule) -> PrimitiveDecomposition:
    require_hard_lefschetz(M)
    n = M.n
    prim = {}
    for j in M.primitive_degrees():
        if M.dim(j):
            ker = kernel(M.Lpow(j, n + 1 - 2 * j))
            if ker:
                prim[j] = ker
    expansion = {}
    basis = {}
    basis_inv = {}
    for i in M.degrees:
        cols = []
        exp = []
        for j, vecs in prim.items():
            k = i - j
            if 0 <= k <= n - 2 * j:
                P = M.Lpow(j, k)
                for a, p in enumerate(vecs):
                    cols.append(P @ p)
                    exp.append((j, a, k))
        B = basis_matrix(cols, M.dim(i))
        if B.ncols != M.dim(i) or not is_invertible(B):
            raise ContractError(f"Lefschetz decomposition is not direct in degree {i}")
        expansion[i] = tuple(exp)
        basis[i] = B
        basis_inv[i] = inverse(B)
    return PrimitiveDecomposition(M, prim, expansion, basis, basis_inv)


def sl2_coefficient(n: int, j: int, k: int) -> int:
    """Lambda L^k p = c L^{k-1} p for p primitive of degree j; returns c."""
    return k * (n - 2 * j - k + 1)


def lambda_operator(M: LefschetzModule, decomp: PrimitiveDecomposition | None = None) -> GradedMap:
    """The unique degree -1 operator with [Lambda, L] = (n - 2i) on V^i."""
    D = decomp or primitive_parts(M)
    blocks = {}
    for i in M.degrees:
        if not M.dim(i - 1):
            continue
        images = []
        for (j, a, k) in D.expansion[i]:
            if k == 0:
                images.append((0,) * M.dim(i - 1))
            else:
                p = D.primitive_bases[j][a]
                c = sl2_coefficient(M.n, j, k)
                images.append(tuple(c * x for x in M.Lpow(j, k - 1) @ p))
        C = basis_matrix(images, M.dim(i - 1))
        blocks[i] = C @ D.basis_inv[i]
    return GradedMap(M.space, M.space, -1, blocks)


def commutator_defect(M: LefschetzModule, Lam: GradedMap) -> dict:
    """Per degree, (Lambda L - L Lambda) - (n-2i) id; all zero iff sl2 relation."""
    out = {}
    for i in M.degrees:
        lhs = Lam.block(i + 1) @ M.L.block(i) - M.L.block(i - 1) @ Lam.block(i)
        out[i] = lhs - RatMatrix.scalar(M.dim(i), M.n - 2 * i)
    return out


def lambda_by_solve(M: LefschetzModule):
    """Brute-force oracle: solve the commutator equations for Lambda directly.

    Returns (Lambda or None, nullity of the solution space).
    """
    sys_ = MatrixSystem()
    for i in M.degrees:
        if M.dim(i - 1):
            sys_.unknown(f"lam{i}", (M.dim(i - 1), M.dim(i)))
    names = set(sys_.unknowns)
    for i in M.degrees:
        terms = []
        # Lambda_{i+1} L_i
        if f"lam{i + 1}" in names:
            terms.append((None, f"lam{i + 1}", M.L.block(i)))
        if f"lam{i}" in names:
            terms.append((-M.L.block(i - 1), f"lam{i}", None))
        const = RatMatrix.scalar(M.dim(i), M.n - 2 * i)
        if terms:
            sys_.equation(terms, const)
        elif not const.is_zero():
            return None, None
    sol, nullity = sys_.solve()
    if sol is None:
        return None, None
    blocks = {int(k[3:]): v for k, v in sol.items()}
    return GradedMap(M.space, M.space, -1, blocks), nullity


def direct_sum(*mods: LefschetzModule) -> LefschetzModule:
    """Block-diagonal direct sum; all summands must share the center."""
    if not mods:
        return LefschetzModule.zero()
    n = mods[0].n
    if any(m.n != n for m in mods):
        raise ContractError("direct sum of modules with different centers")
    degs = sorted({i for m in mods for i in m.degrees})
    dims = {i: sum(m.dim(i) for m in mods) for i in degs}
    sp = GradedSpace(dims)
    blocks = {}
    for i in degs:
        rows = []
        for a in mods:
            row = []
            for b in mods:
                if a is b:
                    row.append(a.L.block(i))
                else:
                    row.append(RatMatrix.zeros(a.dim(i + 1), b.dim(i)))
            rows.append(row)
        blocks[i] = _blockdiag(rows, dims.get(i + 1, 0), dims[i])
    return LefschetzModule(sp, GradedMap(sp, sp, 1, blocks), n)


def _blockdiag(rows, h, w):
    out = [[] for _ in range(h)]
    r0 = 0
    for row in rows:
        height = row[0].nrows
        for rr in range(height):
            line = []
            for m in row:
                line.extend(m.rows[rr])
            out[r0 + rr] = line
        r0 += height
    return RatMatrix(out, w)


def change_basis(M: LefschetzModule, P: dict) -> LefschetzModule:
    """Module with new coordinates v' = P_i v in each degree (P_i invertible)."""
    blocks = {}
    for i in M.degrees:
        Pi_inv = inverse(P[i])
        if M.dim(i + 1):
            blocks[i] = P[i + 1] @ M.L.block(i) @ Pi_inv
    return LefschetzModule(M.space, GradedMap(M.space, M.space, 1, blocks), M.n)
