"""Instance generators: projective spaces, reduction graphs of curves, strata
data of strictly semistable fibers, random filtered instances, and the
arithmetic-surface toy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .arakelov import ArakelovData
from .errors import ContractError, HardLefschetzFailure, IndexViolation
from .graded import GradedMap, GradedSpace
from .lefschetz import LefschetzModule, check_hard_lefschetz
from .local import LocalModel, SpecialFiberData
from .pairing import GradedPairing
from .ratlinalg import (
    RatMatrix,
    basis_matrix,
    complement,
    image,
    inverse,
    is_invertible,
    kernel,
    signature,
    solve,
)
from .splitting import FilteredLefschetzModule


def projective_space_module(n: int):
    """Cohomology of P^n: lines in degrees 0..n, L = 1, <h^i, h^{n-i}> = 1."""
    if n < 0:
        raise ContractError("n must be non-negative")
    dims = {i: 1 for i in range(n + 1)}
    M = LefschetzModule.from_blocks(dims, {i: [[1]] for i in range(n)}, n)
    P = GradedPairing(M.space, n, {i: [[1]] for i in range(n + 1)})
    return M, P


# ---------------------------------------------------------------------------
# reduction graphs


class ReductionGraph:
    """Components of a semistable curve fiber with their intersection matrix."""

    def __init__(self, intersection_matrix, L_degrees):
        M = intersection_matrix if isinstance(intersection_matrix, RatMatrix) \
            else RatMatrix(intersection_matrix)
        r = M.nrows
        if M.shape != (r, r) or r == 0:
            raise ContractError("intersection matrix must be square and non-empty")
        if not M.is_symmetric():
            raise ContractError("intersection matrix must be symmetric")
        if any(sum(row) != 0 for row in M.rows):
            raise ContractError("rows of the intersection matrix must sum to zero")
        if any(M[i, j] < 0 for i in range(r) for j in range(r) if i != j):
            raise ContractError("off-diagonal intersection numbers must be non-negative")
        if r > 1 and M.is_zero():
            raise ContractError("a fiber with several components cannot have zero intersection matrix")
        degs = tuple(Fraction(d) for d in L_degrees)
        if len(degs) != r:
            raise ContractError("one L-degree per component is required")
        if any(d <= 0 for d in degs):
            raise ContractError("L-degrees must be positive")
        self.M = M
        self.L_degrees = degs

    @property
    def components(self) -> int:
        return self.M.nrows


def curve_fiber_data(M, degrees) -> SpecialFiberData:
    """Special fiber data of a curve fiber; no positivity assumptions on the degrees."""
    M = M if isinstance(M, RatMatrix) else RatMatrix(M)
    r = M.nrows
    d = [Fraction(x) for x in degrees]
    ones = [[1] for _ in range(r)]
    return SpecialFiberData(
        1, {0: 1, 1: r}, {1: r, 0: 1},
        conn={1: M},
        L_high={0: [[x] for x in d]},
        L_low={1: [d]},
        pair={0: [[1]], 1: RatMatrix.identity(r)},
        cap={0: ones, 1: [[1] * r]},
    )


def reduction_graph_model(g: ReductionGraph, horizontal=None, horizontal_pairs=None):
    """SpecialFiberData and LocalModel of a curve fiber.

    ``horizontal`` lists, for each horizontal class, the component its closure
    meets (default: one class per component).  ``horizontal_pairs`` maps
    index pairs (j, k) to the intersection number of horizontal classes j, k
    (default 0, disjoint closures).
    """
    r = g.components
    f = curve_fiber_data(g.M, g.L_degrees)
    hz = list(range(r)) if horizontal is None else [int(c) for c in horizontal]
    if any(not 0 <= c < r for c in hz):
        raise ContractError("horizontal class meets a non-existent component")
    k = len(hz)
    N = k + r
    i_star = [[0] * r for _ in range(k)] + [[int(a == b) for b in range(r)] for a in range(r)]
    omega = [[int(hz[j] == a) for j in range(k)] + list(g.M.rows[a]) for a in range(r)]
    eta = [[int(a == b) for b in range(k)] + [0] * r for a in range(k)]
    Z = [[Fraction(0)] * N for _ in range(N)]
    for (a, b), v in (horizontal_pairs or {}).items():
        Z[a][b] = Z[b][a] = Fraction(v)
    for j in range(k):
        Z[j][k + hz[j]] = Z[k + hz[j]][j] = Fraction(1)
    for a in range(r):
        for b in range(r):
            Z[k + a][k + b] = g.M[a, b]
    m = LocalModel(f, {1: N}, {1: RatMatrix(i_star, r)}, {1: RatMatrix(omega, N)},
                   {1: RatMatrix(eta, N) if k else RatMatrix.zeros(0, N)}, {1: k}, {1: Z})
    return f, m


def cyc2_graph() -> ReductionGraph:
    return ReductionGraph([[-2, 2], [2, -2]], (1, 1))


def chain3_graph() -> ReductionGraph:
    return ReductionGraph([[-1, 1, 0], [1, -2, 1], [0, 1, -1]], (1, 1, 1))


# ---------------------------------------------------------------------------
# strictly semistable strata


@dataclass
class Stratum:
    module: LefschetzModule
    pairing: GradedPairing


class StrataData:
    """Components Y_i (center n/2) and double loci Y_ij (center (n-1)/2).

    ``restrict[(i, j)] = (r_i, r_j)`` with r_i: A(Y_i) -> A(Y_ij) of degree 0;
    ``gysin[(i, j)] = (g_i, g_j)`` with g_i: A(Y_ij) -> A(Y_i) of degree +1.
    """

    def __init__(self, n: int, components, doubles, restrict, gysin):
        self.n = n = int(n)
        self.components = [c if isinstance(c, Stratum) else Stratum(*c) for c in components]
        self.doubles = {tuple(k): (v if isinstance(v, Stratum) else Stratum(*v)) for k, v in doubles.items()}
        self.restrict = {tuple(k): tuple(v) for k, v in restrict.items()}
        self.gysin = {tuple(k): tuple(v) for k, v in gysin.items()}
        for c in self.components:
            if c.module.n != n or c.pairing.total != n:
                raise ContractError("components must have center n/2")
        for key, s in self.doubles.items():
            i, j = key
            if not i < j:
                raise ContractError("double loci are indexed by i < j")
            if s.module.n != n - 1 or s.pairing.total != n - 1:
                raise ContractError("double loci must have center (n-1)/2")
            for side, c in zip(key, range(2)):
                Y = self.components[side]
                r = self.restrict[key][c]
                g = self.gysin[key][c]
                if r.source != Y.module.space or r.target != s.module.space or r.shift != 0:
                    raise ContractError("restriction has the wrong shape")
                if g.source != s.module.space or g.target != Y.module.space or g.shift != 1:
                    raise ContractError("Gysin map has the wrong shape")
                if not (s.module.L @ r == r @ Y.module.L):
                    raise ContractError("restriction does not commute with L")
                if not (Y.module.L @ g == g @ s.module.L):
                    raise ContractError("Gysin map does not commute with L")
                # <r x, y>_{Y_ij} = <x, g y>_{Y_i}; x in A^p(Y_i), y in A^{n-1-p}(Y_ij)
                for p in Y.module.degrees:
                    lhs = r.block(p).T @ s.pairing.block(p)
                    rhs = Y.pairing.block(p) @ g.block(n - 1 - p)
                    if lhs != rhs:
                        raise ContractError(f"restriction and Gysin are not adjoint (degree {p})")


def _direct_sum_dims(mods, shift=0):
    degs = sorted({i + shift for m in mods for i in m.space.degrees})
    return {i: sum(m.space.dim(i - shift) for m in mods) for i in degs}


def _offsets(mods, p):
    out, acc = [], 0
    for m in mods:
        out.append(acc)
        acc += m.space.dim(p)
    return out, acc


def _big(rows_n, cols_n):
    return [[Fraction(0)] * cols_n for _ in range(rows_n)]


@dataclass(frozen=True)
class BGSResult:
    fiber: SpecialFiberData
    high_basis: dict     # p -> columns in the sum of A^p(Y_i)
    low_basis: dict      # p -> columns in the sum of A^{p-1}(Y_i) spanning a complement of Im G


def bgs_assemble(s: StrataData) -> BGSResult:
    """Kernel/cokernel groups, the composite i^*i_* = -G o D, L actions and pairings."""
    n = s.n
    comps = [c.module for c in s.components]
    keys = sorted(s.doubles)
    dbl = [s.doubles[k].module for k in keys]
    degs = sorted({p for m in comps for p in m.degrees})

    def D(p):
        """Signed restriction sum_i A^p(Y_i) -> sum_{i<j} A^p(Y_ij)."""
        co, tc = _offsets(comps, p)
        do, td = _offsets(dbl, p)
        A = _big(td, tc)
        for t, key in enumerate(keys):
            for side, sgn in zip(key, (1, -1)):
                blk = s.restrict[key][0 if side == key[0] else 1].block(p)
                for a in range(blk.nrows):
                    for b in range(blk.ncols):
                        A[do[t] + a][co[side] + b] += sgn * blk[a, b]
        return RatMatrix(A, tc)

    def G(p):
        """Signed Gysin sum_{i<j} A^{p-1}(Y_ij) -> sum_i A^p(Y_i)."""
        co, tc = _offsets(comps, p)
        do, td = _offsets(dbl, p - 1)
        A = _big(tc, td)
        for t, key in enumerate(keys):
            for side, sgn in zip(key, (1, -1)):
                blk = s.gysin[key][0 if side == key[0] else 1].block(p - 1)
                for a in range(blk.nrows):
                    for b in range(blk.ncols):
                        A[co[side] + a][do[t] + b] += sgn * blk[a, b]
        return RatMatrix(A, td)

    def Lsum(p):
        co, tc = _offsets(comps, p)
        co1, tc1 = _offsets(comps, p + 1)
        A = _big(tc1, tc)
        for m, o, o1 in zip(comps, co, co1):
            blk = m.L.block(p)
            for a in range(blk.nrows):
                for b in range(blk.ncols):
                    A[o1 + a][o + b] = blk[a, b]
        return RatMatrix(A, tc)

    def Psum(p):
        co, tc = _offsets(comps, p)
        cq, tq = _offsets(comps, n - p)
        A = _big(tc, tq)
        for c, o, oq in zip(s.components, co, cq):
            blk = c.pairing.block(p)
            for a in range(blk.nrows):
                for b in range(blk.ncols):
                    A[o + a][oq + b] = blk[a, b]
        return RatMatrix(A, tq)

    def tot(p):
        return sum(m.space.dim(p) for m in comps)

    all_p = list(range(0, n + 2))
    K, Qb, Qproj, imG = {}, {}, {}, {}
    for p in all_p:
        K[p] = kernel(D(p)) if tot(p) else []
    for p in all_p:
        # low side in regraded degree p: A_{n+1-p} = sum A^{p-1}(Y_i) / Im G
        d = tot(p - 1)
        imG[p] = image(G(p - 1)) if d else []
        Qb[p] = complement(imG[p], d) if d else []
        if Qb[p]:
            full = inverse(basis_matrix(Qb[p] + imG[p], d))
            Qproj[p] = full.submatrix(range(len(Qb[p])), range(d))
    high_dims = {p: len(K[p]) for p in all_p if K[p]}
    low_dims = {n + 1 - p: len(Qb[p]) for p in all_p if Qb[p]}
    conn, Lh, Ll, pair, cap = {}, {}, {}, {}, {}
    for p in all_p:
        d = tot(p - 1)
        if not d or not tot(p):
            continue
        # -G D: sum A^{p-1}(Y_i) -> sum A^p(Y_i)
        GD = -(G(p) @ D(p - 1))
        if imG[p] and not (GD @ basis_matrix(imG[p], d)).is_zero():
            raise ContractError("i^*i_* does not vanish on the Gysin image")
        if K[p] and Qb[p]:
            conn[p] = _solve_cols(basis_matrix(K[p], tot(p)), GD @ basis_matrix(Qb[p], d),
                                  "i^*i_* does not land in the kernel group")
        elif Qb[p] and not (GD @ basis_matrix(Qb[p], d)).is_zero():
            raise ContractError("i^*i_* does not land in the kernel group")
    for p in all_p:
        if K.get(p) and K.get(p + 1):
            img = Lsum(p) @ basis_matrix(K[p], tot(p))
            Lh[p] = _solve_cols(basis_matrix(K[p + 1], tot(p + 1)), img, "L does not preserve the kernel group")
        if Qb.get(p) and Qb.get(p + 1):
            img = Lsum(p - 1) @ basis_matrix(Qb[p], tot(p - 1))
            Ll[n + 1 - p] = Qproj[p + 1] @ img
    for p in all_p:
        # A^p x A_p, with A_p = sum A^{n-p}(Y_i) / Im G  (regraded degree n+1-p)
        q = n + 1 - p
        if K.get(p) and Qb.get(q):
            pair[p] = basis_matrix(K[p], tot(p)).T @ Psum(p) @ basis_matrix(Qb[q], tot(n - p))
    for qd in all_p:
        # cap: A^q -> A_{n-q} = sum A^q(Y_i) / Im G (regraded degree q+1)
        if K.get(qd) and Qb.get(qd + 1):
            cap[qd] = Qproj[qd + 1] @ basis_matrix(K[qd], tot(qd))
    f = SpecialFiberData(n, high_dims, low_dims, conn, Lh, Ll, pair, cap)
    return BGSResult(f, {p: K[p] for p in high_dims}, {n + 1 - d: Qb[n + 1 - d] for d in low_dims})


def _solve_cols(B: RatMatrix, M: RatMatrix, msg: str) -> RatMatrix:
    from .ratlinalg import solve_matrix
    X = solve_matrix(B, M)
    if X is None:
        raise ContractError(msg)
    return X


def two_curve_strata(points: int = 2, degrees=(1, 1)) -> StrataData:
    """Two P^1 components meeting in ``points`` reduced points."""
    comps = []
    for d in degrees:
        M = LefschetzModule.from_blocks({0: 1, 1: 1}, {0: [[Fraction(d)]]}, 1)
        P = GradedPairing(M.space, 1, {0: [[1]], 1: [[1]]})
        comps.append(Stratum(M, P))
    Ysp = LefschetzModule.from_blocks({0: points}, {}, 0)
    YP = GradedPairing(Ysp.space, 0, {0: RatMatrix.identity(points)})
    r = GradedMap(comps[0].module.space, Ysp.space, 0, {0: [[1] for _ in range(points)]})
    g = GradedMap(Ysp.space, comps[0].module.space, 1, {0: [[1] * points]})
    r2 = GradedMap(comps[1].module.space, Ysp.space, 0, {0: [[1] for _ in range(points)]})
    g2 = GradedMap(Ysp.space, comps[1].module.space, 1, {0: [[1] * points]})
    return StrataData(1, comps, {(0, 1): Stratum(Ysp, YP)}, {(0, 1): (r, r2)}, {(0, 1): (g, g2)})


def single_stratum(n: int = 1) -> StrataData:
    M, P = projective_space_module(n)
    return StrataData(n, [Stratum(M, P)], {}, {}, {})


# ---------------------------------------------------------------------------
# random instances


def _rand_q(rng: random.Random, lo=-3, hi=3, nonzero=False) -> Fraction:
    while True:
        v = Fraction(rng.randint(lo, hi))
        if v or not nonzero:
            return v


def _rand_invertible(rng: random.Random, d: int) -> RatMatrix:
    """Random unimodular-ish matrix (product of elementary operations)."""
    A = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for _ in range(2 * d):
        i, j = rng.randrange(d), rng.randrange(d)
        if i != j:
            c = _rand_q(rng, -2, 2)
            for k in range(d):
                A[i][k] += c * A[j][k]
    perm = list(range(d))
    rng.shuffle(perm)
    return RatMatrix([A[p] for p in perm], d)


def _rand_symmetric(rng: random.Random, d: int, definite: int = 0) -> RatMatrix:
    """Random symmetric invertible matrix; definite=+1/-1 forces the sign."""
    while True:
        if definite:
            B = RatMatrix([[_rand_q(rng, -2, 2) for _ in range(d)] for _ in range(d)], d)
            S = B.T @ B + RatMatrix.identity(d)
            S = S if definite > 0 else -S
        else:
            rows = [[Fraction(0)] * d for _ in range(d)]
            for i in range(d):
                for j in range(i, d):
                    rows[i][j] = rows[j][i] = _rand_q(rng)
            S = RatMatrix(rows, d)
        if not d or is_invertible(S):
            return S


@dataclass
class _Strings:
    """A Lefschetz module presented by primitive strings L^a p."""

    n: int
    prim: dict            # j -> number of primitive vectors in degree j
    W: dict               # j -> symmetric Gram of primitive vectors

    def dims(self):
        out = {}
        for j, k in self.prim.items():
            for a in range(self.n - 2 * j + 1):
                out[j + a] = out.get(j + a, 0) + k
        return {i: d for i, d in out.items() if d}

    def index(self):
        """Position of (j, s, a) in degree j+a."""
        pos, cnt = {}, {}
        for j in sorted(self.prim):
            for s in range(self.prim[j]):
                for a in range(self.n - 2 * j + 1):
                    i = j + a
                    pos[(j, s, a)] = (i, cnt.get(i, 0))
                    cnt[i] = cnt.get(i, 0) + 1
        return pos

    def L(self):
        dims = self.dims()
        pos = self.index()
        blocks = {i: _big(dims.get(i + 1, 0), dims[i]) for i in dims if dims.get(i + 1, 0)}
        for (j, s, a), (i, c) in pos.items():
            if a < self.n - 2 * j:
                i1, c1 = pos[(j, s, a + 1)]
                blocks[i][c1][c] = Fraction(1)
        return {i: RatMatrix(b, dims[i]) for i, b in blocks.items()}

    def pairing(self):
        """(L^a p, L^b q) = (-1)^j W_j[p, q] when a + b = n - 2j."""
        dims = self.dims()
        pos = self.index()
        blocks = {}
        for i in dims:
            if dims.get(self.n - i):
                blocks[i] = _big(dims[i], dims[self.n - i])
        for (j, s, a), (i, c) in pos.items():
            b = self.n - 2 * j - a
            for t in range(self.prim[j]):
                i2, c2 = pos[(j, t, b)]
                blocks[i][c][c2] = (-1) ** j * self.W[j][s, t]
        return {i: RatMatrix(b, dims[self.n - i]) for i, b in blocks.items()}

    def string_map(self, B: dict, shift_src=0):
        """L-linear endomorphism acting by B_j on primitive vectors (per string level)."""
        dims = self.dims()
        pos = self.index()
        blocks = {i: _big(dims[i], dims[i]) for i in dims}
        for (j, s, a), (i, c) in pos.items():
            for t in range(self.prim[j]):
                _, c2 = pos[(j, t, a)]
                blocks[i][c2][c] = B[j][t, s]
        return {i: RatMatrix(b, dims[i]) for i, b in blocks.items()}


def _rand_strings(rng, n, max_dim, sign_W=None):
    prim = {}
    for j in range(0, n // 2 + 1):
        k = rng.randint(0, max_dim)
        if k:
            prim[j] = k
    W = {}
    for j, k in prim.items():
        W[j] = _rand_symmetric(rng, k, definite=(sign_W(j) if sign_W else 0))
    return _Strings(n, prim, W)


def random_lefschetz_module(seed, max_dim: int = 4, max_n: int = 6, rebase: bool = True) -> LefschetzModule:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(0, max_n)
    st = _rand_strings(rng, n, max(1, min(max_dim, 2)))
    dims = st.dims()
    # keep the degree dimensions within the bound
    while any(d > max_dim for d in dims.values()):
        j = max(st.prim, key=lambda j: st.prim[j])
        st.prim[j] -= 1
        if not st.prim[j]:
            del st.prim[j]
        st.W = {j: RatMatrix.identity(k) for j, k in st.prim.items()}
        dims = st.dims()
    M = LefschetzModule.from_blocks(dims, st.L(), n)
    if rebase:
        from .lefschetz import change_basis
        M = change_basis(M, {i: _rand_invertible(rng, d) for i, d in dims.items()})
    return M


@dataclass(frozen=True)
class FilteredInstance:
    filtered: FilteredLefschetzModule
    pairing: GradedPairing
    eps: GradedMap
    expect_g0: bool      # planted verdict for (G0, (.,.)_{0,0})
    expect_g1: bool      # planted verdict for (G1, (.,.)_{1,1})
    expect_a: bool       # planted verdict for (G0, (x, eps y))
    blocks: dict         # degree -> (dim A^i, dim C^i, dim A^{i-1}) before rebasing
    rebase: dict         # degree -> change of basis applied


def _sign(rng, p_neg):
    return -1 if rng.random() < p_neg else 1


def random_filtered_instance(seed, max_dim: int = 2, max_n: int = 3, break_pairing: bool = False,
                             p_flip: float = 0.0, rebase: bool = True, a_standard: bool = True,
                             p_flip_c: float | None = None) -> FilteredInstance:
    """Block model V = A + C + A[-1] with L = [[L_A,0,0],[0,L_C,0],[beta,0,L_A]].

    A has center n/2 and primitive Gram W_j; C has center (n+1)/2; beta acts on
    primitive vectors by W_j^{-1} S_j.  The signs of S_j (resp. of C's Gram)
    control the Hodge index on G0 (resp. G1); each primitive block is made
    negative with probability ``p_flip``.  With ``a_standard`` the form
    (x, eps y) on A is Hodge-positive.  Deterministic per seed.
    """
    rng = random.Random(seed)
    if max_dim == 0 and max_n == 0:
        sp = GradedSpace()
        V = LefschetzModule(sp, GradedMap.zero(sp, sp, 1), 1)
        F = FilteredLefschetzModule(V, {}, {}, check=False)
        return FilteredInstance(F, GradedPairing(sp, 1), GradedMap.zero(sp, sp, 1),
                                True, True, True, {}, {})
    pfc = p_flip if p_flip_c is None else p_flip_c
    for attempt in range(100):
        n = rng.randint(0, max_n)
        A = _rand_strings(rng, n, max_dim, sign_W=(lambda j: 1) if a_standard else None)
        C = _rand_strings(rng, n + 1, max_dim, sign_W=lambda j: _sign(rng, pfc))
        S = {j: _rand_symmetric(rng, k, definite=_sign(rng, p_flip)) for j, k in A.prim.items()}
        beta_prim = {j: inverse(A.W[j]) @ S[j] for j in A.prim}
        a_dims, c_dims = A.dims(), C.dims()
        degs = sorted(set(a_dims) | set(c_dims) | {i + 1 for i in a_dims})
        blocks = {i: (a_dims.get(i, 0), c_dims.get(i, 0), a_dims.get(i - 1, 0)) for i in degs}
        dims = {i: sum(b) for i, b in blocks.items() if sum(b)}
        if not dims:
            continue
        LA, LC = A.L(), C.L()
        PA, PC = A.pairing(), C.pairing()
        Bmap = A.string_map(beta_prim)
        t = n + 1

        def get(m, i, r, c):
            return m.get(i, RatMatrix.zeros(r, c))

        Lb, Eb = {}, {}
        for i in dims:
            if not dims.get(i + 1):
                continue
            a0, c0, z0 = blocks[i]
            a1, c1, z1 = blocks[i + 1]
            rows = _big(dims[i + 1], dims[i])

            def put(R, C0, M):
                for r in range(M.nrows):
                    for c in range(M.ncols):
                        rows[R + r][C0 + c] = M[r, c]

            put(0, 0, get(LA, i, a1, a0))
            put(a1, a0, get(LC, i, c1, c0))
            put(a1 + c1, 0, get(Bmap, i, z1, a0))
            put(a1 + c1, a0 + c0, get(LA, i - 1, z1, z0))
            Lb[i] = RatMatrix(rows, dims[i])
            erows = _big(dims[i + 1], dims[i])
            for r in range(a0):
                erows[a1 + c1 + r][r] = Fraction(1)
            Eb[i] = RatMatrix(erows, dims[i])
        Gb = {}
        for i in dims:
            j = t - i
            if not dims.get(j):
                continue
            a0, c0, z0 = blocks[i]
            a1, c1, z1 = blocks[j]
            rows = _big(dims[i], dims[j])
            pa = get(PA, i, a0, z1)       # x in A^i with z' in A^{n-i}
            for r in range(pa.nrows):
                for c in range(pa.ncols):
                    rows[r][a1 + c1 + c] = pa[r, c]
            pc = get(PC, i, c0, c1)
            for r in range(pc.nrows):
                for c in range(pc.ncols):
                    rows[a0 + r][a1 + c] = pc[r, c]
            pz = get(PA, i - 1, z0, a1)   # z in A^{i-1} with x' in A^{n-i+1}
            for r in range(pz.nrows):
                for c in range(pz.ncols):
                    rows[a0 + c0 + r][c] = pz[r, c]
            Gb[i] = RatMatrix(rows, dims[j])
        F1 = {i: [tuple(Fraction(int(r == k)) for r in range(dims[i])) for k in range(blocks[i][0], dims[i])]
              for i in dims}
        F2 = {i: [tuple(Fraction(int(r == k)) for r in range(dims[i]))
                  for k in range(blocks[i][0] + blocks[i][1], dims[i])] for i in dims}
        R = {i: (_rand_invertible(rng, d) if rebase else RatMatrix.identity(d)) for i, d in dims.items()}
        Rinv = {i: inverse(m) for i, m in R.items()}
        Lb = {i: R[i + 1] @ m @ Rinv[i] for i, m in Lb.items()}
        Eb = {i: R[i + 1] @ m @ Rinv[i] for i, m in Eb.items()}
        Gb = {i: Rinv[i].T @ m @ Rinv[t - i] for i, m in Gb.items()}
        F1 = {i: [R[i] @ v for v in vs] for i, vs in F1.items()}
        F2 = {i: [R[i] @ v for v in vs] for i, vs in F2.items()}
        if break_pairing:
            # tilt F2 inside F1 so that F1 is no longer its orthogonal complement
            cand = [i for i in dims if F2[i] and len(F1[i]) > len(F2[i])]
            if not cand:
                continue
            i = cand[0]
            extra = [v for v in F1[i] if v not in F2[i]][0]
            F2[i] = [tuple(a + b for a, b in zip(F2[i][0], extra))] + F2[i][1:]
            # keep F2 L-stable by taking the L-closure
            F2 = _l_closure(F2, Lb, dims)
            if any(len(F2[k]) > len(F1[k]) for k in F2):
                continue
        V = LefschetzModule.from_blocks(dims, Lb, n + 1)
        if not check_hard_lefschetz(V).holds:
            continue
        try:
            F = FilteredLefschetzModule(V, F1, F2)
        except Exception:
            if break_pairing:
                continue
            raise
        P = GradedPairing(V.space, t, Gb)
        eps = GradedMap(V.space, V.space, 1, Eb)
        g0 = all(signature(S[j]) == (S[j].nrows, 0, 0) for j in S)
        g1 = all(signature(C.W[j]) == (C.W[j].nrows, 0, 0) for j in C.W)
        ga = all(signature(A.W[j]) == (A.W[j].nrows, 0, 0) for j in A.W)
        return FilteredInstance(F, P, eps, g0, g1, ga, blocks, R)
    raise HardLefschetzFailure("random generator failed to produce a Lefschetz instance")  # pragma: no cover


def _l_closure(F2, Lb, dims):
    from .ratlinalg import canonical_basis, subspace_sum
    out = {i: canonical_basis(F2.get(i, []), dims[i]) for i in dims}
    changed = True
    while changed:
        changed = False
        for i in sorted(dims):
            if i in Lb and out[i]:
                img = [Lb[i] @ v for v in out[i]]
                new = subspace_sum(out.get(i + 1, []), img, dims[i + 1])
                if len(new) != len(out.get(i + 1, [])):
                    out[i + 1] = new
                    changed = True
    return out


def random_arakelov_instance(seed, max_dim: int = 2, max_n: int = 3, p_flip: float = 0.5,
                             p_flip_c: float | None = None) -> ArakelovData:
    """ArakelovData from the block model; Ch(X_K) = V/B and A(X_K) = V/F1 in echelon coordinates."""
    inst = random_filtered_instance(seed, max_dim, max_n, p_flip=p_flip, p_flip_c=p_flip_c)
    return arakelov_from_filtered(inst.filtered, inst.pairing, inst.eps)


def arakelov_from_filtered(F: FilteredLefschetzModule, P: GradedPairing, eps: GradedMap,
                           places=()) -> ArakelovData:
    V = F.V
    sp = V.space
    gen, cls, gdims, cdims = {}, {}, {}, {}
    for i in sp.degrees:
        d = sp.dim(i)
        rows_gen = F.projection("10", i)           # coordinates along C1 and C0
        gen[i] = rows_gen
        gdims[i] = rows_gen.nrows
        cls[i] = RatMatrix([[Fraction(int(c == F.d1[i] + r)) for c in range(gdims[i])]
                            for r in range(F.d0[i])], gdims[i])
        cdims[i] = F.d0[i]
    n = V.n - 1
    e0 = tuple(eps.block(0) @ tuple(Fraction(int(r == 0)) for r in range(sp.dim(0)))) \
        if sp.dim(0) and sp.dim(1) else tuple(Fraction(0) for _ in range(sp.dim(1)))
    return ArakelovData(n, sp.dims, V.L, P, F.F1, F.F2, e0, eps,
                        {i: d for i, d in gdims.items() if d}, {i: g for i, g in gen.items() if g.nrows},
                        {i: d for i, d in cdims.items() if d}, {i: c for i, c in cls.items() if c.nrows},
                        places)


# ---------------------------------------------------------------------------
# arithmetic surface toy


def arithmetic_surface_toy(dK, Lsq, nt_gram, fibers=(), strict: bool = True) -> ArakelovData:
    """Arithmetic surface with Chbar^0 = [X], Chbar^1 = (c1(L), X_eps, Pic^0 basis), Chbar^2 = point.

    dK = deg L_K, Lsq = c1(L)^2, nt_gram = Neron-Tate Gram matrix on the Pic^0
    part (must be negative definite as an intersection form).  ``fibers`` are
    reduction graphs of the bad fibers, kept for the local index checks.
    ``strict=False`` skips the sign test so that index failures can be studied.
    """
    dK, Lsq = Fraction(dK), Fraction(Lsq)
    if dK <= 0:
        raise ContractError("deg L_K must be positive")
    NT = nt_gram if isinstance(nt_gram, RatMatrix) else RatMatrix(nt_gram, len(nt_gram))
    k = NT.nrows
    if NT.shape != (k, k) or not NT.is_symmetric():
        raise ContractError("Neron-Tate Gram must be square and symmetric")
    if strict and k and signature(NT) != (0, k, 0):
        raise IndexViolation("Neron-Tate Gram must be negative definite")
    m = 2 + k
    L = {0: [[1], [0]] + [[0]] * k, 1: [[Lsq, dK] + [0] * k]}
    G1 = [[Lsq, dK] + [0] * k, [dK, 0] + [0] * k]
    for a in range(k):
        G1.append([0, 0] + [NT[a, b] for b in range(k)])
    pair = GradedPairing.symmetric_from(GradedSpace({0: 1, 1: m, 2: 1}), 2, {0: [[1]], 1: G1})
    e = lambda i: tuple(Fraction(int(r == i)) for r in range(m))
    F1 = {1: [e(i) for i in range(1, m)], 2: [(Fraction(1),)]}
    B = {1: [e(1)], 2: [(Fraction(1),)]}
    eps_op = {0: [[0], [1]] + [[0]] * k, 1: [[dK, 0] + [0] * k]}
    gen = {0: [[1]], 1: [[1, 0] + [0] * k] + [[0, 0] + [int(a == b) for b in range(k)] for a in range(k)]}
    cls = {0: [[1]], 1: [[1] + [0] * k]}
    places = tuple(curve_fiber_data(g.M, g.L_degrees) for g in fibers)
    return ArakelovData(1, {0: 1, 1: m, 2: 1}, L, pair, F1, B, e(1), eps_op,
                        {0: 1, 1: 1 + k}, gen, {0: 1, 1: 1}, cls, places)


# ---------------------------------------------------------------------------
# named cycles for documents


def graph_cycles(g: ReductionGraph, horizontal=None) -> dict:
    """comp<k>: horizontal class through component k; vert<k>: component k itself."""
    r = g.components
    hz = list(range(r)) if horizontal is None else list(horizontal)
    k = len(hz)
    out = {}
    for j, c in enumerate(hz):
        name = f"comp{c + 1}" if hz.count(c) == 1 else f"comp{c + 1}_{j}"
        out[name] = (1, tuple(Fraction(int(a == j)) for a in range(k + r)))
    for a in range(r):
        out[f"vert{a + 1}"] = (1, tuple(Fraction(int(b == k + a)) for b in range(k + r)))
    return out


def toy_cycles(d: ArakelovData) -> dict:
    """X = [X_K], c1 = c1(L_K), P<k> = k-th Pic^0 basis class."""
    m = d.generic.dim(1)
    out = {"X": (0, (Fraction(1),)), "c1": (1, tuple(Fraction(int(a == 0)) for a in range(m)))}
    for k in range(1, m):
        out[f"P{k}"] = (1, tuple(Fraction(int(a == k)) for a in range(m)))
    return out
