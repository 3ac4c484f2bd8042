"""Splittings of short exact sequences and 3-step filtrations of Lefschetz modules.

Three constructions live here:

* :func:`two_step_lift` -- the unique L-linear section of
  0 -> U -> V -> W -> 0 when U has center (n+1)/2 and W has center n/2;
* :func:`lambda_equivariant_split` -- the unique Lambda-linear section
  when the centers are (n+2)/2, (n+1)/2, n/2, together with the
  isomorphism beta defined by  L alpha = alpha L + eps beta;
* :func:`three_step_split` -- the combination of both for a filtration
  F2 c F1 c V whose graded pieces have centers (n+i)/2.

Every construction is explicit (primitive vectors first, then extended by
powers of L).  The brute-force oracles at the bottom of the module
re-derive the same answers by solving one big linear system.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CenterMismatch,
    ContractError,
    ExactnessViolation,
    HypothesisViolation,
    NonUniqueSolution,
)
from .graded import GradedMap, GradedSpace
from .lefschetz import (
    LefschetzModule,
    check_hard_lefschetz,
    lambda_operator,
    primitive_parts,
    require_hard_lefschetz,
)
from .ratlinalg import (
    MatrixSystem,
    RatMatrix,
    basis_matrix,
    block,
    canonical_basis,
    complement,
    contains,
    inverse,
    is_invertible,
    kernel,
    rank,
    same_subspace,
    solve,
    solve_matrix,
)


# ---------------------------------------------------------------------------
# exact sequences


class ExactSequence:
    """0 -> U --eps--> V --eta--> W -> 0, checked degree by degree."""

    __slots__ = ("U", "V", "W", "eps", "eta")

    def __init__(self, U: LefschetzModule, V: LefschetzModule, W: LefschetzModule,
                 eps: GradedMap, eta: GradedMap):
        if eps.source != U.space or eps.target != V.space or eps.shift != 0:
            raise ContractError("eps must be a degree 0 map U -> V")
        if eta.source != V.space or eta.target != W.space or eta.shift != 0:
            raise ContractError("eta must be a degree 0 map V -> W")
        for i in V.degrees + U.degrees + W.degrees:
            e, h = eps.block(i), eta.block(i)
            if rank(e) != U.dim(i):
                raise ExactnessViolation(f"eps is not injective in degree {i}")
            if rank(h) != W.dim(i):
                raise ExactnessViolation(f"eta is not surjective in degree {i}")
            if not (h @ e).is_zero() or U.dim(i) + W.dim(i) != V.dim(i):
                raise ExactnessViolation(f"Im eps != Ker eta in degree {i}")
        if not ((V.L @ eps) - (eps @ U.L)).is_zero():
            raise ContractError("eps does not commute with L")
        if not ((W.L @ eta) - (eta @ V.L)).is_zero():
            raise ContractError("eta does not commute with L")
        self.U, self.V, self.W, self.eps, self.eta = U, V, W, eps, eta

    def lift(self, i: int, w) -> tuple:
        """Some preimage of w under eta in degree i."""
        sol = solve(self.eta.block(i), w)
        if sol is None:
            raise ExactnessViolation(f"eta is not surjective in degree {i}")
        return sol[0]

    def pull_back(self, i: int, v) -> tuple:
        """The u with eps(u) = v, for v in Ker(eta)."""
        sol = solve(self.eps.block(i), v)
        if sol is None:
            raise ExactnessViolation(f"vector is not in Im(eps) in degree {i}")
        return sol[0]


def _lefschetz_basis_map(M: LefschetzModule, decomp, images, target: GradedSpace, shift: int) -> GradedMap:
    """Graded map defined on the Lefschetz basis: images[(j, a, k)] is the image vector."""
    blocks = {}
    for i in M.degrees:
        td = target.dim(i + shift)
        if not td:
            continue
        cols = [images[e] for e in decomp.expansion[i]]
        C = basis_matrix(cols, td)
        blocks[i] = C @ decomp.basis_inv[i]
    return GradedMap(M.space, target, shift, blocks)


# ---------------------------------------------------------------------------
# Hom spaces


def hom_space(W: LefschetzModule, U: LefschetzModule) -> list[GradedMap]:
    """Basis of the degree 0 maps phi: W -> U with phi L = L phi."""
    degs = [i for i in W.degrees if U.dim(i)]
    if not degs:
        return []
    sys_ = MatrixSystem()
    for i in degs:
        sys_.unknown(f"p{i}", (U.dim(i), W.dim(i)))
    names = set(sys_.unknowns)
    for i in sorted(set(degs) | {i - 1 for i in degs}):
        # L_U phi_i - phi_{i+1} L_W = 0  as a map W^i -> U^{i+1}
        terms = []
        if f"p{i}" in names and U.dim(i + 1):
            terms.append((U.L.block(i), f"p{i}", None))
        if f"p{i + 1}" in names and W.dim(i):
            terms.append((-RatMatrix.identity(U.dim(i + 1)), f"p{i + 1}", W.L.block(i)))
        if terms:
            sys_.equation(terms)
    part, basis = sys_.solution_space()
    return [GradedMap(W.space, U.space, 0, {int(k[1:]): v for k, v in b.items()}) for b in basis]


# ---------------------------------------------------------------------------
# two-step lift


def two_step_lift(seq: ExactSequence, check_unique: bool = True) -> GradedMap:
    """The unique L-linear section of eta when U has center (n+1)/2 and W has center n/2."""
    U, V, W = seq.U, seq.V, seq.W
    n = W.n
    if U.n != n + 1:
        raise CenterMismatch(
            f"two-step lift needs centers (n+1)/2 and n/2, got U: {U.n}/2, W: {W.n}/2")
    require_hard_lefschetz(U, "U")
    require_hard_lefschetz(W, "W")
    D = primitive_parts(W)
    images = {}
    for k, prim in D.primitive_bases.items():
        e = n + 1 - 2 * k
        LU_inv = inverse(U.Lpow(k, e)) if U.dim(k) else None
        LV = V.Lpow(k, e)
        for a, w in enumerate(prim):
            v0 = seq.lift(k, w)
            top = LV @ v0
            if any(top):
                u = LU_inv @ seq.pull_back(k + e, top)
                v0 = tuple(x - y for x, y in zip(v0, seq.eps.block(k) @ u))
            for j in range(0, n - 2 * k + 1):
                images[(k, a, j)] = V.Lpow(k, j) @ v0
    sigma = _lefschetz_basis_map(W, D, images, V.space, 0)
    if not (seq.eta @ sigma == GradedMap.identity(W.space)):
        raise HypothesisViolation("constructed lift is not a section")
    if not (V.L @ sigma == sigma @ W.L):
        raise HypothesisViolation("constructed lift is not L-linear")
    if check_unique:
        _, nullity = lifts_by_solve(seq)
        if nullity != 0:
            raise NonUniqueSolution(f"L-linear lifts form a space of dimension {nullity}")
    return sigma


def lifts_by_solve(seq: ExactSequence):
    """Oracle: all L-linear sections of eta.  Returns (one section or None, nullity)."""
    V, W = seq.V, seq.W
    sys_ = MatrixSystem()
    degs = [i for i in W.degrees]
    for i in degs:
        sys_.unknown(f"s{i}", (V.dim(i), W.dim(i)))
    for i in degs:
        sys_.equation([(seq.eta.block(i), f"s{i}", None)], RatMatrix.identity(W.dim(i)))
    names = set(sys_.unknowns)
    for i in sorted(set(degs) | {i - 1 for i in degs}):
        terms = []
        if f"s{i}" in names and V.dim(i + 1):
            terms.append((V.L.block(i), f"s{i}", None))
        if f"s{i + 1}" in names and W.dim(i):
            terms.append((-RatMatrix.identity(V.dim(i + 1)), f"s{i + 1}", W.L.block(i)))
        if terms:
            sys_.equation(terms)
    sol, nullity = sys_.solve()
    if sol is None:
        return None, None
    return GradedMap(W.space, V.space, 0, {int(k[1:]): v for k, v in sol.items()}), nullity


# ---------------------------------------------------------------------------
# Lambda-equivariant split


def _check_lambda_centers(seq: ExactSequence) -> int:
    U, V, W = seq.U, seq.V, seq.W
    n = W.n
    if U.space.is_zero() and not W.space.is_zero():
        raise CenterMismatch("U = 0 forces W to carry the center of V; no beta can exist")
    if U.n != n + 2 or V.n != n + 1:
        raise CenterMismatch(
            f"Lambda split needs centers (n+2)/2, (n+1)/2, n/2; got {U.n}/2, {V.n}/2, {W.n}/2")
    return n


def lambda_equivariant_split(seq: ExactSequence) -> tuple[GradedMap, GradedMap]:
    """The unique Lambda-linear section alpha of eta and the L-isomorphism beta: W -> U[+1]."""
    n = _check_lambda_centers(seq)
    U, V, W = seq.U, seq.V, seq.W
    require_hard_lefschetz(U, "U")
    require_hard_lefschetz(V, "V")
    require_hard_lefschetz(W, "W")
    D = primitive_parts(W)
    eps = seq.eps
    a_img, b_img = {}, {}
    for i, prim in D.primitive_bases.items():
        e = n + 2 - 2 * i
        for a, w in enumerate(prim):
            # alpha_i(w): the lift of w killed by L^{n+2-2i}
            v = seq.lift(i, w)
            top = V.Lpow(i, e) @ v
            if any(top):
                u = inverse(U.Lpow(i, e)) @ seq.pull_back(i + e, top)
                v = tuple(x - y for x, y in zip(v, eps.block(i) @ u))
            # beta_i(w) from  L^{n+1-2i} alpha_i(w) = (n+1-2i) eps L^{n-2i} beta_i(w)
            m = n + 1 - 2 * i
            rhs = V.Lpow(i, m) @ v
            x = seq.pull_back(i + m, rhs)
            b = inverse(U.Lpow(i + 1, m - 1)) @ tuple(c / m for c in x)
            for j in range(0, n - 2 * i + 1):
                bj = U.Lpow(i + 1, j) @ b
                aj = V.Lpow(i, j) @ v
                if j:
                    corr = eps.block(i + j) @ (U.Lpow(i + 1, j - 1) @ b)
                    aj = tuple(p - j * q for p, q in zip(aj, corr))
                a_img[(i, a, j)] = aj
                b_img[(i, a, j)] = bj
    alpha = _lefschetz_basis_map(W, D, a_img, V.space, 0)
    beta = _lefschetz_basis_map(W, D, b_img, U.space, 1)
    _check_lambda_split(seq, alpha, beta)
    return alpha, beta


def _check_lambda_split(seq: ExactSequence, alpha: GradedMap, beta: GradedMap) -> None:
    U, V, W = seq.U, seq.V, seq.W
    if not (seq.eta @ alpha == GradedMap.identity(W.space)):
        raise HypothesisViolation("alpha is not a section of eta")
    if not (V.L @ alpha == alpha @ W.L + seq.eps @ beta):
        raise HypothesisViolation("relation L alpha = alpha L + eps beta fails")
    if not (lambda_operator(V) @ alpha == alpha @ lambda_operator(W)):
        raise HypothesisViolation("alpha is not Lambda-linear")
    if not (U.L @ beta == beta @ W.L):
        raise HypothesisViolation("beta is not L-linear")
    for i in W.degrees + [d - 1 for d in U.degrees]:
        if W.dim(i) != U.dim(i + 1) or (W.dim(i) and not is_invertible(beta.block(i))):
            raise HypothesisViolation(f"beta is not bijective in degree {i}")


# ---------------------------------------------------------------------------
# sub- and quotient modules in coordinates


def _restrict(M: LefschetzModule, T: dict, n: int) -> LefschetzModule:
    """Module structure on an L-stable subspace given by basis matrices T[i]."""
    dims = {i: T[i].ncols for i in T}
    blocks = {}
    for i in T:
        if i + 1 in T and T[i].ncols and T[i + 1].ncols:
            X = solve_matrix(T[i + 1], M.L.block(i) @ T[i])
            if X is None:
                raise ContractError(f"subspace is not L-stable in degree {i}")
            blocks[i] = X
        elif T[i].ncols and not (M.L.block(i) @ T[i]).is_zero():
            raise ContractError(f"subspace is not L-stable in degree {i}")
    return LefschetzModule.from_blocks(dims, blocks, n)


def _sub(L: GradedMap, rows: slice, cols: slice, dims_r: dict, dims_c: dict) -> dict:
    out = {}
    for i, m in L.blocks.items():
        r0, r1 = dims_r.get(i + L.shift, (0, 0))
        c0, c1 = dims_c.get(i, (0, 0))
        if r1 > r0 and c1 > c0:
            out[i] = m.submatrix(range(r0, r1), range(c0, c1))
    return out


# ---------------------------------------------------------------------------
# filtered modules


class FilteredLefschetzModule:
    """V (center (n+1)/2) with L-stable subspaces F2 c F1 c V.

    ``F1[i]`` and ``F2[i]`` are lists of coordinate vectors.  Adapted
    coordinates are fixed once: per degree the basis [F2 | C1 | C0] where C1
    completes F2 to F1 and C0 completes F1 to V, both by echelon pivoting.
    The graded pieces G0 = V/F1, G1 = F1/F2, G2 = F2 are expressed in the
    C0, C1 and F2 coordinates respectively.
    """

    def __init__(self, V: LefschetzModule, F1: dict, F2: dict, check: bool = True):
        self.V = V
        self.F1 = {}
        self.F2 = {}
        for i in V.degrees:
            d = V.dim(i)
            f1 = canonical_basis(F1.get(i, []), d)
            f2 = canonical_basis(F2.get(i, []), d)
            if not contains(f1, f2, d):
                raise ContractError(f"F2 is not contained in F1 in degree {i}")
            self.F1[i] = f1
            self.F2[i] = f2
        for k in list(F1) + list(F2):
            if int(k) not in V.space.dims and (F1.get(k) or F2.get(k)):
                if any(any(x for x in v) for v in list(F1.get(k, [])) + list(F2.get(k, []))):
                    raise ContractError(f"filtration has vectors in empty degree {k}")
        for name, F in (("F1", self.F1), ("F2", self.F2)):
            for i in V.degrees:
                img = [V.L.block(i) @ v for v in F[i]]
                if img and not contains(F.get(i + 1, []), img, V.dim(i + 1)):
                    raise ContractError(f"{name} is not L-stable in degree {i}")
        self._adapt()
        if check:
            for g, name in ((self.G0, "G0"), (self.G1, "G1"), (self.G2, "G2")):
                require_hard_lefschetz(g, name)

    @property
    def n(self) -> int:
        return self.V.n - 1

    def _adapt(self):
        V = self.V
        self.C1, self.C0, self.P, self.Pinv = {}, {}, {}, {}
        self.d2, self.d1, self.d0 = {}, {}, {}
        for i in V.degrees:
            d = V.dim(i)
            c1 = complement(self.F2[i], d, within=self.F1[i]) if self.F1[i] else []
            c0 = complement(self.F1[i], d)
            self.C1[i], self.C0[i] = c1, c0
            self.d2[i], self.d1[i], self.d0[i] = len(self.F2[i]), len(c1), len(c0)
            P = basis_matrix(self.F2[i] + c1 + c0, d)
            self.P[i] = P
            self.Pinv[i] = inverse(P)
        # L in adapted coordinates
        Lad = {}
        for i in V.degrees:
            if V.dim(i + 1):
                Lad[i] = self.Pinv[i + 1] @ V.L.block(i) @ self.P[i]
        self.L_adapted = GradedMap(V.space, V.space, 1, Lad)
        r2 = {i: (0, self.d2[i]) for i in V.degrees}
        r1 = {i: (self.d2[i], self.d2[i] + self.d1[i]) for i in V.degrees}
        r0 = {i: (self.d2[i] + self.d1[i], V.dim(i)) for i in V.degrees}
        r21 = {i: (0, self.d2[i] + self.d1[i]) for i in V.degrees}
        r10 = {i: (self.d2[i], V.dim(i)) for i in V.degrees}
        self._ranges = {"2": r2, "1": r1, "0": r0, "21": r21, "10": r10}
        n = self.n

        def piece(key, center):
            rr = self._ranges[key]
            dims = {i: rr[i][1] - rr[i][0] for i in V.degrees}
            return LefschetzModule.from_blocks(dims, _sub(self.L_adapted, None, None, rr, rr), center)

        self.G2 = piece("2", n + 2)
        self.G1 = piece("1", n + 1)
        self.G0 = piece("0", n)
        self.F1mod = piece("21", n + 1)     # F1 in [F2 | C1] coordinates
        self.VmodF2 = piece("10", n + 1)    # V/F2 in [C1 | C0] coordinates
        self.Vad = LefschetzModule(V.space, self.L_adapted, V.n)

    def ranges(self, key: str) -> dict:
        return self._ranges[key]

    def to_ambient(self, key: str, i: int) -> RatMatrix:
        """Basis vectors (as columns) of the coordinate block ``key`` in degree i."""
        r0, r1 = self._ranges[key].get(i, (0, 0))
        return self.P[i].submatrix(range(self.V.dim(i)), range(r0, r1)) if i in self.P else RatMatrix.zeros(0, 0)

    def projection(self, key: str, i: int) -> RatMatrix:
        """Rows of P^{-1} giving the coordinates of block ``key`` (valid on F-level)."""
        r0, r1 = self._ranges[key].get(i, (0, 0))
        return self.Pinv[i].submatrix(range(r0, r1), range(self.V.dim(i)))


@dataclass(frozen=True)
class ThreeStepSplitting:
    """alpha^i: G^i -> V (ambient coordinates) and beta: G0 -> G2 of degree +1."""

    alpha0: GradedMap
    alpha1: GradedMap
    alpha2: GradedMap
    beta: GradedMap

    def alpha_matrix(self, i: int) -> RatMatrix:
        """[alpha0 | alpha1 | alpha2] in degree i (columns ordered x0, x1, x2)."""
        return self.alpha0.block(i).hstack(self.alpha1.block(i)).hstack(self.alpha2.block(i))


def _inclusion(space_src: GradedSpace, space_tgt: GradedSpace, ranges: dict) -> GradedMap:
    blocks = {}
    for i in space_src.degrees:
        r0, r1 = ranges[i]
        d = space_tgt.dim(i)
        blocks[i] = RatMatrix([[1 if r == r0 + c else 0 for c in range(r1 - r0)] for r in range(d)],
                              r1 - r0)
    return GradedMap(space_src, space_tgt, 0, blocks)


def _projection(space_src: GradedSpace, space_tgt: GradedSpace, ranges: dict) -> GradedMap:
    blocks = {}
    for i in space_tgt.degrees:
        r0, r1 = ranges[i]
        d = space_src.dim(i)
        blocks[i] = RatMatrix([[1 if c == r0 + r else 0 for c in range(d)] for r in range(r1 - r0)], d)
    return GradedMap(space_src, space_tgt, 0, blocks)


def three_step_split(F: FilteredLefschetzModule, check_unique: bool = True) -> ThreeStepSplitting:
    """The unique filtered splitting with alpha1 L-linear and alpha0 L-linear mod Im alpha2,
    Lambda-linear mod Im alpha1."""
    V = F.V
    require_hard_lefschetz(V, "V")
    degs = V.degrees
    d2, d1, d0 = F.d2, F.d1, F.d0
    # alpha1: 0 -> G2 -> F1 -> G1 -> 0
    rng = {i: (0, d2[i]) for i in degs}
    seq1 = ExactSequence(F.G2, F.F1mod, F.G1,
                         _inclusion(F.G2.space, F.F1mod.space, rng),
                         _projection(F.F1mod.space, F.G1.space,
                                     {i: (d2[i], d2[i] + d1[i]) for i in degs}))
    a1 = two_step_lift(seq1, check_unique) if not F.G1.space.is_zero() else None
    # v: 0 -> G1 -> V/F2 -> G0 -> 0
    seq2 = ExactSequence(F.G1, F.VmodF2, F.G0,
                         _inclusion(F.G1.space, F.VmodF2.space, {i: (0, d1[i]) for i in degs}),
                         _projection(F.VmodF2.space, F.G0.space,
                                     {i: (d1[i], d1[i] + d0[i]) for i in degs}))
    v = two_step_lift(seq2, check_unique) if not F.G0.space.is_zero() else None
    # Vtilde = preimage of v(G0): coordinates (x2, x0), embedded via T
    T = {}
    for i in degs:
        rows = []
        for r in range(V.dim(i)):
            row = []
            for c in range(d2[i]):
                row.append(1 if r == c else 0)
            for c in range(d0[i]):
                if r < d2[i]:
                    row.append(0)
                else:
                    row.append(v.block(i)[r - d2[i], c] if v is not None else 0)
            rows.append(row)
        T[i] = RatMatrix(rows, d2[i] + d0[i])
    Vt = _restrict(F.Vad, T, V.n)
    seq3 = ExactSequence(F.G2, Vt, F.G0,
                         _inclusion(F.G2.space, Vt.space, {i: (0, d2[i]) for i in degs}),
                         _projection(Vt.space, F.G0.space, {i: (d2[i], d2[i] + d0[i]) for i in degs}))
    if F.G0.space.is_zero() and F.G2.space.is_zero():
        at = GradedMap.zero(F.G0.space, Vt.space)
        beta = GradedMap.zero(F.G0.space, F.G2.space, 1)
    else:
        at, beta = lambda_equivariant_split(seq3)
    # back to ambient coordinates
    A0, A1, A2 = {}, {}, {}
    for i in degs:
        P = F.P[i]
        if d0[i]:
            A0[i] = P @ (T[i] @ at.block(i))
        if d1[i]:
            col = a1.block(i)
            padded = col.vstack(RatMatrix.zeros(d0[i], d1[i]))
            A1[i] = P @ padded
        if d2[i]:
            A2[i] = F.to_ambient("2", i)
    S = ThreeStepSplitting(
        GradedMap(F.G0.space, V.space, 0, A0),
        GradedMap(F.G1.space, V.space, 0, A1),
        GradedMap(F.G2.space, V.space, 0, A2),
        beta,
    )
    return S


def verify_block_form(F: FilteredLefschetzModule, S: ThreeStepSplitting) -> bool:
    """alpha^{-1} L alpha and alpha^{-1} Lambda alpha against the displayed block matrices."""
    V = F.V
    if V.space.is_zero():
        return True
    try:
        LamV = lambda_operator(V)
        Lam = [lambda_operator(g) for g in (F.G0, F.G1, F.G2)]
    except HypothesisViolation:
        return False
    G = (F.G0, F.G1, F.G2)
    A, Ainv = {}, {}
    for i in V.degrees:
        A[i] = S.alpha_matrix(i)
        if A[i].shape != (V.dim(i), V.dim(i)) or not is_invertible(A[i]):
            return False
        Ainv[i] = inverse(A[i])

    def Z(i, j, di, dj):
        return RatMatrix.zeros(G[i].dim(di), G[j].dim(dj))

    for i in V.degrees:
        # L: degree i -> i+1
        if V.dim(i + 1):
            got = Ainv[i + 1] @ V.L.block(i) @ A[i]
            want = block([
                [G[0].L.block(i), Z(0, 1, i + 1, i), Z(0, 2, i + 1, i)],
                [Z(1, 0, i + 1, i), G[1].L.block(i), Z(1, 2, i + 1, i)],
                [S.beta.block(i), Z(2, 1, i + 1, i), G[2].L.block(i)],
            ])
            if got != want:
                return False
        if V.dim(i - 1):
            got = Ainv[i - 1] @ LamV.block(i) @ A[i]
            if G[2].dim(i):
                binv = inverse(S.beta.block(i - 1))
            else:
                binv = RatMatrix.zeros(G[0].dim(i - 1), 0)
            want = block([
                [Lam[0].block(i), Z(0, 1, i - 1, i), binv],
                [Z(1, 0, i - 1, i), Lam[1].block(i), Z(1, 2, i - 1, i)],
                [Z(2, 0, i - 1, i), Z(2, 1, i - 1, i), Lam[2].block(i)],
            ])
            if got != want:
                return False
    return True


# ---------------------------------------------------------------------------
# brute-force oracle for the 3-step splitting


def splitting_by_solve(F: FilteredLefschetzModule):
    """Solve the theorem's constraints directly, in adapted coordinates.

    Unknowns: alpha1 = (0, I, a21) over [x0 | x1 | x2] coordinates and
    alpha0 = (I, a10, a20), plus gamma: G0 -> G1 of degree -1 encoding
    "Lambda-linear modulo Im alpha1".  Stage one fixes a21 by L-linearity;
    stage two then is linear in (a10, a20, gamma).  Returns
    (ThreeStepSplitting or None, total nullity).
    """
    V = F.V
    degs = V.degrees
    d2, d1, d0 = F.d2, F.d1, F.d0
    La = F.L_adapted
    LamV = lambda_operator(V)
    Lam_ad = GradedMap(V.space, V.space, -1, {
        i: F.Pinv[i - 1] @ LamV.block(i) @ F.P[i] for i in degs if V.dim(i - 1)})
    Lam0 = lambda_operator(F.G0)

    def blk(M, i, shift, rk, ck):
        r0, r1 = F.ranges(rk).get(i + shift, (0, 0))
        c0, c1 = F.ranges(ck).get(i, (0, 0))
        return M.block(i).submatrix(range(r0, r1), range(c0, c1))

    # stage 1: L21 + L22 a21_i - a21_{i+1} L11 = 0
    s1 = MatrixSystem()
    for i in degs:
        if d1[i] and d2[i]:
            s1.unknown(f"a21_{i}", (d2[i], d1[i]))
    names1 = set(s1.unknowns)
    for i in degs:
        if not (d1[i] and d2.get(i + 1, 0)):
            continue
        terms = []
        if f"a21_{i}" in names1:
            terms.append((blk(La, i, 1, "2", "2"), f"a21_{i}", None))
        if f"a21_{i + 1}" in names1 and d1.get(i + 1, 0):
            terms.append((-RatMatrix.identity(d2[i + 1]), f"a21_{i + 1}", blk(La, i, 1, "1", "1")))
        const = -blk(La, i, 1, "2", "1")
        if terms:
            s1.equation(terms, const)
        elif not const.is_zero():
            return None, None
    sol1, null1 = s1.solve()
    if sol1 is None:
        return None, None
    a21 = {i: sol1[f"a21_{i}"] for i in degs if f"a21_{i}" in sol1}

    # stage 2
    s2 = MatrixSystem()
    for i in degs:
        if d0[i] and d1[i]:
            s2.unknown(f"a10_{i}", (d1[i], d0[i]))
        if d0[i] and d2[i]:
            s2.unknown(f"a20_{i}", (d2[i], d0[i]))
        if d0[i] and d1.get(i - 1, 0):
            s2.unknown(f"g_{i}", (d1[i - 1], d0[i]))
    names = set(s2.unknowns)

    def has(nm):
        return nm in names

    for i in degs:
        if not d0[i]:
            continue
        j = i + 1
        # L-linearity mod Im alpha2: L10 + L11 a10_i - a10_{j} L00 = 0
        if d1.get(j, 0):
            terms = []
            if has(f"a10_{i}"):
                terms.append((blk(La, i, 1, "1", "1"), f"a10_{i}", None))
            if has(f"a10_{j}"):
                terms.append((-RatMatrix.identity(d1[j]), f"a10_{j}", blk(La, i, 1, "0", "0")))
            const = -blk(La, i, 1, "1", "0")
            if terms:
                s2.equation(terms, const)
            elif not const.is_zero():
                return None, None
        # Lambda_V alpha0 - alpha0 Lambda_G0 = alpha1 gamma  (target degree i-1)
        k = i - 1
        if not V.dim(k):
            continue
        lam0 = Lam0.block(i)  # G0^i -> G0^{i-1}
        for rk in ("0", "1", "2"):
            dr = {"0": d0, "1": d1, "2": d2}[rk].get(k, 0)
            if not dr:
                continue
            terms = []
            # Lambda_V applied to (I; a10_i; a20_i): rows rk
            const = -blk(Lam_ad, i, -1, rk, "0")
            if has(f"a10_{i}"):
                terms.append((blk(Lam_ad, i, -1, rk, "1"), f"a10_{i}", None))
            if has(f"a20_{i}"):
                terms.append((blk(Lam_ad, i, -1, rk, "2"), f"a20_{i}", None))
            # minus alpha0_{k} Lambda_G0
            if rk == "0":
                const = const + lam0
            elif rk == "1" and has(f"a10_{k}"):
                terms.append((-RatMatrix.identity(dr), f"a10_{k}", lam0))
            elif rk == "2" and has(f"a20_{k}"):
                terms.append((-RatMatrix.identity(dr), f"a20_{k}", lam0))
            # minus alpha1_k gamma_i, alpha1 = (0; I; a21)
            if has(f"g_{i}"):
                if rk == "1":
                    terms.append((-RatMatrix.identity(dr), f"g_{i}", None))
                elif rk == "2" and k in a21:
                    terms.append((-a21[k], f"g_{i}", None))
            if terms:
                s2.equation(terms, const)
            elif not const.is_zero():
                return None, None
    sol2, null2 = s2.solve()
    if sol2 is None:
        return None, None
    A0, A1, A2 = {}, {}, {}
    for i in degs:
        P = F.P[i]
        if d0[i]:
            top = sol2[f"a20_{i}"] if has(f"a20_{i}") else RatMatrix.zeros(d2[i], d0[i])
            mid = sol2[f"a10_{i}"] if has(f"a10_{i}") else RatMatrix.zeros(d1[i], d0[i])
            A0[i] = P @ top.vstack(mid).vstack(RatMatrix.identity(d0[i]))
        if d1[i]:
            top = a21.get(i, RatMatrix.zeros(d2[i], d1[i]))
            A1[i] = P @ top.vstack(RatMatrix.identity(d1[i])).vstack(RatMatrix.zeros(d0[i], d1[i]))
        if d2[i]:
            A2[i] = F.to_ambient("2", i)
    alpha0 = GradedMap(F.G0.space, V.space, 0, A0)
    # beta from L alpha0 = alpha0 L + alpha2 beta
    Bt = {}
    for i in degs:
        if d0[i] and d2.get(i + 1, 0):
            diff = V.L.block(i) @ alpha0.block(i) - alpha0.block(i + 1) @ F.G0.L.block(i)
            Bt[i] = F.projection("2", i + 1) @ diff
    S = ThreeStepSplitting(alpha0, GradedMap(F.G1.space, V.space, 0, A1),
                           GradedMap(F.G2.space, V.space, 0, A2),
                           GradedMap(F.G0.space, F.G2.space, 1, Bt))
    return S, null1 + null2


def same_splitting(F: FilteredLefschetzModule, S: ThreeStepSplitting, T: ThreeStepSplitting) -> bool:
    return (S.alpha0 == T.alpha0 and S.alpha1 == T.alpha1 and S.alpha2 == T.alpha2
            and S.beta == T.beta)


def image_bases(S: ThreeStepSplitting) -> dict:
    """Canonical bases of Im alpha^i per degree (basis-independent output)."""
    out = {}
    for key, a in (("alpha0", S.alpha0), ("alpha1", S.alpha1), ("alpha2", S.alpha2)):
        out[key] = {i: canonical_basis(a.block(i).columns(), a.target.dim(i)) for i in a.source.degrees}
    return out
