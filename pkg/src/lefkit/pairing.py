"""Symmetric L-adjoint pairings, induced pairings on graded pieces, Hodge index.

A ``GradedPairing`` of total t stores, for every degree i, the Gram block
G_i of the form on V^i x V^{t-i}; symmetry means G_{t-i} = G_i^T.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, HypothesisViolation, OrthogonalityViolation
from .graded import GradedMap, GradedSpace
from .lefschetz import LefschetzModule, check_hard_lefschetz, primitive_parts, require_hard_lefschetz
from .ratlinalg import (
    RatMatrix,
    basis_matrix,
    block,
    det,
    inverse,
    is_invertible,
    kernel,
    qstr,
    same_subspace,
    signature,
)
from .splitting import FilteredLefschetzModule, ThreeStepSplitting, three_step_split


class GradedPairing:
    """Bilinear form pairing V^i with V^{total-i}."""

    __slots__ = ("space", "total", "blocks")

    def __init__(self, space: GradedSpace, total: int, blocks=None):
        self.space = space
        self.total = int(total)
        out = {}
        for i, m in (blocks or {}).items():
            i = int(i)
            m = m if isinstance(m, RatMatrix) else RatMatrix(m, space.dim(total - i))
            if m.shape != (space.dim(i), space.dim(total - i)):
                raise ContractError(
                    f"pairing block {i} has shape {m.shape}, expected "
                    f"{(space.dim(i), space.dim(total - i))}")
            if not m.is_zero():
                out[i] = m
        self.blocks = out

    @classmethod
    def symmetric_from(cls, space, total, half_blocks) -> "GradedPairing":
        """Fill in block t-i as the transpose of block i."""
        blocks = {}
        for i, m in half_blocks.items():
            m = m if isinstance(m, RatMatrix) else RatMatrix(m, space.dim(total - int(i)))
            blocks[int(i)] = m
            blocks[total - int(i)] = m.T
        return cls(space, total, blocks)

    def block(self, i: int) -> RatMatrix:
        m = self.blocks.get(i)
        if m is None:
            return RatMatrix.zeros(self.space.dim(i), self.space.dim(self.total - i))
        return m

    def value(self, i: int, x, y):
        """<x, y> for x in V^i, y in V^{total-i}."""
        G = self.block(i)
        return sum((a * b for a, b in zip(x, G @ y)), Fraction(0))

    def is_symmetric(self) -> bool:
        return all(self.block(i) == self.block(self.total - i).T for i in self.space.degrees)

    def is_nondegenerate(self) -> bool:
        return all(self.space.dim(i) == self.space.dim(self.total - i)
                   and (not self.space.dim(i) or is_invertible(self.block(i)))
                   for i in self.space.degrees)

    def __add__(self, other: "GradedPairing") -> "GradedPairing":
        if other.space != self.space or other.total != self.total:
            raise ContractError("adding pairings on different spaces")
        return GradedPairing(self.space, self.total,
                             {i: self.block(i) + other.block(i) for i in self.space.degrees})

    def scaled(self, s) -> "GradedPairing":
        return GradedPairing(self.space, self.total, {i: m * s for i, m in self.blocks.items()})

    def __eq__(self, other):
        return (isinstance(other, GradedPairing) and self.space == other.space
                and self.total == other.total and self.blocks == other.blocks)

    def __repr__(self):
        return f"GradedPairing(total={self.total}, dims={self.space.dims})"

    def to_json(self) -> dict:
        return {"total": self.total,
                "blocks": {str(i): m.to_json() for i, m in sorted(self.blocks.items())}}


def check_adjoint(P: GradedPairing, L: GradedMap) -> bool:
    """<Lx, y> = <x, Ly> in every degree."""
    if L.source != P.space or L.target != P.space or L.shift != 1:
        raise ContractError("L must be a degree +1 endomorphism of the paired space")
    t = P.total
    for i in P.space.degrees:
        lhs = L.block(i).T @ P.block(i + 1)
        rhs = P.block(i) @ L.block(t - i - 1)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Hodge index


@dataclass(frozen=True)
class HodgeReport:
    """signatures[i] = signature of (-1)^i <p, L^{n-2i} q> on primitive vectors of degree i."""

    signatures: dict
    verdict: bool

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "signatures": {str(i): list(s) for i, s in sorted(self.signatures.items())}}


def _hodge_form(M: LefschetzModule, P: GradedPairing, i: int, prim) -> RatMatrix:
    B = basis_matrix(prim, M.dim(i))
    Q = B.T @ P.block(i) @ M.Lpow(i, M.n - 2 * i) @ B
    return Q if i % 2 == 0 else -Q


def hodge_index_check(M: LefschetzModule, P: GradedPairing) -> HodgeReport:
    """Exact signatures of (-1)^i <., L^{n-2i} .> on each primitive part."""
    if P.space != M.space or P.total != M.n:
        raise ContractError(f"pairing of total {P.total} does not match the module (center {M.n}/2)")
    if not check_adjoint(P, M.L):
        raise ContractError("pairing is not L-adjoint")
    require_hard_lefschetz(M)
    D = primitive_parts(M)
    sigs = {}
    for i, prim in sorted(D.primitive_bases.items()):
        sigs[i] = signature(_hodge_form(M, P, i, prim))
    verdict = all(s == (len(D.primitive_bases[i]), 0, 0) for i, s in sigs.items())
    return HodgeReport(sigs, verdict)


def _hodge_holds(M: LefschetzModule, P: GradedPairing) -> bool:
    """Hodge index verdict, False when hard Lefschetz already fails."""
    if not check_hard_lefschetz(M).holds:
        return False
    return hodge_index_check(M, P).verdict


# ---------------------------------------------------------------------------
# induced pairings


@dataclass(frozen=True)
class InducedPairings:
    """Pairings on the graded pieces of a filtered module.

    ``m02[i]`` is the Gram block of (.,.)_{0,2} on G0^i x G2^{t-i};
    ``p11``, ``p00`` and ``p22`` are genuine GradedPairing objects on
    G1 (total t), G0 (total t-1) and G2 (total t+1).
    """

    total: int
    m02: dict
    p11: GradedPairing
    p00: GradedPairing
    p22: GradedPairing

    def m20(self, i: int) -> RatMatrix:
        """Gram block of (.,.)_{2,0} on G2^i x G0^{t-i}."""
        return self.m02[self.total - i].T


def check_orthogonality(F: FilteredLefschetzModule, P: GradedPairing) -> None:
    """F1 in degree i must equal the orthogonal complement of F2 in degree t-i."""
    V = F.V
    t = P.total
    for i in V.degrees:
        f2 = F.F2.get(t - i, [])
        if f2:
            perp = kernel((P.block(i) @ basis_matrix(f2, V.dim(t - i))).T)
        else:
            perp = [tuple(1 if r == c else 0 for r in range(V.dim(i))) for c in range(V.dim(i))]
        if not same_subspace(perp, F.F1[i], V.dim(i)):
            raise OrthogonalityViolation(
                f"F1 in degree {i} is not the orthogonal complement of F2 in degree {t - i}")


def _m02(F: FilteredLefschetzModule, P: GradedPairing) -> dict:
    t = P.total
    out = {}
    for i in F.V.degrees:
        out[i] = F.to_ambient("0", i).T @ P.block(i) @ F.to_ambient("2", t - i) \
            if F.V.dim(t - i) else RatMatrix.zeros(F.d0[i], 0)
    return out


def induced_graded_pairings(F: FilteredLefschetzModule, P: GradedPairing,
                            S: ThreeStepSplitting | None = None) -> InducedPairings:
    """(.,.)_{0,2}, (.,.)_{1,1}, (.,.)_{0,0} and (.,.)_{2,2} on the graded pieces."""
    V = F.V
    if P.space != V.space:
        raise ContractError("pairing lives on a different space")
    t = P.total
    check_orthogonality(F, P)
    S = S or three_step_split(F)
    m02 = _m02(F, P)
    b11 = {}
    for i in F.G1.degrees:
        if F.G1.dim(t - i):
            b11[i] = F.to_ambient("1", i).T @ P.block(i) @ F.to_ambient("1", t - i)
    p11 = GradedPairing(F.G1.space, t, b11)
    b00 = {}
    for i in F.G0.degrees:
        j = t - 1 - i
        if F.G0.dim(j):
            b00[i] = m02[i] @ S.beta.block(j)
    p00 = GradedPairing(F.G0.space, t - 1, b00)
    b22 = {}
    for i in F.G2.degrees:
        if F.G2.dim(t + 1 - i):
            b22[i] = inverse(S.beta.block(i - 1)).T @ m02[i - 1]
    p22 = GradedPairing(F.G2.space, t + 1, b22)
    # (x, beta y)_{0,2} = (beta x, y)_{2,0}
    if not p00.is_symmetric():
        raise HypothesisViolation("relation (x, beta y)_{0,2} = (beta x, y)_{2,0} fails")
    if not p22.is_symmetric():
        raise HypothesisViolation("induced pairing on G2 is not symmetric")
    return InducedPairings(t, m02, p11, p00, p22)


def _require_good_pairing(F: FilteredLefschetzModule, P: GradedPairing) -> None:
    if P.space != F.V.space:
        raise ContractError("pairing lives on a different space")
    if not P.is_symmetric():
        raise ContractError("pairing is not symmetric")
    if not check_adjoint(P, F.V.L):
        raise ContractError("pairing is not L-adjoint")
    if not P.is_nondegenerate():
        raise HypothesisViolation("pairing is degenerate")
    check_orthogonality(F, P)


def block_form_check(F: FilteredLefschetzModule, P: GradedPairing, S: ThreeStepSplitting) -> bool:
    """Pulled-back Gram matrix equals (x,z')_{0,2} + (y,y')_{1,1} + (z,x')_{2,0}."""
    _require_good_pairing(F, P)
    ind = induced_graded_pairings(F, P, S)
    t = P.total
    G = (F.G0, F.G1, F.G2)
    for i in F.V.degrees:
        j = t - i
        if not F.V.dim(j):
            continue
        got = S.alpha_matrix(i).T @ P.block(i) @ S.alpha_matrix(j)

        def Z(a, b):
            return RatMatrix.zeros(G[a].dim(i), G[b].dim(j))

        want = block([
            [Z(0, 0), Z(0, 1), ind.m02[i]],
            [Z(1, 0), ind.p11.block(i), Z(1, 2)],
            [ind.m20(i), Z(2, 1), Z(2, 2)],
        ])
        if got != want:
            return False
    return True


@dataclass(frozen=True)
class HodgeEquivalenceReport:
    v_side: bool
    g1_side: bool
    g0_side: bool

    @property
    def g_side(self) -> bool:
        return self.g1_side and self.g0_side

    @property
    def agree(self) -> bool:
        return self.v_side == self.g_side

    def to_json(self) -> dict:
        return {"v_side": self.v_side, "g1": self.g1_side, "g0": self.g0_side,
                "g_side": self.g_side, "agree": self.agree}


def hodge_equivalence_check(F: FilteredLefschetzModule, P: GradedPairing,
                            S: ThreeStepSplitting | None = None) -> HodgeEquivalenceReport:
    """Evaluate the Hodge index on V and on (G1, (.,.)_{1,1}), (G0, (.,.)_{0,0}) separately."""
    S = S or three_step_split(F)
    ind = induced_graded_pairings(F, P, S)
    v = _hodge_holds(F.V, P)
    g1 = _hodge_holds(F.G1, ind.p11)
    g0 = _hodge_holds(F.G0, ind.p00)
    return HodgeEquivalenceReport(v, g1, g0)


# ---------------------------------------------------------------------------
# polarization twist


def _induced_eps(F: FilteredLefschetzModule, eps: GradedMap) -> dict:
    """eps as a map G0^i -> G2^{i+1} (it kills F1 and lands in F2)."""
    V = F.V
    if eps.source != V.space or eps.target != V.space or eps.shift != 1:
        raise ContractError("eps must be a degree +1 endomorphism of V")
    out = {}
    for i in V.degrees:
        if not V.dim(i + 1):
            continue
        E = eps.block(i)
        if F.F1[i] and not (E @ basis_matrix(F.F1[i], V.dim(i))).is_zero():
            raise ContractError(f"eps does not vanish on F1 in degree {i}")
        img = F.Pinv[i + 1] @ E
        rest = img.submatrix(range(F.d2[i + 1], V.dim(i + 1)), range(V.dim(i)))
        if not rest.is_zero():
            raise ContractError(f"eps does not land in F2 in degree {i}")
        out[i] = F.projection("2", i + 1) @ E @ F.to_ambient("0", i)
    return out


def twisted_module(V: LefschetzModule, eps: GradedMap, c) -> LefschetzModule:
    """V with L replaced by L + c eps."""
    return LefschetzModule(V.space, V.L + eps.scaled(Fraction(c)), V.n)


def _newton_poly(f, deg: int) -> list:
    """Coefficients (low to high) of the degree <= deg polynomial through f(0..deg)."""
    xs = list(range(deg + 1))
    coef = [Fraction(f(x)) for x in xs]
    for k in range(1, deg + 1):
        for i in range(deg, k - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - k])
    # expand Newton form to monomials
    poly = [Fraction(0)] * (deg + 1)
    for k in range(deg, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        new = [Fraction(0)] * (deg + 1)
        for d in range(deg, -1, -1):
            if poly[d]:
                if d + 1 <= deg:
                    new[d + 1] += poly[d]
                new[d] -= xs[k] * poly[d]
        new[0] += coef[k]
        poly = new
    return poly


def _cauchy_bound(poly: list) -> Fraction:
    while poly and not poly[-1]:
        poly = poly[:-1]
    if len(poly) <= 1:
        return Fraction(0)
    lead = abs(poly[-1])
    return 1 + max(abs(a) / lead for a in poly[:-1])


@dataclass(frozen=True)
class TwistData:
    """Everything needed to evaluate the twisted family at a given c."""

    polys: dict          # degree i -> coefficients of P_i(c)
    q0: dict             # degree i -> (-1)^i (.,.)_{0,0} on primitive vectors
    qa: dict             # same for (.,.)_A

    def hl_holds(self, c) -> bool:
        return all(_peval(p, c) != 0 for p in self.polys.values())

    def positive(self, c) -> bool:
        for i, Q in self.q0.items():
            M = Q + self.qa[i] * Fraction(c)
            if signature(M) != (M.nrows, 0, 0):
                return False
        return True


def _peval(p, x):
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def twist_data(F: FilteredLefschetzModule, P: GradedPairing, eps: GradedMap,
               S: ThreeStepSplitting | None = None, p00: GradedPairing | None = None) -> TwistData:
    """Determinant polynomials and primitive Gram matrices of the twisted family.

    ``p00`` overrides the induced (.,.)_{0,0} (to study a modified form).
    """
    V = F.V
    S = S or three_step_split(F)
    ind = induced_graded_pairings(F, P, S)
    for i, m in ind.m02.items():
        if m.nrows != m.ncols or (m.nrows and not is_invertible(m)):
            raise HypothesisViolation(f"pairing between G0 and G2 is degenerate in degree {i}")
    ebar = _induced_eps(F, eps)
    t = P.total
    pa = GradedPairing(F.G0.space, t - 1, {
        i: ind.m02[i] @ ebar[t - 1 - i] for i in F.G0.degrees if F.G0.dim(t - 1 - i)})
    if not pa.is_symmetric():
        raise HypothesisViolation("(x, eps y)_{0,2} is not symmetric on G0")
    base = p00 if p00 is not None else ind.p00
    G0 = F.G0
    q0, qa = {}, {}
    if not G0.space.is_zero():
        require_hard_lefschetz(G0, "G0")
        D = primitive_parts(G0)
        for i, prim in D.primitive_bases.items():
            q0[i] = _hodge_form(G0, base, i, prim)
            qa[i] = _hodge_form(G0, pa, i, prim)
            if signature(qa[i]) != (len(prim), 0, 0):
                raise HypothesisViolation(
                    f"(x, eps y) is not positive on primitive classes of G0 in degree {i}")
    N = V.n
    polys = {}
    for i in V.primitive_degrees():
        a, b = V.dim(i), V.dim(N - i)
        if a != b:
            raise HypothesisViolation(f"dim V^{i} != dim V^{N - i}; no twist can help")
        if not a:
            continue
        k = N - 2 * i
        deg = a * k

        def f(c, i=i, k=k):
            return det(twisted_module(V, eps, c).Lpow(i, k))

        p = _newton_poly(f, deg)
        if not any(p):
            raise HypothesisViolation(f"det of L(c)^{k} on degree {i} vanishes identically")
        polys[i] = p
    return TwistData(polys, q0, qa)


def find_polarization_twist(F: FilteredLefschetzModule, P: GradedPairing, eps: GradedMap,
                            S: ThreeStepSplitting | None = None,
                            p00: GradedPairing | None = None) -> Fraction:
    """Smallest integer c >= 0 with L + c eps Lefschetz and (.,.)_{0,0}(c) Hodge-positive."""
    data = twist_data(F, P, eps, S, p00)
    # positivity holds on a half line; find a point on it by doubling
    c_pos = 0
    while not data.positive(c_pos):
        c_pos = 1 if c_pos == 0 else 2 * c_pos
    bound = max([c_pos] + [int(_cauchy_bound(p)) + 1 for p in data.polys.values()])
    nroots = sum(len(p) for p in data.polys.values())
    for c in range(0, bound + nroots + 2):
        if data.positive(c) and data.hl_holds(c):
            return Fraction(c)
    raise HypothesisViolation("no admissible twist found below the root bound")  # pragma: no cover


def twisted_p00(F: FilteredLefschetzModule, P: GradedPairing, eps: GradedMap, c,
                S: ThreeStepSplitting | None = None) -> GradedPairing:
    """(.,.)_{0,0}(c) = (.,.)_{0,0} + c (x, eps y)_{0,2}."""
    S = S or three_step_split(F)
    ind = induced_graded_pairings(F, P, S)
    ebar = _induced_eps(F, eps)
    t = P.total
    pa = GradedPairing(F.G0.space, t - 1, {
        i: ind.m02[i] @ ebar[t - 1 - i] for i in F.G0.degrees if F.G0.dim(t - 1 - i)})
    return ind.p00 + pa.scaled(Fraction(c))
