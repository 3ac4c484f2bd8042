"""Cycle data on a degenerate special fiber: vanishing/nearby parts, harmonic
splitting, admissible cycles and local height pairings.

Conventions.  ``A_high`` is graded by codimension p (A^p).  ``A_low`` is
graded by dimension d (A_d) and stored internally regraded by
p = n + 1 - d, so that ``conn``: A_{n+1-p} -> A^p is a degree 0 map and
the dimension-lowering ``L_low`` becomes a degree +1 map.  ``pair[p]`` is
the Gram matrix of A^p x A_p.  ``cap``: A^q -> A_{n-q} is intersection with
the fundamental class of the fiber (degree +1 in the regraded picture); it
induces the pairing on the nearby part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractError, HypothesisViolation, NonUniqueSolution, NotHomologicallyTrivial
from .graded import GradedMap, GradedSpace
from .lefschetz import LefschetzModule, check_hard_lefschetz
from .pairing import GradedPairing, hodge_index_check
from .ratlinalg import (
    RatMatrix,
    basis_matrix,
    canonical_basis,
    complement,
    contains,
    image,
    in_span,
    inverse,
    is_invertible,
    kernel,
    same_subspace,
    solve,
)
from .splitting import ExactSequence, two_step_lift


def _mat(m, nrows, ncols):
    m = m if isinstance(m, RatMatrix) else RatMatrix(m, ncols)
    if m.shape != (nrows, ncols):
        raise ContractError(f"block has shape {m.shape}, expected {(nrows, ncols)}")
    return m


class SpecialFiberData:
    """Chow-type groups of a special fiber together with i^*i_*, L and the pairing."""

    def __init__(self, n: int, high_dims, low_dims, conn, L_high, L_low, pair, cap):
        """Blocks are given as dicts:

        conn[p]:   A_{n+1-p} -> A^p
        L_high[p]: A^p -> A^{p+1}
        L_low[d]:  A_d -> A_{d-1}
        pair[p]:   Gram matrix on A^p x A_p
        cap[q]:    A^q -> A_{n-q}
        """
        self.n = n = int(n)
        self.A_high = GradedSpace({int(k): v for k, v in high_dims.items()})
        self.A_low = GradedSpace({int(k): v for k, v in low_dims.items()})
        self.low = GradedSpace({n + 1 - d: self.A_low.dim(d) for d in self.A_low.degrees})
        H, Lw = self.A_high, self.low
        self.conn = GradedMap(Lw, H, 0, {int(p): _mat(m, H.dim(int(p)), Lw.dim(int(p)))
                                         for p, m in conn.items()})
        self.L_high = GradedMap(H, H, 1, {int(p): m for p, m in L_high.items()})
        self.L_low = GradedMap(Lw, Lw, 1, {n + 1 - int(d): m for d, m in L_low.items()})
        self.pair = {}
        for p, m in pair.items():
            p = int(p)
            self.pair[p] = _mat(m, H.dim(p), self.A_low.dim(p))
        self.cap = GradedMap(H, Lw, 1, {int(q): m for q, m in cap.items()})
        self._check()

    # -- accessors
    def pair_block(self, p: int) -> RatMatrix:
        m = self.pair.get(p)
        return m if m is not None else RatMatrix.zeros(self.A_high.dim(p), self.A_low.dim(p))

    def low_dim(self, p: int) -> int:
        """Dimension of A_{n+1-p}."""
        return self.low.dim(p)

    @property
    def degrees(self):
        return self.A_high.degrees

    def _check(self):
        n = self.n
        if not (self.L_high @ self.conn == self.conn @ self.L_low):
            raise ContractError("i^*i_* does not commute with L")
        for p in sorted(set(self.A_high.degrees) | set(self.low.degrees)):
            q = n + 1 - p
            # <conn a, b> = <conn b, a> for a in A_{n+1-p}, b in A_p
            lhs = self.conn.block(p).T @ self.pair_block(p)
            rhs = (self.conn.block(q).T @ self.pair_block(q)).T
            if lhs != rhs:
                raise ContractError(f"i^*i_* is not self-adjoint for the pairing (p={p})")
        for p in self.A_high.degrees:
            # <L x, y> = <x, L y> for x in A^p, y in A_{p+1}
            lhs = self.L_high.block(p).T @ self.pair_block(p + 1)
            rhs = self.pair_block(p) @ self.L_low.block(n - p)
            if lhs != rhs:
                raise ContractError(f"L is not adjoint for the pairing (p={p})")
        if not (self.conn @ self.cap).is_zero():
            raise ContractError("i^*i_* does not vanish on the fundamental-class image")
        for q in self.A_high.degrees:
            # <x, cap y> symmetric for x in A^q, y in A^{n-q}
            lhs = self.pair_block(q) @ self.cap.block(n - q)
            rhs = (self.pair_block(n - q) @ self.cap.block(q)).T
            if lhs != rhs:
                raise ContractError(f"<x, cap y> is not symmetric (q={q})")

    def to_json(self) -> dict:
        n = self.n
        return {
            "n": n,
            "A_high": {str(k): v for k, v in sorted(self.A_high.dims.items())},
            "A_low": {str(k): v for k, v in sorted(self.A_low.dims.items())},
            "conn": {str(p): m.to_json() for p, m in sorted(self.conn.blocks.items())},
            "L_high": {str(p): m.to_json() for p, m in sorted(self.L_high.blocks.items())},
            "L_low": {str(n + 1 - p): m.to_json() for p, m in sorted(self.L_low.blocks.items())},
            "pair": {str(p): m.to_json() for p, m in sorted(self.pair.items())},
            "cap": {str(q): m.to_json() for q, m in sorted(self.cap.blocks.items())},
        }


# ---------------------------------------------------------------------------
# vanishing / nearby parts


@dataclass(frozen=True)
class VanishingNearby:
    """Bases (coordinate vectors) of the pieces of A^* and A_*.

    A_phi[p]: image of i^*i_* in A^p.   A_psi[p]: echelon complement of A_phi[p]
    whose span represents the cokernel.  psi_low[p]: Ker(i^*i_*) in A_{n+1-p}.
    phi_low_harmonic[p]: classes in A_{n+1-p} orthogonal to the harmonic part
    (None when the harmonic part does not exist).
    """

    A_phi: dict
    A_psi: dict
    psi_low: dict
    phi_low_harmonic: dict | None
    phi_module: LefschetzModule
    psi_module: LefschetzModule
    phi_pairing: GradedPairing
    psi_pairing: GradedPairing


def _phi_psi(f: SpecialFiberData):
    n = f.n
    H = f.A_high
    A_phi, A_psi = {}, {}
    for p in H.degrees:
        A_phi[p] = canonical_basis(image(f.conn.block(p)), H.dim(p)) if f.low_dim(p) else []
        A_psi[p] = complement(A_phi[p], H.dim(p))
    # phi module: L restricted
    phi_dims = {p: len(A_phi[p]) for p in H.degrees}
    psi_dims = {p: len(A_psi[p]) for p in H.degrees}
    Lphi, Lpsi = {}, {}
    coords = {}
    for p in H.degrees:
        coords[p] = inverse(basis_matrix(A_phi[p] + A_psi[p], H.dim(p)))
    for p in H.degrees:
        if not H.dim(p + 1):
            continue
        a, b = phi_dims[p + 1], psi_dims[p + 1]
        if phi_dims[p]:
            img = coords[p + 1] @ f.L_high.block(p) @ basis_matrix(A_phi[p], H.dim(p))
            if not img.submatrix(range(a, a + b), range(phi_dims[p])).is_zero():
                raise ContractError("image of i^*i_* is not L-stable")
            Lphi[p] = img.submatrix(range(a), range(phi_dims[p]))
        if psi_dims[p]:
            img = coords[p + 1] @ f.L_high.block(p) @ basis_matrix(A_psi[p], H.dim(p))
            Lpsi[p] = img.submatrix(range(a, a + b), range(psi_dims[p]))
    phi_mod = LefschetzModule.from_blocks(phi_dims, Lphi, n + 1)
    psi_mod = LefschetzModule.from_blocks(psi_dims, Lpsi, n)
    # (x, y)_phi = <x, b> with conn b = y
    bphi = {}
    for p in H.degrees:
        q = n + 1 - p
        if not (phi_dims[p] and phi_dims.get(q, 0)):
            continue
        cols = []
        for y in A_phi[q]:
            b = solve(f.conn.block(q), y)[0]
            cols.append(f.pair_block(p) @ b)
        # rows indexed by x in A_phi[p]
        X = basis_matrix(A_phi[p], H.dim(p))
        bphi[p] = X.T @ basis_matrix(cols, H.dim(p))
    phi_pair = GradedPairing(phi_mod.space, n + 1, bphi)
    bpsi = {}
    for p in H.degrees:
        q = n - p
        if psi_dims[p] and psi_dims.get(q, 0):
            bpsi[p] = (basis_matrix(A_psi[p], H.dim(p)).T @ f.pair_block(p)
                       @ f.cap.block(q) @ basis_matrix(A_psi[q], H.dim(q)))
    psi_pair = GradedPairing(psi_mod.space, n, bpsi)
    return A_phi, A_psi, phi_mod, psi_mod, phi_pair, psi_pair, coords


def vanishing_nearby(f: SpecialFiberData) -> VanishingNearby:
    A_phi, A_psi, phi_mod, psi_mod, phi_pair, psi_pair, _ = _phi_psi(f)
    for p in f.A_high.degrees:
        if len(A_phi[p]) + len(A_psi[p]) != f.A_high.dim(p):
            raise ContractError(f"vanishing/nearby sequence is not exact in degree {p}")
    psi_low = {p: kernel(f.conn.block(p)) for p in f.low.degrees}
    harm = None
    try:
        Hb = harmonic_split(f)
    except HypothesisViolation:
        Hb = None
    if Hb is not None:
        harm = {p: _normalizer_kernel(f, Hb, p) for p in f.low.degrees}
    return VanishingNearby(A_phi, A_psi, psi_low, harm, phi_mod, psi_mod, phi_pair, psi_pair)


def _normalizer_kernel(f: SpecialFiberData, harmonic: dict, p: int) -> list:
    """g in A_{n+1-p} with <h, g> = 0 for every harmonic h in A^{n+1-p}."""
    q = f.n + 1 - p
    hs = harmonic.get(q, [])
    d = f.low_dim(p)
    if not hs:
        return [tuple(1 if r == c else 0 for r in range(d)) for c in range(d)]
    return kernel(basis_matrix(hs, f.A_high.dim(q)).T @ f.pair_block(q))


# ---------------------------------------------------------------------------
# conjectures as predicates


@dataclass(frozen=True)
class ConjectureReport:
    nd: bool
    lef_phi: bool
    lef_psi: bool
    hod_phi: bool
    hod_psi: bool

    def to_json(self) -> dict:
        return {"nd": self.nd, "lef_phi": self.lef_phi, "lef_psi": self.lef_psi,
                "hod_phi": self.hod_phi, "hod_psi": self.hod_psi}

    @property
    def all_hold(self) -> bool:
        return self.nd and self.lef_phi and self.lef_psi and self.hod_phi and self.hod_psi


def conjecture_report(f: SpecialFiberData) -> ConjectureReport:
    """Perfectness of the pairing, hard Lefschetz and Hodge index on A_phi and A_psi."""
    nd = all(f.A_high.dim(p) == f.A_low.dim(p) and (not f.A_high.dim(p) or is_invertible(f.pair_block(p)))
             for p in set(f.A_high.degrees) | set(f.A_low.degrees))
    _, _, phi_mod, psi_mod, phi_pair, psi_pair, _ = _phi_psi(f)
    lef_phi = check_hard_lefschetz(phi_mod).holds
    lef_psi = check_hard_lefschetz(psi_mod).holds
    hod_phi = lef_phi and hodge_index_check(phi_mod, phi_pair).verdict
    hod_psi = lef_psi and hodge_index_check(psi_mod, psi_pair).verdict
    return ConjectureReport(nd, lef_phi, lef_psi, hod_phi, hod_psi)


# ---------------------------------------------------------------------------
# harmonic splitting


def harmonic_split(f: SpecialFiberData) -> dict:
    """Per degree, a basis of the unique L-stable complement of A_phi in A^*."""
    n = f.n
    A_phi, A_psi, phi_mod, psi_mod, _, _, coords = _phi_psi(f)
    H = f.A_high
    V = LefschetzModule(H, f.L_high, n + 1)
    eps = GradedMap(phi_mod.space, H, 0, {
        p: basis_matrix(A_phi[p], H.dim(p)) for p in H.degrees if A_phi[p]})
    eta = GradedMap(H, psi_mod.space, 0, {
        p: coords[p].submatrix(range(len(A_phi[p]), H.dim(p)), range(H.dim(p)))
        for p in H.degrees if A_psi[p]})
    seq = ExactSequence(phi_mod, V, psi_mod, eps, eta)
    sigma = two_step_lift(seq)
    return {p: canonical_basis(sigma.block(p).columns(), H.dim(p)) for p in H.degrees}


# ---------------------------------------------------------------------------
# models of cycles


@dataclass(frozen=True)
class CycleClass:
    """Coordinates of a class in Zhat^p."""

    p: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    def __add__(self, other):
        if other.p != self.p:
            raise ContractError("adding classes of different degrees")
        return CycleClass(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def to_json(self) -> dict:
        from .ratlinalg import qstr
        return {"p": self.p, "coords": [qstr(x) for x in self.coords]}


class LocalModel:
    """Instance-supplied model of the group of cycles with curvature and a pairing."""

    def __init__(self, fiber: SpecialFiberData, zhat_dims, i_star, omega, eta_restrict,
                 generic_dims, zpair):
        """i_star[p]: A_{n+1-p} -> Zhat^p, omega[p]: Zhat^p -> A^p,
        eta_restrict[p]: Zhat^p -> Z^p(generic), zpair[p]: Gram block on
        Zhat^p x Zhat^{n+1-p}."""
        self.fiber = f = fiber
        n = f.n
        self.Zhat = Z = GradedSpace({int(k): v for k, v in zhat_dims.items()})
        self.generic = GradedSpace({int(k): v for k, v in generic_dims.items()})
        self.i_star = GradedMap(f.low, Z, 0, {int(p): m for p, m in i_star.items()})
        self.omega = GradedMap(Z, f.A_high, 0, {int(p): m for p, m in omega.items()})
        self.eta_restrict = GradedMap(Z, self.generic, 0, {int(p): m for p, m in eta_restrict.items()})
        self.zpair = GradedPairing(Z, n + 1, zpair)
        if not (self.omega @ self.i_star == f.conn):
            raise ContractError("curvature of a vertical class differs from i^*i_*")
        for p in Z.degrees:
            q = n + 1 - p
            lhs = self.i_star.block(p).T @ self.zpair.block(p)
            rhs = f.pair_block(q).T @ self.omega.block(q)
            if lhs != rhs:
                raise ContractError(f"projection formula fails in degree {p}")
            ker = kernel(self.eta_restrict.block(p))
            im = image(self.i_star.block(p))
            if not same_subspace(ker, im, Z.dim(p)):
                raise ContractError(f"Ker(restriction) != Im(i_*) in degree {p}")
        self._harm = None

    @property
    def harmonic(self) -> dict:
        if self._harm is None:
            self._harm = harmonic_split(self.fiber)
        return self._harm

    def cycle(self, p: int, coords) -> CycleClass:
        if len(coords) != self.Zhat.dim(p):
            raise ContractError(f"class in degree {p} needs {self.Zhat.dim(p)} coordinates")
        return CycleClass(p, coords)

    def curvature(self, z: CycleClass) -> tuple:
        return self.omega.block(z.p) @ z.coords


def is_admissible(m: LocalModel, z: CycleClass) -> bool:
    """Curvature lies in the harmonic part."""
    w = m.curvature(z)
    if not any(w):
        return True
    return in_span(w, m.harmonic.get(z.p, []))


def _phi_component(m: LocalModel, p: int, w) -> tuple:
    """The A_phi-component of w in A^p = A_phi + harmonic part."""
    f = m.fiber
    d = f.A_high.dim(p)
    phi = canonical_basis(image(f.conn.block(p)), d) if f.low_dim(p) else []
    harm = m.harmonic.get(p, [])
    B = basis_matrix(phi + harm, d)
    c = inverse(B) @ w
    return basis_matrix(phi, d) @ c[:len(phi)] if phi else (Fraction(0),) * d


def _normalized_solve(m: LocalModel, p: int, target) -> tuple:
    """The unique g in A_{n+1-p} with conn g = target and g orthogonal to harmonic classes."""
    f = m.fiber
    q = f.n + 1 - p
    A = f.conn.block(p)
    hs = m.harmonic.get(q, [])
    rows = list(A.rows)
    rhs = list(target)
    if hs:
        N = basis_matrix(hs, f.A_high.dim(q)).T @ f.pair_block(q)
        rows += list(N.rows)
        rhs += [0] * N.nrows
    sol = solve(RatMatrix(rows, f.low_dim(p)), rhs)
    if sol is None:
        raise HypothesisViolation("curvature correction has no normalized solution")
    g, ker = sol
    if ker:
        raise NonUniqueSolution(f"normalized correction is not unique (kernel dimension {len(ker)})")
    return g


def _lift_with(m: LocalModel, z: CycleClass, g) -> CycleClass:
    corr = m.i_star.block(z.p) @ g
    return CycleClass(z.p, tuple(a + b for a, b in zip(z.coords, corr)))


def arakelov_correction(m: LocalModel, z: CycleClass) -> tuple:
    """The vertical correction g in A_{n+1-p} with z + i_*(g) admissible."""
    phi = _phi_component(m, z.p, m.curvature(z))
    return _normalized_solve(m, z.p, tuple(-x for x in phi))


def arakelov_lift(m: LocalModel, z_zar: CycleClass) -> CycleClass:
    """z + i_*(g): admissible, with g orthogonal to the harmonic classes of complementary degree."""
    if not m.fiber.low_dim(z_zar.p):
        return z_zar
    return _lift_with(m, z_zar, arakelov_correction(m, z_zar))


def arakelov_lift_by_solve(m: LocalModel, z: CycleClass):
    """Oracle: unknowns (g, t) with omega(z) + conn g = sum t_k h_k and g normalized.

    Returns (lift or None, nullity in g).
    """
    f = m.fiber
    p = z.p
    q = f.n + 1 - p
    d = f.A_high.dim(p)
    k = f.low_dim(p)
    hs = m.harmonic.get(p, [])
    top = f.conn.block(p).hstack(-basis_matrix(hs, d)) if hs else f.conn.block(p)
    rows = list(top.rows)
    rhs = [-x for x in m.curvature(z)]
    hq = m.harmonic.get(q, [])
    if hq:
        N = basis_matrix(hq, f.A_high.dim(q)).T @ f.pair_block(q)
        for r in N.rows:
            rows.append(tuple(r) + (0,) * len(hs))
            rhs.append(0)
    sol = solve(RatMatrix(rows, k + len(hs)), rhs)
    if sol is None:
        return None, None
    part, ker = sol
    null = len(canonical_basis([v[:k] for v in ker], k)) if ker else 0
    return _lift_with(m, z, part[:k]), null


def local_height(m: LocalModel, z: CycleClass, w_zar: CycleClass) -> Fraction:
    """(z, w)_Ara = z^Ara . w^zar, checked against w^Ara . z^zar."""
    n = m.fiber.n
    if z.p + w_zar.p != n + 1:
        raise ContractError("local height needs complementary degrees")
    za = arakelov_lift(m, z)
    wa = arakelov_lift(m, w_zar)
    a = m.zpair.value(z.p, za.coords, w_zar.coords)
    b = m.zpair.value(w_zar.p, wa.coords, z.coords)
    if a != b:
        raise HypothesisViolation(f"local height is not symmetric ({a} vs {b})")
    return a


def bb_lift(m: LocalModel, z_zar: CycleClass) -> CycleClass:
    """The lift with curvature zero; requires a vanishing harmonic curvature component."""
    w = m.curvature(z_zar)
    f = m.fiber
    phi = canonical_basis(image(f.conn.block(z_zar.p)), f.A_high.dim(z_zar.p)) \
        if f.low_dim(z_zar.p) else []
    if any(w) and not in_span(w, phi):
        raise NotHomologicallyTrivial("curvature has a nonzero harmonic component")
    if not any(w):
        return z_zar
    g = _normalized_solve(m, z_zar.p, tuple(-x for x in w))
    return _lift_with(m, z_zar, g)
