"""Global Arakelov-Chow data: the 3-step filtration B c Ch^0 c Ch, its canonical
splitting, L-liftings and L-pairings, the comparison of the Gillet-Soule and
Beilinson conditions, and the divisor / 0-cycle slices.

Coordinates.  ``Chbar`` is graded by codimension 0..n+1 where n is the
relative dimension, so the Lefschetz module has center (n+1)/2 and the
intersection pairing has total n+1.  ``gen_proj`` presents the restriction
to the generic fiber Ch^*(X_K); its kernel is B.  ``cls`` presents the cycle
class map Ch^*(X_K) -> A^*(X_K); the kernel of cls o gen_proj is F1.
``eps_op`` is intersection with the class X_eps of a degree one arithmetic
divisor of the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractError, HypothesisViolation, IndexViolation, NonUniqueSolution
from .graded import GradedMap, GradedSpace
from .lefschetz import LefschetzModule, check_hard_lefschetz, lambda_operator
from .pairing import (
    GradedPairing,
    _hodge_holds,
    _induced_eps,
    check_adjoint,
    check_orthogonality,
    block_form_check,
    induced_graded_pairings,
)
from .ratlinalg import (
    RatMatrix,
    basis_matrix,
    canonical_basis,
    complement,
    contains,
    image,
    in_span,
    intersection,
    is_invertible,
    kernel,
    rank,
    same_subspace,
    signature,
    solve,
    subspace_sum,
)
from .splitting import (
    ExactSequence,
    FilteredLefschetzModule,
    ThreeStepSplitting,
    three_step_split,
    two_step_lift,
    verify_block_form,
)


def _as_map(obj, source, target, shift):
    if isinstance(obj, GradedMap):
        return obj
    return GradedMap(source, target, shift, {int(k): v for k, v in (obj or {}).items()})


def _induced_operator(P: GradedMap, L: GradedMap, space: GradedSpace) -> GradedMap:
    """The operator L' on the target of a surjection P with L' P = P L."""
    blocks = {}
    for i in space.degrees:
        if not space.dim(i + 1):
            continue
        X = _solve_right(P.block(i), P.block(i + 1) @ L.block(i))
        if X is None:
            raise ContractError(f"L does not descend along the projection in degree {i}")
        blocks[i] = X
    return GradedMap(space, space, 1, blocks)


def _solve_right(P: RatMatrix, B: RatMatrix):
    """X with X P = B (P surjective)."""
    from .ratlinalg import solve_matrix
    Xt = solve_matrix(P.T, B.T)
    if Xt is None:
        return None
    X = Xt.T
    if X @ P != B:
        return None
    return X


class ArakelovData:
    """Finite-dimensional model of the Arakelov Chow group of X over the base."""

    def __init__(self, n: int, dims, L, pair, F1, B, eps_class, eps_op,
                 generic_dims, gen_proj, class_dims, cls, places=()):
        self.n = n = int(n)
        self.Chbar = sp = GradedSpace({int(k): v for k, v in dims.items()})
        self.L = _as_map(L, sp, sp, 1)
        self.V = LefschetzModule(sp, self.L, n + 1)
        self.pair = pair if isinstance(pair, GradedPairing) else GradedPairing(sp, n + 1, pair)
        if self.pair.total != n + 1 or self.pair.space != sp:
            raise ContractError("pairing must have total n+1 on Chbar")
        if not self.pair.is_symmetric():
            raise ContractError("intersection pairing is not symmetric")
        if not check_adjoint(self.pair, self.L):
            raise ContractError("intersection pairing is not L-adjoint")
        self.eps_class = tuple(Fraction(x) for x in eps_class)
        self.eps_op = _as_map(eps_op, sp, sp, 1)
        self.generic = GradedSpace({int(k): v for k, v in generic_dims.items()})
        self.gen_proj = _as_map(gen_proj, sp, self.generic, 0)
        self.classes = GradedSpace({int(k): v for k, v in class_dims.items()})
        self.cls = _as_map(cls, self.generic, self.classes, 0)
        self.places = tuple(places)
        # filtration: centres of the graded pieces are checked here
        self.filtered = FilteredLefschetzModule(self.V, {int(k): v for k, v in F1.items()},
                                                {int(k): v for k, v in B.items()})
        check_orthogonality(self.filtered, self.pair)
        self._check_maps()

    @property
    def F1(self) -> dict:
        return self.filtered.F1

    @property
    def B(self) -> dict:
        return self.filtered.F2

    def _check_maps(self):
        sp = self.Chbar
        F = self.filtered
        for i in sp.degrees:
            g = self.gen_proj.block(i)
            if rank(g) != self.generic.dim(i):
                raise ContractError(f"restriction to the generic fiber is not surjective in degree {i}")
            if not same_subspace(kernel(g), F.F2[i], sp.dim(i)):
                raise ContractError(f"kernel of the restriction is not B in degree {i}")
            cg = self.cls.block(i) @ g
            if rank(cg) != self.classes.dim(i):
                raise ContractError(f"cycle class map is not surjective in degree {i}")
            if not same_subspace(kernel(cg), F.F1[i], sp.dim(i)):
                raise ContractError(f"kernel of the cycle class map is not F1 in degree {i}")
        self.L_K = _induced_operator(self.gen_proj, self.L, self.generic)
        self.L_A = _induced_operator(self.cls, self.L_K, self.classes)
        E = self.eps_op
        if len(self.eps_class) != sp.dim(1):
            raise ContractError("eps_class must be a vector of Chbar^1")
        if not in_span(self.eps_class, F.F2.get(1, [])) and any(self.eps_class):
            raise ContractError("eps_class does not lie in B^1")
        if not (E @ self.L == self.L @ E):
            raise ContractError("eps does not commute with L")
        for i in sp.degrees:
            if F.F1[i] and not (E.block(i) @ basis_matrix(F.F1[i], sp.dim(i))).is_zero():
                raise ContractError(f"eps does not kill F1 in degree {i}")
            img = image(E.block(i))
            if img and not contains(F.F2.get(i + 1, []), img, sp.dim(i + 1)):
                raise ContractError(f"eps does not land in B in degree {i}")
        if sp.dim(0) == 1 and tuple(E.block(0).column(0)) != self.eps_class:
            raise ContractError("eps applied to [X] differs from eps_class")

    def twisted(self, c) -> "ArakelovData":
        """Same data with the polarization L + c X_eps."""
        return ArakelovData(self.n, self.Chbar.dims, self.L + self.eps_op.scaled(Fraction(c)),
                            self.pair, self.F1, self.B, self.eps_class, self.eps_op,
                            self.generic.dims, self.gen_proj, self.classes.dims, self.cls,
                            self.places)

    def fundamental_class(self) -> tuple:
        if self.Chbar.dim(0) != 1:
            raise ContractError("fundamental class needs dim Chbar^0 = 1")
        return (Fraction(1),)


def height_of_generic_fiber(d: ArakelovData) -> Fraction:
    """h_L(X_K) = c1(L)^{n+1} / ((n+1) deg c1(L_K)^n)."""
    n = d.n
    X = d.fundamental_class()
    top = d.pair.value(0, X, d.V.Lpow(0, n + 1) @ X)
    deg = d.pair.value(1, d.eps_class, d.V.Lpow(0, n) @ X)
    if deg == 0:
        raise HypothesisViolation("deg c1(L_K)^n = 0; the height is undefined")
    return top / ((n + 1) * deg)


@dataclass(frozen=True)
class GlobalSplitting:
    data: ArakelovData
    splitting: ThreeStepSplitting
    h_L: Fraction | None
    L0: GradedMap | None

    @property
    def filtered(self) -> FilteredLefschetzModule:
        return self.data.filtered

    def beta_XK(self) -> tuple:
        """beta([X_K]) as a vector of Chbar^1."""
        S = self.splitting
        b = S.beta.block(0) @ (Fraction(1),)
        return S.alpha2.block(1) @ b


def decompose(d: ArakelovData) -> GlobalSplitting:
    """Canonical splitting of the filtration, with h_L and L0 when dim Chbar^0 = 1."""
    F = d.filtered
    S = three_step_split(F)
    if not verify_block_form(F, S):
        raise HypothesisViolation("splitting does not have the expected block form")
    if not block_form_check(F, d.pair, S):
        raise HypothesisViolation("pairing does not have the expected block form")
    h, L0 = None, None
    if d.Chbar.dim(0) == 1 and F.d0.get(0, 0) == 1:
        n = d.n
        X = d.fundamental_class()
        if S.alpha0.block(0) @ (Fraction(1),) != X:
            raise HypothesisViolation("alpha0([X_K]) != [X]")
        bx = S.alpha2.block(1) @ (S.beta.block(0) @ (Fraction(1),))
        h = _ratio(bx, d.eps_class)
        if h is None:
            raise HypothesisViolation("beta([X_K]) is not a multiple of X_eps")
        if h != height_of_generic_fiber(d):
            raise HypothesisViolation("beta([X_K]) disagrees with the height formula")
        L0 = d.L - d.eps_op.scaled(h)
        v = (Fraction(1),)
        for i in range(1, n + 1):
            v = F.G0.L.block(i - 1) @ v if F.G0.dim(i) else ()
            want = L0.power_block(0, i) @ X
            got = S.alpha0.block(i) @ v if v else tuple(Fraction(0) for _ in range(d.Chbar.dim(i)))
            if got != want:
                raise HypothesisViolation(f"alpha0(L^{i}[X_K]) != c1(L0)^{i}")
        if d.pair.value(0, X, L0.power_block(0, n + 1) @ X) != 0:
            raise HypothesisViolation("c1(L0)^{n+1} != 0")
    return GlobalSplitting(d, S, h, L0)


def _ratio(v, w):
    """t with v = t w, or None."""
    t = None
    for a, b in zip(v, w):
        if b == 0:
            if a != 0:
                return None
            continue
        r = Fraction(a) / b
        if t is None:
            t = r
        elif r != t:
            return None
    return t if t is not None else (Fraction(0) if not any(v) else None)


# ---------------------------------------------------------------------------
# L-liftings


def _generic_split(d: ArakelovData):
    """Sequence 0 -> Ch^0(X_K) -> Ch(X_K) -> A(X_K) -> 0 and its L-linear section."""
    cached = getattr(d, "_generic_split", None)
    if cached is not None:
        return cached
    K, A = d.generic, d.classes
    ker = {i: kernel(d.cls.block(i)) for i in K.degrees}
    U_dims = {i: len(ker[i]) for i in K.degrees}
    incl = {i: basis_matrix(ker[i], K.dim(i)) for i in K.degrees if ker[i]}
    Ublocks = {}
    for i in K.degrees:
        if U_dims[i] and U_dims.get(i + 1, 0):
            X = solve_or_fail(incl[i + 1], d.L_K.block(i) @ incl[i])
            Ublocks[i] = X
    U = LefschetzModule.from_blocks(U_dims, Ublocks, d.n + 1)
    VK = LefschetzModule(K, d.L_K, d.n + 1)
    W = LefschetzModule(A, d.L_A, d.n)
    eps = GradedMap(U.space, K, 0, incl)
    seq = ExactSequence(U, VK, W, eps, d.cls)
    d._generic_split = seq, two_step_lift(seq)
    return d._generic_split


def solve_or_fail(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    from .ratlinalg import solve_matrix
    X = solve_matrix(A, B)
    if X is None:
        raise ContractError("subspace is not L-stable")
    return X


@dataclass(frozen=True)
class LLift:
    """z^L together with its components: y0 in G0, y1 in G1 coordinates."""

    value: tuple
    y0: tuple
    y1: tuple
    z_cl: tuple
    z0: tuple


def l_lift_full(d: ArakelovData, S: GlobalSplitting, p: int, z) -> LLift:
    z = tuple(Fraction(x) for x in z)
    if len(z) != d.generic.dim(p):
        raise ContractError(f"class in Ch^{p}(X_K) needs {d.generic.dim(p)} coordinates")
    seq, sigma = _generic_split(d)
    z_cl = d.cls.block(p) @ z if d.classes.dim(p) else ()
    lifted = sigma.block(p) @ z_cl if z_cl else tuple(Fraction(0) for _ in z)
    z0 = tuple(a - b for a, b in zip(z, lifted))
    sp = S.splitting
    F = d.filtered
    dim = d.Chbar.dim(p)
    y0 = ()
    if F.d0.get(p, 0):
        CG = d.cls.block(p) @ d.gen_proj.block(p) @ sp.alpha0.block(p)
        sol = solve(CG, z_cl)
        if sol is None or sol[1]:
            raise HypothesisViolation("G0 is not identified with A(X_K)")
        y0 = sol[0]
    y1 = ()
    if F.d1.get(p, 0):
        GA = d.gen_proj.block(p) @ sp.alpha1.block(p)
        sol = solve(GA, z0)
        if sol is None or sol[1]:
            raise HypothesisViolation("G1 is not identified with Ch^0(X_K)")
        y1 = sol[0]
    elif any(z0):
        raise HypothesisViolation("homologically trivial component without a G1 part")
    v = [Fraction(0)] * dim
    if y0:
        v = [a + b for a, b in zip(v, sp.alpha0.block(p) @ y0)]
    if y1:
        v = [a + b for a, b in zip(v, sp.alpha1.block(p) @ y1)]
    v = tuple(v)
    if d.gen_proj.block(p) @ v != z:
        raise HypothesisViolation("L-lifting does not restrict to the given class")
    return LLift(v, tuple(y0), tuple(y1), tuple(z_cl), z0)


def l_lift(d: ArakelovData, S: GlobalSplitting, p: int, z) -> tuple:
    """The L-lifting z^L in Chbar^p of z in Ch^p(X_K)."""
    return l_lift_full(d, S, p, z).value


@dataclass(frozen=True)
class LPairing:
    value: Fraction
    bb_value: Fraction

    @property
    def agree(self) -> bool:
        return self.value == self.bb_value


def _induced(d: ArakelovData, S: GlobalSplitting):
    hit = getattr(d, "_induced_cache", None)
    if hit is None or hit[0] is not S.splitting:
        d._induced_cache = S.splitting, induced_graded_pairings(d.filtered, d.pair, S.splitting)
    return d._induced_cache[1]


def l_pairing_report(d: ArakelovData, S: GlobalSplitting, p: int, z1, z2) -> LPairing:
    q = d.n + 1 - p
    a = l_lift_full(d, S, p, z1)
    b = l_lift_full(d, S, q, z2)
    lhs = d.pair.value(p, a.value, b.value)
    ind = _induced(d, S)
    rhs = ind.p11.value(p, a.y1, b.y1) if a.y1 and b.y1 else Fraction(0)
    return LPairing(lhs, rhs)


def l_pairing(d: ArakelovData, S: GlobalSplitting, p: int, z1, z2) -> Fraction:
    """deg(z1^L . z2^L), checked against the height pairing of the z^0 components."""
    r = l_pairing_report(d, S, p, z1, z2)
    if not r.agree:
        raise HypothesisViolation(f"L-pairing {r.value} differs from the height pairing {r.bb_value}")
    return r.value


# ---------------------------------------------------------------------------
# Gillet-Soule versus Beilinson


@dataclass(frozen=True)
class GsBbReport:
    gs: bool
    beilinson: bool
    adm_standard: bool
    internals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from .serialize import basis_to_json
        out = {"gs": self.gs, "beilinson": self.beilinson, "adm_standard": self.adm_standard}
        out["internals"] = {k: (basis_to_json(v) if isinstance(v, dict) else v)
                            for k, v in self.internals.items()}
        return out


def _perp(pair: GradedPairing, sub: dict, space: GradedSpace) -> dict:
    t = pair.total
    out = {}
    for i in space.degrees:
        s = sub.get(t - i, [])
        if s:
            out[i] = kernel((pair.block(i) @ basis_matrix(s, space.dim(t - i))).T)
        else:
            out[i] = [tuple(Fraction(int(r == c)) for r in range(space.dim(i)))
                      for c in range(space.dim(i))]
    return out


def gs_beilinson_equivalence(d: ArakelovData) -> GsBbReport:
    """Standard conjecture verdicts on Chbar, on G1 and on A(X_K), with the auxiliary spaces."""
    F = d.filtered
    S = three_step_split(F)
    ind = induced_graded_pairings(F, d.pair, S)
    for i, m in ind.m02.items():
        if m.nrows != m.ncols or (m.nrows and not is_invertible(m)):
            raise HypothesisViolation(f"pairing B x A is not perfect in degree {i}")
    gs = _hodge_holds(d.V, d.pair)
    beil = _hodge_holds(F.G1, ind.p11)
    ebar = _induced_eps(F, d.eps_op)
    t = d.pair.total
    pa = GradedPairing(F.G0.space, t - 1, {
        i: ind.m02[i] @ ebar[t - 1 - i] for i in F.G0.degrees if F.G0.dim(t - 1 - i)})
    adm = pa.is_symmetric() and _hodge_holds(F.G0, pa)
    sp = d.Chbar
    internals = {}
    internals["B_prime"] = {i: canonical_basis(image(d.eps_op.block(i - 1)), sp.dim(i))
                            if sp.dim(i - 1) else [] for i in sp.degrees}
    internals["B_dprime"] = {i: canonical_basis(v, sp.dim(i))
                             for i, v in _perp(d.pair, F.F1, sp).items()}
    if check_hard_lefschetz(d.V).holds:
        Lam = lambda_operator(d.V)
        C = {}
        for i in sp.degrees:
            lb = [Lam.block(i + 1) @ v for v in F.F2.get(i + 1, [])] if sp.dim(i + 1) else []
            C[i] = subspace_sum(F.F2[i], lb, sp.dim(i))
        D = {i: canonical_basis(v, sp.dim(i)) for i, v in _perp(d.pair, C, sp).items()}
        internals["C"] = C
        internals["D"] = D
        internals["D_is_alpha1"] = all(
            same_subspace(D[i], S.alpha1.block(i).columns() if F.d1[i] else [], sp.dim(i))
            for i in sp.degrees)
    else:
        internals["C"] = None
        internals["D"] = None
        internals["D_is_alpha1"] = None
    return GsBbReport(gs, beil, adm, internals)


# ---------------------------------------------------------------------------
# divisors and 0-cycles


class DivisorSlice:
    """Data in codimension 1 and n only.

    pair: Gram matrix on Chbar^1 x Chbar^n.  Lpow: L^{n-1}: Chbar^1 -> Chbar^n.
    H: c1(L) in Chbar^1.  E: X_eps in B^1.  gen1, genn: restrictions to the
    generic fiber (kernels B^1, B^n).  cls1: Ch^1(X_K) -> NS(X_K).  Hn is
    c1(L)^n in Chbar^n.  places: local fiber data for the index check.
    """

    def __init__(self, n, pair, Lpow, H, Hn, E, gen1, genn, cls1, places=()):
        self.n = int(n)
        self.pair = pair if isinstance(pair, RatMatrix) else RatMatrix(pair)
        d1, dn = self.pair.shape
        self.Lpow = Lpow if isinstance(Lpow, RatMatrix) else RatMatrix(Lpow, d1)
        if self.Lpow.shape != (dn, d1):
            raise ContractError("L^{n-1} must map Chbar^1 to Chbar^n")
        self.H = tuple(Fraction(x) for x in H)
        self.Hn = tuple(Fraction(x) for x in Hn)
        self.E = tuple(Fraction(x) for x in E)
        self.gen1 = gen1 if isinstance(gen1, RatMatrix) else RatMatrix(gen1, d1)
        self.genn = genn if isinstance(genn, RatMatrix) else RatMatrix(genn, dn)
        self.cls1 = cls1 if isinstance(cls1, RatMatrix) else RatMatrix(cls1, self.gen1.nrows)
        self.places = tuple(places)
        self.B1 = kernel(self.gen1)
        self.Bn = kernel(self.genn)
        self.F1 = kernel(self.cls1 @ self.gen1)
        if self.Lpow @ self.H != self.Hn:
            raise ContractError("Hn must equal L^{n-1} H")
        if not in_span(self.E, self.B1):
            raise ContractError("X_eps must lie in B^1")

    @classmethod
    def from_data(cls, d: ArakelovData) -> "DivisorSlice":
        n = d.n
        X = d.fundamental_class()
        H = d.L.block(0) @ X
        Lpow = d.V.Lpow(1, n - 1)
        return cls(n, d.pair.block(1), Lpow, H, Lpow @ H, d.eps_class,
                   d.gen_proj.block(1), d.gen_proj.block(n), d.cls.block(1), d.places)

    def dot(self, x, y) -> Fraction:
        return sum((a * b for a, b in zip(x, self.pair @ y)), Fraction(0))

    @property
    def h(self) -> Fraction:
        deg = self.dot(self.E, self.Hn)
        if deg == 0:
            raise HypothesisViolation("deg c1(L_K)^n = 0")
        return self.dot(self.H, self.Hn) / ((self.n + 1) * deg)

    @property
    def L0n(self) -> tuple:
        """c1(L0)^n = c1(L)^n - n h L^{n-1} X_eps in Chbar^n."""
        le = self.Lpow @ self.E
        return tuple(a - self.n * self.h * b for a, b in zip(self.Hn, le))


def global_index_check(s: DivisorSlice) -> tuple:
    """Signature of (x, L^{n-1} x) on {x : deg c1(L)^n x = 0}; raises unless negative definite."""
    Q = s.pair @ s.Lpow
    if not Q.is_symmetric():
        raise ContractError("(x, L^{n-1} y) is not symmetric")
    K = kernel(RatMatrix([list(s.pair @ s.Hn)]))
    if not K:
        return (0, 0, 0)
    Bm = basis_matrix(K, s.pair.nrows)
    sig = signature(Bm.T @ Q @ Bm)
    if sig != (0, len(K), 0):
        raise IndexViolation(f"(x, L^(n-1) x) is not negative definite on L^n-null classes: {sig}")
    return sig


def local_index_check(fiber, fiber_class=None) -> bool:
    """(x, L^{n-1} x) <= 0 on vertical classes with kernel exactly the fiber class.

    ``fiber`` is either a SpecialFiberData (the form is computed from
    i^*i_*, L and the pairing; the fiber class is the image of 1 under cap)
    or a symmetric matrix, in which case ``fiber_class`` must be given.
    """
    from .local import SpecialFiberData
    if isinstance(fiber, SpecialFiberData):
        f = fiber
        n = f.n
        C = f.conn.block(1)
        Lp = f.L_high.power_block(1, n - 1)
        Q = (Lp @ C).T @ f.pair_block(n)
        if fiber_class is None:
            if f.A_high.dim(0) != 1:
                raise ContractError("fiber class needs dim A^0 = 1")
            fiber_class = f.cap.block(0).column(0)
    else:
        Q = fiber if isinstance(fiber, RatMatrix) else RatMatrix(fiber)
        if fiber_class is None:
            raise ContractError("fiber class required with a bare form")
    if not Q.is_symmetric():
        return False
    plus, minus, zero = signature(Q)
    if plus:
        return False
    return same_subspace(kernel(Q), [tuple(fiber_class)], Q.nrows)


@dataclass(frozen=True)
class DivisorSplitting:
    slice: DivisorSlice
    alpha0: RatMatrix     # NS(X_K) -> Chbar^1
    alpha1: RatMatrix     # Pic^0(X_K) -> Chbar^1, basis of Ker(cls1)
    alpha2: RatMatrix     # B^1 -> Chbar^1
    pic0_basis: list
    h: Fraction
    index_signature: tuple


def _unique_x(rows, rhs, nx: int, what: str):
    sol = solve(RatMatrix(rows, max(len(r) for r in rows) if rows else nx), rhs)
    if sol is None:
        raise HypothesisViolation(f"{what}: no solution")
    part, ker = sol
    if any(any(v[:nx]) for v in ker):
        raise NonUniqueSolution(f"{what}: solution is not unique")
    return part[:nx]


def divisor_decomposition(s: DivisorSlice) -> DivisorSplitting:
    """Splitting of Chbar^1 normalized by deg c1(L)^n alpha1 = 0 and c1(L0)^n alpha0 = 0."""
    if s.places:
        for f in s.places:
            if not local_index_check(f):
                raise IndexViolation("local index theorem fails at a place")
    sig = global_index_check(s)
    d1, dn = s.pair.shape
    h = s.h
    L0n = s.L0n
    CG = s.cls1 @ s.gen1
    nA = CG.nrows
    # alpha0: unknowns x (d1), t (1), b (dim Bn)
    cols0 = []
    Bn = s.Bn
    for e in range(nA):
        target = tuple(Fraction(int(r == e)) for r in range(nA))
        rows, rhs = [], []
        # Lpow x - t Hn - Bn b = 0
        for r in range(dn):
            row = list(s.Lpow.rows[r]) + [-s.Hn[r]] + [-v[r] for v in Bn]
            rows.append(row)
            rhs.append(0)
        for r in range(nA):
            rows.append(list(CG.rows[r]) + [0] * (1 + len(Bn)))
            rhs.append(target[r])
        rows.append(list(s.pair @ L0n) + [0] * (1 + len(Bn)))
        rhs.append(0)
        cols0.append(_unique_x(rows, rhs, d1, "alpha0"))
    alpha0 = basis_matrix(cols0, d1)
    # alpha1 on Pic^0 = Ker(cls1)
    pic0 = kernel(s.cls1)
    cols1 = []
    for xi in pic0:
        rows = [list(r) for r in s.gen1.rows] + [list(s.pair @ s.Hn)]
        rhs = list(xi) + [0]
        cols1.append(_unique_x(rows, rhs, d1, "alpha1"))
    alpha1 = basis_matrix(cols1, d1)
    alpha2 = basis_matrix(s.B1, d1)
    full = alpha0.hstack(alpha1).hstack(alpha2)
    if full.shape != (d1, d1) or not is_invertible(full):
        raise HypothesisViolation("alpha0 + alpha1 + alpha2 is not an isomorphism")
    return DivisorSplitting(s, alpha0, alpha1, alpha2, pic0, h, sig)


def divisor_l_lift(s: DivisorSlice, m) -> tuple:
    """M^L: the extension of M with deg c1(L0)^n c1(M^L) = 0."""
    d1 = s.pair.nrows
    rows = [list(r) for r in s.gen1.rows] + [list(s.pair @ s.L0n)]
    rhs = [Fraction(x) for x in m] + [0]
    x = _unique_x(rows, rhs, d1, "divisor L-lifting")
    return tuple(x)


@dataclass(frozen=True)
class ZeroCycleSplitting:
    slice: DivisorSlice
    C1: list
    Cn: list
    BC: list                 # B^n intersect C^n
    quotient_basis: list     # echelon complement of BC; quotient coordinates refer to it
    l_injective: bool
    direct_sum: bool         # Chbar^n = C^n + L^{n-1} Chbar^1
    alpha0_top: tuple        # c1(L0)^n

    def to_quotient(self, y) -> tuple:
        d = self.slice.pair.ncols
        M = basis_matrix(self.quotient_basis + self.BC, d)
        from .ratlinalg import inverse
        c = inverse(M) @ tuple(y)
        return tuple(c[:len(self.quotient_basis)])


def zero_cycle_decomposition(s: DivisorSlice) -> ZeroCycleSplitting:
    """C^n, the quotient by B^n intersect C^n, and the injectivity of L^{n-1}."""
    d1, dn = s.pair.shape
    Cn = kernel(s.pair)
    C1 = kernel(s.pair.T)
    BC = intersection(s.Bn, Cn, dn) if Cn and s.Bn else []
    Q = complement(BC, dn)
    inj = rank(s.Lpow) == d1
    img = image(s.Lpow)
    ds = inj and len(Cn) + len(img) == dn and rank(basis_matrix(Cn + img, dn)) == dn
    return ZeroCycleSplitting(s, C1, Cn, BC, Q, inj, ds, s.L0n)


def zero_cycle_l_lift(s: DivisorSlice, xi) -> tuple:
    """xi^L: lift of xi in Ch^n(X_K) with deg alpha0(x) xi^L = 0 for x in NS(X_K).

    Unique modulo B^n intersect C^n; the representative returned is
    dot-orthogonal (in coordinates) to that intersection.
    """
    D = divisor_decomposition(s)
    d1, dn = s.pair.shape
    Z = zero_cycle_decomposition(s)
    rows = [list(r) for r in s.genn.rows]
    rhs = [Fraction(x) for x in xi]
    A0 = D.alpha0
    for c in range(A0.ncols):
        a = A0.column(c)
        rows.append([sum((a[k] * s.pair[k, j] for k in range(d1)), Fraction(0)) for j in range(dn)])
        rhs.append(0)
    # kill the ambiguity: coordinate-orthogonal to BC
    for v in Z.BC:
        rows.append(list(v))
        rhs.append(0)
    sol = solve(RatMatrix(rows, dn), rhs)
    if sol is None:
        raise HypothesisViolation("0-cycle L-lifting does not exist")
    y, ker = sol
    if ker:
        raise NonUniqueSolution("0-cycle L-lifting is not unique modulo B^n and C^n")
    return tuple(y)
