from fractions import Fraction as F

import pytest

from lefkit.errors import ContractError, HardLefschetzFailure, NotHomologicallyTrivial
from lefkit.local import (
    SpecialFiberData,
    arakelov_correction,
    arakelov_lift,
    arakelov_lift_by_solve,
    bb_lift,
    conjecture_report,
    harmonic_split,
    is_admissible,
    local_height,
    vanishing_nearby,
)
from lefkit.models import (
    ReductionGraph,
    chain3_graph,
    curve_fiber_data,
    reduction_graph_model,
)

M2 = [[-2, 2], [2, -2]]


# -- an oracle that knows nothing about the library: Laplacian pseudo-inverse


def _inv(A):
    n = len(A)
    M = [list(map(F, r)) + [F(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c])
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def pinv_connected(M):
    """M^+ = (M - J/r)^{-1} + J/r for a connected fiber (kernel = constants)."""
    r = len(M)
    A = [[F(M[i][j]) - F(1, r) for j in range(r)] for i in range(r)]
    B = _inv(A)
    return [[B[i][j] + F(1, r) for j in range(r)] for i in range(r)]


def height_oracle(M, degs, zc, wc, zw=0):
    """z meets component zc, w meets component wc, horizontal parts meeting zw."""
    r = len(M)
    tot = sum(degs)
    Mp = pinv_connected(M)
    om = [F(int(a == zc)) for a in range(r)]
    # phi-part: remove the harmonic component along the degrees (L^1 of [X])
    t = sum(om) / tot
    phi = [om[a] - t * degs[a] for a in range(r)]
    # the normalized g solves M g = -phi with g orthogonal to the harmonic degree-0 class
    g = [-sum(Mp[a][b] * phi[b] for b in range(r)) for a in range(r)]
    return F(zw) + g[wc]


def test_vanishing_nearby_cyc2(cyc2):
    f, _ = cyc2
    vn = vanishing_nearby(f)
    assert vn.A_phi[1] == [(1, -1)]
    assert len(vn.A_psi[1]) == 1
    assert vn.psi_low[1] == [(1, 1)]


def test_vanishing_nearby_smooth():
    f = curve_fiber_data([[0]], (2,))
    vn = vanishing_nearby(f)
    assert not vn.A_phi.get(1)
    assert vn.A_psi[0] == [(1,)] and vn.A_psi[1] == [(1,)]


def test_conn_bijective_kills_psi():
    # n = 0: A^0 = A_1 = Q and A_0 = 0, so the pairing is empty
    f = SpecialFiberData(0, {0: 1}, {1: 1}, {0: [[1]]}, {}, {}, {}, {})
    vn = vanishing_nearby(f)
    assert not vn.A_psi.get(0)


def test_conjecture_report_cyc2(cyc2):
    assert conjecture_report(cyc2[0]).all_hold


def test_conjecture_report_smooth_p2():
    f = SpecialFiberData(2, {0: 1, 1: 1, 2: 1}, {0: 1, 1: 1, 2: 1}, {},
                         {0: [[1]], 1: [[1]]}, {2: [[1]], 1: [[1]]},
                         {0: [[1]], 1: [[1]], 2: [[1]]}, {0: [[1]], 1: [[1]], 2: [[1]]})
    r = conjecture_report(f)
    assert r.nd and r.lef_psi and r.hod_psi


def test_non_self_adjoint_rejected():
    with pytest.raises(ContractError):
        SpecialFiberData(1, {0: 1, 1: 2}, {1: 2, 0: 1}, {1: [[-2, 1], [2, -1]]},
                         {0: [[1], [1]]}, {1: [[1, 1]]}, {0: [[1]], 1: [[1, 0], [0, 1]]},
                         {0: [[1], [1]], 1: [[1, 1]]})


def test_harmonic_cyc2(cyc2):
    h = harmonic_split(cyc2[0])
    assert h == {0: [(1,)], 1: [(1, 1)]}


def test_harmonic_smooth():
    f = curve_fiber_data([[0]], (3,))
    assert harmonic_split(f) == {0: [(1,)], 1: [(1,)]}


def test_harmonic_needs_ample_degrees():
    f = curve_fiber_data(M2, (1, -1))
    assert not conjecture_report(f).lef_psi
    with pytest.raises(HardLefschetzFailure):
        harmonic_split(f)


def test_is_admissible(cyc2):
    _, m = cyc2
    # omega = (1/2, 1/2) via half a horizontal class on each component
    assert is_admissible(m, m.cycle(1, (F(1, 2), F(1, 2), 0, 0)))
    assert not is_admissible(m, m.cycle(1, (1, 0, 0, 0)))
    assert is_admissible(m, m.cycle(1, (0, 0, 0, 0)))


def test_arakelov_lift_comp1(cyc2):
    _, m = cyc2
    z = m.cycle(1, (1, 0, 0, 0))
    assert arakelov_correction(m, z) == (F(1, 8), F(-1, 8))
    za = arakelov_lift(m, z)
    assert m.curvature(za) == (F(1, 2), F(1, 2))
    orc, nullity = arakelov_lift_by_solve(m, z)
    assert nullity == 0 and orc == za


def test_arakelov_lift_smooth():
    _, m = reduction_graph_model(ReductionGraph([[0]], (1,)))
    z = m.cycle(1, (1, 0))
    assert arakelov_lift(m, z) == z


def test_arakelov_lift_vertical(cyc2):
    _, m = cyc2
    # a vertical component: the lift replaces it by the normalized representative
    za = arakelov_lift(m, m.cycle(1, (0, 0, 1, 0)))
    assert za.coords == (0, 0, F(1, 2), F(1, 2))


def test_local_heights_match_pseudo_inverse_oracle(cyc2):
    _, m = cyc2
    z1 = m.cycle(1, (1, 0, 0, 0))
    w2 = m.cycle(1, (0, 1, 0, 0))
    assert local_height(m, z1, w2) == F(-1, 8) == height_oracle(M2, (1, 1), 0, 1)
    assert local_height(m, z1, z1) == F(1, 8) == height_oracle(M2, (1, 1), 0, 0)


def test_local_height_chain3_against_oracle():
    g = chain3_graph()
    _, m = reduction_graph_model(g)
    rows = [list(r) for r in g.M.rows]
    for a in range(3):
        for b in range(3):
            za = m.cycle(1, tuple(int(k == a) for k in range(6)))
            wb = m.cycle(1, tuple(int(k == b) for k in range(6)))
            assert local_height(m, za, wb) == height_oracle(rows, (1, 1, 1), a, b)


def test_local_height_smooth_unchanged():
    _, m = reduction_graph_model(ReductionGraph([[0]], (1,)), horizontal=[0, 0],
                                 horizontal_pairs={(0, 1): 0})
    z, w = m.cycle(1, (1, 0, 0)), m.cycle(1, (0, 1, 0))
    assert local_height(m, z, w) == 0


def test_bb_lift(cyc2):
    _, m = cyc2
    zb = bb_lift(m, m.cycle(1, (1, -1, 0, 0)))
    assert m.curvature(zb) == (0, 0)
    assert zb.coords == (1, -1, F(1, 4), F(-1, 4))
    zero = m.cycle(1, (0, 0, 0, 0))
    assert bb_lift(m, zero) == zero
    with pytest.raises(NotHomologicallyTrivial):
        bb_lift(m, m.cycle(1, (1, 0, 0, 0)))


def test_bb_lift_orthogonal_to_vertical(cyc2):
    _, m = cyc2
    zb = bb_lift(m, m.cycle(1, (1, -1, 0, 0)))
    for v in ((0, 0, 1, 0), (0, 0, 0, 1)):
        assert m.zpair.value(1, zb.coords, v) == 0


def test_phi_psi_exactness_on_chain3():
    f, _ = reduction_graph_model(chain3_graph())
    vn = vanishing_nearby(f)
    for p in f.A_high.degrees:
        assert len(vn.A_phi.get(p, [])) + len(vn.A_psi.get(p, [])) == f.A_high.dim(p)
    assert len(vn.A_phi[1]) == 2
