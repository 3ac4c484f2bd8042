from fractions import Fraction as F

import pytest

from lefkit.arakelov import (
    ArakelovData,
    DivisorSlice,
    decompose,
    divisor_decomposition,
    divisor_l_lift,
    global_index_check,
    gs_beilinson_equivalence,
    height_of_generic_fiber,
    l_lift,
    l_pairing,
    l_pairing_report,
    local_index_check,
    zero_cycle_decomposition,
    zero_cycle_l_lift,
)
from lefkit.errors import ContractError, HardLefschetzFailure, IndexViolation
from lefkit.models import arithmetic_surface_toy, curve_fiber_data, cyc2_graph
from lefkit.ratlinalg import RatMatrix

H, E, P = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def h_formula(Lsq, dK, n=1):
    """h_L = c1(L)^{n+1} / ((n+1) deg L_K)."""
    return F(Lsq) / ((n + 1) * F(dK))


def test_decompose_toy(toy):
    S = decompose(toy)
    assert S.h_L == F(3, 2) == h_formula(6, 2)
    assert S.beta_XK() == (0, F(3, 2), 0)
    L0 = S.L0
    assert L0.block(0) == RatMatrix([[1], [F(-3, 2)], [0]])
    # c1(L0)^2 = 6 - 2 * (3/2) * 2 = 0
    assert toy.pair.value(0, (1,), L0.power_block(0, 2) @ (1,)) == 0
    assert S.splitting.alpha0.block(1) == RatMatrix([[1], [F(-3, 2)], [0]])


def test_decompose_toy_without_pic0():
    d = arithmetic_surface_toy(2, 6, [])
    S = decompose(d)
    assert S.h_L == F(3, 2)
    assert d.filtered.G1.space.total == 0


def test_degenerate_toy_rejected():
    with pytest.raises(ContractError):
        arithmetic_surface_toy(0, 6, [[-1]])
    # hand-built dK = 0 data gets past the constructor but not decompose
    with pytest.raises(HardLefschetzFailure):
        d = ArakelovData(
            1, {0: 1, 1: 3, 2: 1}, {0: [[1], [0], [0]], 1: [[6, 0, 0]]},
            {0: [[1]], 1: [[6, 0, 0], [0, 0, 0], [0, 0, -1]], 2: [[1]]},
            {1: [(0, 1, 0), (0, 0, 1)], 2: [(1,)]}, {1: [(0, 1, 0)], 2: [(1,)]}, (0, 1, 0),
            {0: [[0], [1], [0]], 1: [[0, 0, 0]]}, {0: 1, 1: 2},
            {0: [[1]], 1: [[1, 0, 0], [0, 0, 1]]}, {0: 1, 1: 1}, {0: [[1]], 1: [[1, 0]]})
        decompose(d)


def test_zero_height_toy():
    d = arithmetic_surface_toy(1, 0, [])
    assert height_of_generic_fiber(d) == 0
    # L0 = L - 0 * eps = L; the full decomposition needs hard Lefschetz on Chbar
    with pytest.raises(HardLefschetzFailure):
        decompose(d)


def test_index_contract():
    with pytest.raises(IndexViolation):
        arithmetic_surface_toy(2, 6, [[1]])


def test_l_lift_toy(toy):
    S = decompose(toy)
    assert l_lift(toy, S, 1, (1, 0)) == (1, F(-3, 2), 0)
    assert l_lift(toy, S, 1, (0, 1)) == P
    assert l_lift(toy, S, 1, (0, 0)) == (0, 0, 0)
    # the Pic0 lift is perpendicular to Im alpha0
    assert toy.pair.value(1, P, (1, F(-3, 2), 0)) == 0


def test_l_pairing_toy(toy):
    S = decompose(toy)
    assert l_pairing(toy, S, 1, (0, 1), (0, 1)) == -1
    assert l_pairing(toy, S, 1, (1, 0), (0, 1)) == 0
    assert l_pairing(toy, S, 1, (0, 0), (1, 0)) == 0
    r = l_pairing_report(toy, S, 0, (1,), ())
    assert r.agree


def test_gs_beilinson_toy(toy):
    r = gs_beilinson_equivalence(toy)
    assert r.gs and r.beilinson and r.adm_standard
    C1 = r.internals["C"][1]
    assert sorted(C1) == sorted([(1, 0, 0), (0, 1, 0)])
    assert r.internals["D_is_alpha1"]


def test_gs_beilinson_wrong_sign():
    d = arithmetic_surface_toy(2, 6, [[1]], strict=False)
    r = gs_beilinson_equivalence(d)
    assert not r.gs and not r.beilinson


def test_gs_beilinson_no_g1():
    r = gs_beilinson_equivalence(arithmetic_surface_toy(2, 6, []))
    assert r.beilinson and r.gs


def test_divisor_decomposition_toy(toy):
    s = DivisorSlice.from_data(toy)
    D = divisor_decomposition(s)
    assert D.alpha1 == RatMatrix([[0], [0], [1]])
    assert s.dot(H, D.alpha1.column(0)) == 0
    assert D.h == F(3, 2)
    assert divisor_l_lift(s, (1, 0)) == (1, F(-3, 2), 0)
    assert divisor_l_lift(s, (0, 0)) == (0, 0, 0)


def test_global_index_toy(toy):
    assert global_index_check(DivisorSlice.from_data(toy)) == (0, 2, 0)


def test_zero_cycles_toy(toy):
    s = DivisorSlice.from_data(toy)
    Z = zero_cycle_decomposition(s)
    assert Z.Cn == [] and Z.l_injective and Z.direct_sum
    assert zero_cycle_l_lift(s, (1, 0)) == (1, F(-3, 2), 0)
    y = zero_cycle_l_lift(s, (0, 1))
    assert y == P and s.dot((1, F(-3, 2), 0), y) == 0
    assert zero_cycle_l_lift(s, (0, 0)) == (0, 0, 0)


def test_local_index_check():
    cyc = curve_fiber_data(cyc2_graph().M, (1, 1))
    assert local_index_check(cyc)
    fake = curve_fiber_data([[2, -2], [-2, 2]], (1, 1))
    assert not local_index_check(fake)
    smooth = curve_fiber_data([[0]], (1,))
    assert local_index_check(smooth)


def test_toy_with_fiber_places():
    d = arithmetic_surface_toy(2, 6, [[-1]], fibers=[cyc2_graph()])
    assert len(d.places) == 1 and local_index_check(d.places[0])


def test_eps_must_commute_with_L(toy):
    with pytest.raises(ContractError):
        ArakelovData(1, toy.Chbar.dims, toy.L, toy.pair, toy.F1, toy.B, toy.eps_class,
                     {0: [[0], [1], [0]], 1: [[3, 0, 0]]}, toy.generic.dims, toy.gen_proj,
                     toy.classes.dims, toy.cls)


def test_twisted_data_keeps_height_formula(toy):
    d = toy.twisted(1)
    # c1(L + X_eps)^2 = 6 + 2 * 2 = 10, h = 10 / 4
    assert height_of_generic_fiber(d) == F(5, 2)
    assert decompose(d).h_L == F(5, 2)
