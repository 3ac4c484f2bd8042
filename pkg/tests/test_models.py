import pytest

from lefkit.errors import ContractError, IndexViolation, OrthogonalityViolation
from lefkit.lefschetz import check_hard_lefschetz
from lefkit.local import conjecture_report, harmonic_split, vanishing_nearby
from lefkit.models import (
    ReductionGraph,
    StrataData,
    Stratum,
    arithmetic_surface_toy,
    bgs_assemble,
    chain3_graph,
    curve_fiber_data,
    cyc2_graph,
    projective_space_module,
    random_arakelov_instance,
    random_filtered_instance,
    random_lefschetz_module,
    reduction_graph_model,
    single_stratum,
    two_curve_strata,
)
from lefkit.pairing import check_adjoint, check_orthogonality
from lefkit.ratlinalg import RatMatrix
from lefkit.serialize import dumps, filtered_to_json, module_to_json


@pytest.mark.parametrize("M, degs", [
    ([[1, 0], [0, 1]], (1, 1)),          # not row-sum zero
    ([[-1, 1], [2, -2]], (1, 1)),        # not symmetric
    ([[1, -1], [-1, 1]], (1, 1)),        # negative off-diagonal
    ([[0, 0], [0, 0]], (1, 1)),          # disconnected
    ([[-2, 2], [2, -2]], (1,)),          # wrong number of degrees
    ([[-2, 2], [2, -2]], (1, 0)),        # non-positive degree
    ([], ()),
])
def test_reduction_graph_rejects(M, degs):
    with pytest.raises(ContractError):
        ReductionGraph(M, degs)


def test_projective_space():
    M, P = projective_space_module(3)
    assert check_hard_lefschetz(M).holds
    assert check_adjoint(P, M.L)
    with pytest.raises(ContractError):
        projective_space_module(-1)


def test_smooth_fiber_has_no_vanishing_part():
    f, _ = reduction_graph_model(ReductionGraph([[0]], (2,)))
    v = vanishing_nearby(f)
    assert v.A_phi == {0: [], 1: []}
    assert conjecture_report(f).all_hold


def test_chain3_pieces():
    f, m = reduction_graph_model(chain3_graph())
    v = vanishing_nearby(f)
    assert len(v.A_phi[1]) == 2
    assert harmonic_split(f)[1] == [(1, 1, 1)]
    assert conjecture_report(f).all_hold
    assert m.Zhat.total == 6


def test_cyc2_model_shapes():
    f, m = reduction_graph_model(cyc2_graph())
    assert f.conn.block(1) == RatMatrix([[-2, 2], [2, -2]])
    assert m.generic.dim(1) == 2


def test_horizontal_on_missing_component():
    with pytest.raises(ContractError):
        reduction_graph_model(cyc2_graph(), horizontal=[2])


def test_bgs_two_points_is_cyc2():
    r = bgs_assemble(two_curve_strata(points=2))
    f = r.fiber
    assert f.conn.block(1) == curve_fiber_data(cyc2_graph().M, (1, 1)).conn.block(1)
    assert r.high_basis[0] == [(1, 1)]
    assert conjecture_report(f).all_hold


def test_bgs_one_point_is_chain():
    f = bgs_assemble(two_curve_strata(points=1)).fiber
    assert f.conn.block(1) == RatMatrix([[-1, 1], [1, -1]])
    assert conjecture_report(f).all_hold


def test_bgs_single_stratum():
    f = bgs_assemble(single_stratum()).fiber
    assert f.conn.blocks == {} or all(b.is_zero() for b in f.conn.blocks.values())
    assert f.A_high.dims == {0: 1, 1: 1}
    assert conjecture_report(f).all_hold


def test_strata_validation():
    s = two_curve_strata()
    with pytest.raises(ContractError):
        StrataData(2, s.components, s.doubles, s.restrict, s.gysin)
    with pytest.raises(ContractError):
        StrataData(1, s.components, {(1, 0): s.doubles[(0, 1)]},
                   {(1, 0): s.restrict[(0, 1)]}, {(1, 0): s.gysin[(0, 1)]})
    # scaling one Gysin map breaks adjointness
    g0, g1 = s.gysin[(0, 1)]
    with pytest.raises(ContractError):
        StrataData(1, s.components, s.doubles, s.restrict, {(0, 1): (g0 + g0, g1)})


def test_strata_accepts_tuples():
    s = two_curve_strata()
    comps = [(c.module, c.pairing) for c in s.components]
    t = StrataData(1, comps, s.doubles, s.restrict, s.gysin)
    assert isinstance(t.components[0], Stratum)


@pytest.mark.parametrize("seed", range(5))
def test_generators_deterministic(seed):
    assert dumps(module_to_json(random_lefschetz_module(seed))) == \
        dumps(module_to_json(random_lefschetz_module(seed)))
    a, b = random_filtered_instance(seed), random_filtered_instance(seed)
    assert dumps(filtered_to_json(a.filtered, a.pairing, a.eps)) == \
        dumps(filtered_to_json(b.filtered, b.pairing, b.eps))


@pytest.mark.parametrize("seed", range(20))
def test_generated_instances_validate(seed):
    M = random_lefschetz_module(seed)
    assert check_hard_lefschetz(M).holds
    inst = random_filtered_instance(seed)
    F = inst.filtered
    assert check_hard_lefschetz(F.V).holds
    assert check_adjoint(inst.pairing, F.V.L)
    check_orthogonality(F, inst.pairing)
    assert inst.eps @ F.V.L == F.V.L @ inst.eps


def test_empty_bounds():
    assert random_lefschetz_module(3, max_dim=0, max_n=0).space.total == 0
    assert random_filtered_instance(3, max_dim=0, max_n=0).filtered.V.space.total == 0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_broken_pairing(seed):
    inst = random_filtered_instance(seed, break_pairing=True)
    with pytest.raises(OrthogonalityViolation):
        check_orthogonality(inst.filtered, inst.pairing)


def test_planted_verdicts_vary():
    seen = {(i.expect_g0, i.expect_g1) for i in
            (random_filtered_instance(s, p_flip=0.5) for s in range(30))}
    assert len(seen) > 1


def test_random_arakelov_instance_deterministic():
    a = random_arakelov_instance(4)
    b = random_arakelov_instance(4)
    assert a.n == b.n and a.Chbar.dims == b.Chbar.dims


def test_toy_rejects_positive_nt():
    with pytest.raises(IndexViolation):
        arithmetic_surface_toy(2, 6, [[1]])
    d = arithmetic_surface_toy(2, 6, [[1]], strict=False)
    assert d.Chbar.dim(1) == 3
