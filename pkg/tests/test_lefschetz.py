import random

import pytest

from lefkit.errors import ContractError, HardLefschetzFailure
from lefkit.graded import GradedMap, GradedSpace
from lefkit.lefschetz import (
    LefschetzModule,
    change_basis,
    check_hard_lefschetz,
    commutator_defect,
    direct_sum,
    lambda_by_solve,
    lambda_operator,
    primitive_parts,
)
from lefkit.models import projective_space_module, random_lefschetz_module
from lefkit.ratlinalg import RatMatrix


def p2():
    return projective_space_module(2)[0]


def test_graded_space_basics():
    sp = GradedSpace({0: 1, 2: 3, 5: 0})
    assert sp.degrees == [0, 2]
    assert sp.dim(1) == 0
    assert sp.total == 4
    assert sp.shifted(1).dims == {1: 1, 3: 3}


def test_graded_map_compose_and_power():
    M = p2()
    L2 = M.L @ M.L
    assert L2.shift == 2
    assert L2.block(0) == RatMatrix([[1]])
    assert M.L.power(2) == L2


def test_hl_p2_holds():
    assert check_hard_lefschetz(p2()).holds


def test_hl_fails_with_zero_top_map():
    M = LefschetzModule.from_blocks({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[0]]}, 2)
    rep = check_hard_lefschetz(M)
    assert not rep.holds
    # L^2 on V^0 is zero; L^0 on V^1 is the identity, so i=1 is fine
    assert rep.failures == (0,)


def test_hl_empty_module():
    assert check_hard_lefschetz(LefschetzModule.zero(3)).holds


def test_primitive_parts_p2():
    D = primitive_parts(p2())
    assert D.primitive_bases == {0: [(1,)]}
    assert list(D.expansion[2]) == [(0, 0, 2)]


def test_primitive_single_middle_line():
    M = LefschetzModule.from_blocks({1: 1}, {}, 2)
    assert primitive_parts(M).primitive_bases == {1: [(1,)]}


def test_primitive_extra_line_in_direct_sum():
    M = direct_sum(p2(), LefschetzModule.from_blocks({1: 1}, {}, 2))
    D = primitive_parts(M)
    assert len(D.primitive_bases[0]) == 1
    assert len(D.primitive_bases[1]) == 1


def test_primitive_parts_requires_hl():
    M = LefschetzModule.from_blocks({0: 1, 1: 1}, {0: [[0]]}, 1)
    with pytest.raises(HardLefschetzFailure):
        primitive_parts(M)


def test_lambda_p2():
    Lam = lambda_operator(p2())
    assert Lam.block(1) == RatMatrix([[2]])
    assert Lam.block(2) == RatMatrix([[2]])
    assert Lam.block(0).nrows == 0


def test_lambda_single_degree_is_zero():
    M = LefschetzModule.from_blocks({1: 2}, {}, 2)
    assert lambda_operator(M).is_zero()


def test_lambda_p1():
    M = projective_space_module(1)[0]
    Lam = lambda_operator(M)
    assert (Lam.block(1) @ M.L.block(0)) == RatMatrix([[1]])


def test_lambda_matches_oracle_on_random_modules():
    for seed in range(30):
        M = random_lefschetz_module(seed)
        Lam = lambda_operator(M)
        orc, nullity = lambda_by_solve(M)
        assert nullity == 0
        assert Lam == orc
        assert all(m.is_zero() for m in commutator_defect(M, Lam).values())


def test_primitive_dimension_bookkeeping():
    for seed in range(30):
        M = random_lefschetz_module(seed)
        D = primitive_parts(M)
        for i in M.degrees:
            total = sum(len(D.primitive_bases.get(j, [])) for j in range(0, i + 1)
                        if i <= M.n - j)
            assert total == M.dim(i)


def test_change_basis_preserves_hl():
    rng = random.Random(3)
    M = p2()
    P = {i: RatMatrix([[rng.choice((2, -3))]]) for i in M.degrees}
    assert check_hard_lefschetz(change_basis(M, P)).holds


def test_lefschetz_rejects_bad_shift():
    sp = GradedSpace({0: 1})
    with pytest.raises(ContractError):
        LefschetzModule(sp, GradedMap.zero(sp, sp, 0), 0)
