import random
from fractions import Fraction as F

import pytest

from lefkit.errors import ContractError
from lefkit.ratlinalg import (
    MatrixSystem,
    RatMatrix,
    det,
    image_kernel,
    inverse,
    kernel,
    qstr,
    rank,
    signature,
    solve,
)


def test_solve_identity_system():
    part, ker = solve(RatMatrix([[1, 0], [0, 1]]), (3, F(1, 2)))
    assert part == (3, F(1, 2))
    assert ker == []


def test_solve_one_equation():
    part, ker = solve(RatMatrix([[1, 1]]), (0,))
    assert part == (0, 0)
    assert ker == [(1, -1)]


def test_solve_laplacian():
    part, ker = solve(RatMatrix([[-2, 2], [2, -2]]), (F(-1, 2), F(1, 2)))
    assert part == (F(1, 4), 0)
    assert ker == [(1, 1)]


def test_inconsistent_system():
    assert solve(RatMatrix([[1, 1], [1, 1]]), (0, 1)) is None


@pytest.mark.parametrize("rows,im,ker", [
    ([[0, 0], [0, 0]], [], [(1, 0), (0, 1)]),
    ([[-2, 2], [2, -2]], [(1, -1)], [(1, 1)]),
    ([[1], [0]], [(1, 0)], []),
])
def test_image_kernel_examples(rows, im, ker):
    assert image_kernel(RatMatrix(rows)) == (im, ker)


@pytest.mark.parametrize("rows,sig", [
    ([[1]], (1, 0, 0)),
    ([[-2]], (0, 1, 0)),
    ([[-2, 2], [2, -2]], (0, 1, 1)),
    ([[0, 1], [1, 0]], (1, 1, 0)),
])
def test_signature_examples(rows, sig):
    assert signature(RatMatrix(rows)) == sig


def test_signature_rejects_nonsymmetric():
    with pytest.raises(ContractError):
        signature(RatMatrix([[1, 2], [0, 1]]))


def test_qstr():
    assert qstr(F(3, 2)) == "3/2"
    assert qstr(F(-4, 2)) == "-2"


def _rand(rng, r, c):
    return RatMatrix([[F(rng.randint(-3, 3), rng.choice((1, 1, 2))) for _ in range(c)] for _ in range(r)], c)


def test_rank_nullity_and_residual():
    rng = random.Random(7)
    for _ in range(200):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        A = _rand(rng, r, c)
        im, ker = image_kernel(A)
        assert len(im) == rank(A)
        assert len(im) + len(ker) == c
        for v in ker:
            assert not any(A @ v)
        b = A @ tuple(F(rng.randint(-2, 2)) for _ in range(c))
        part, _ = solve(A, b)
        assert A @ part == b


def test_signature_congruence_invariance():
    rng = random.Random(11)
    for _ in range(100):
        d = rng.randint(1, 4)
        B = _rand(rng, d, d)
        G = B + B.T
        P = _rand(rng, d, d)
        if det(P) == 0:
            continue
        assert signature(P.T @ G @ P) == signature(G)


def test_inverse_roundtrip():
    A = RatMatrix([[2, 1], [1, 1]])
    assert A @ inverse(A) == RatMatrix.identity(2)


def test_matrix_system_unique_and_nullity():
    ms = MatrixSystem()
    ms.unknown("X", (1, 2))
    # X @ [[1,0],[0,1]] = [3, 4]
    ms.equation([(None, "X", RatMatrix.identity(2))], RatMatrix([[3, 4]]))
    sol, null = ms.solve()
    assert null == 0
    assert sol["X"] == RatMatrix([[3, 4]])


def test_kernel_is_echelon():
    assert kernel(RatMatrix([[1, 2, 3]])) == [(1, 0, F(-1, 3)), (0, 1, F(-2, 3))]
