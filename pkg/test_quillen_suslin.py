#!/usr/bin/env python3
"""
测试单模矩阵补全：常数补全、列化简、消元准备、Y 采样、Bézout 提升、局部矩阵拼接
"""
from fractions import Fraction

import numpy as np
import pytest

from src.algebra.ideal import is_unit_ideal
from src.algebra.poly import Polynomial
from src.algebra.polymat import PolyMatrix, determinant, matrix_degree
from src.algebra.rational import (
    pivot_columns,
    random_matrix,
    rational_det,
    rational_inverse,
    rational_rank,
)
from src.errors import (
    InputError,
    NotUnimodularError,
    RetryExhaustedError,
    SingularMatrixError,
    VerificationError,
)
from src.quillen_suslin import (
    bezout_lift_xn,
    build_patch,
    complete_constant,
    cyclic_matrix,
    eliminate_variable,
    noether_prepare,
    qs_transform,
    sample_y_matrices,
)
from src.quillen_suslin import completion
from src.quillen_suslin.preparation import preparation_holds
from src.syzygy import extend_tilde_M
from src.syzygy.generator import random_polynomial

X = ("x",)


def row(*entries):
    return PolyMatrix.row_vector(entries)


def elementary_product(rng, size, steps, degree=1, n=2):
    """随机初等列变换的乘积（行列式为 1）"""
    V = PolyMatrix.identity(size, n)
    for _ in range(steps):
        i, j = (int(k) for k in rng.choice(size, size=2, replace=False))
        E = PolyMatrix.identity(size, n).rows()
        E[i][j] = random_polynomial(rng, n, degree)
        V = V @ PolyMatrix(E, n)
    return V


def test_identity_block_gives_identity():
    F = PolyMatrix([[1, 0, 0], [0, 1, 0]], 2)
    certificate = qs_transform(F)
    assert certificate.U == PolyMatrix.identity(3, 2)


def test_row_x_one_minus_x(poly):
    x = poly("x", X)
    F = row(x, 1 - x)
    certificate = qs_transform(F)
    assert certificate.U == PolyMatrix([[1, x - 1], [1, x]], 1)
    assert certificate.method == "elementary"
    assert certificate.verify(F)
    assert determinant(certificate.U) == Polynomial.one(1)


def test_row_x_one_minus_x_by_elimination(poly):
    x = poly("x", X)
    F = row(x, 1 - x)
    certificate = qs_transform(F, seed=3, method="elimination")
    assert certificate.method == "elimination"
    assert certificate.verify(F)
    assert certificate.trace_product() == certificate.U
    assert certificate.within_bound
    assert [name for name, _ in certificate.degree_table] == ["x1", "U0"]


def test_tilde_m_completion(ex52):
    tilde = extend_tilde_M(ex52.M, ex52.p, ex52.q)
    certificate = qs_transform(tilde, seed=0)
    assert (tilde @ certificate.U).is_identity_block()
    assert determinant(certificate.U).constant_value()
    assert certificate.within_bound
    assert certificate.trace_product() == certificate.U


def test_unit_row_three_entries(poly):
    F = row(poly("s"), poly("t"), poly("s*t + 1"))
    certificate = qs_transform(F, seed=1)
    assert certificate.verify(F)


def test_square_matrix_is_inverted(poly):
    F = PolyMatrix([[1, poly("s^2")], [0, 1]], 2)
    certificate = qs_transform(F)
    assert F @ certificate.U == PolyMatrix.identity(2, 2)


def test_rejects_non_unimodular(ex52, poly):
    with pytest.raises(NotUnimodularError):
        qs_transform(ex52.M)
    with pytest.raises(NotUnimodularError):
        qs_transform(row(poly("s"), poly("t")))


def test_rejects_three_rows():
    with pytest.raises(InputError):
        qs_transform(PolyMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], 2))
    with pytest.raises(InputError):
        qs_transform(PolyMatrix([[1, 0]], 2), method="gauss")


def test_same_seed_same_result(ex52):
    tilde = extend_tilde_M(ex52.M, ex52.p, ex52.q)
    assert qs_transform(tilde, seed=5).U == qs_transform(tilde, seed=5).U


def test_eliminate_independent_variable(poly):
    F = row(poly("s"), 1 - poly("s"))
    assert eliminate_variable(F, 1) == PolyMatrix.identity(2, 2)


@pytest.mark.parametrize("method", ["auto", "patch"])
def test_eliminate_x(poly, method):
    x = poly("x", X)
    F = row(x, 1 - x)
    U = eliminate_variable(F, 0, seed=0, method=method)
    assert F @ U == row(Polynomial.zero(1), Polynomial.one(1))
    assert determinant(U).constant_value()


def test_noether_prepare_linear_forms(poly):
    F = row(poly("s"), poly("t"))
    prep = noether_prepare(F, seed=0, var=1)
    assert preparation_holds(prep.prepared, 1)
    assert matrix_degree(prep.prepared) <= matrix_degree(F) + 1


def test_noether_prepare_lifts_back(poly):
    x = poly("x", X)
    F = row(x, 1 - x)
    prep = noether_prepare(F, seed=0, var=0)
    assert prep.leading_minor.degree_in(0) >= 1
    # U' = I 时 lift_back 只剩常数部分，仍然可逆
    lifted = prep.lift_back(PolyMatrix.identity(2, 1))
    assert determinant(lifted).constant_value()


def test_cyclic_matrix_is_unimodular():
    for size, rank in ((2, 1), (3, 1), (4, 2), (5, 2)):
        A = cyclic_matrix(size, rank, 1, 2)
        assert determinant(A).constant_value() in (Fraction(1), Fraction(-1))


def test_sample_y_univariate(poly):
    x = poly("x", X)
    prep = noether_prepare(row(x, 1 - x), seed=0, var=0)
    sampling = sample_y_matrices(prep, seed=0)
    assert len(sampling.samples) == 1
    (sample,) = sampling.samples
    assert sample.c.is_constant and not sample.c.is_zero
    assert sample.u * sample.D1 + sample.v * sample.D2 == sample.c


def test_sample_y_bivariate(poly):
    F = row(poly("s"), 1 - poly("s*t"))
    prep = noether_prepare(F, seed=2, var=1)
    sampling = sample_y_matrices(prep, seed=2)
    assert is_unit_ideal(sampling.c_values) is not None
    for sample in sampling.samples:
        assert sample.u * sample.D1 + sample.v * sample.D2 == sample.c
        assert sample.c.degree_in(1) <= 0


def test_build_patch_shift_relation(poly):
    x = poly("x", X)
    prep = noether_prepare(row(x, 1 - x), seed=0, var=0)
    (sample,) = sample_y_matrices(prep, seed=0).samples
    patch = build_patch(prep.prepared, sample.y, sample.c, sample.u, sample.v, 0)
    # E(x, 0) = I
    assert patch.E.substitute(1, 0) == PolyMatrix.identity(2, 2)
    assert patch.h in (1, 2)


def test_bezout_lift(poly):
    x = poly("x", X)
    one = Polynomial.one(1)
    assert bezout_lift_xn([x * x, one], 0) == [Polynomial.zero(1), x]

    c_list = [x - 1, x]
    a = bezout_lift_xn(c_list, 0)
    assert a[0] * c_list[0] + a[1] * c_list[1] == x

    c_list = [x * x, x * x + x]
    a = bezout_lift_xn(c_list, 0)
    assert a[0] * c_list[0] + a[1] * c_list[1] == x


def test_complete_constant():
    assert complete_constant([[1, 0, 0], [0, 1, 0]], 2) == PolyMatrix.identity(3, 2)
    assert complete_constant([[2, 0]], 1) == PolyMatrix.from_constant([[Fraction(1, 2), 0], [0, 1]], 1)
    rng = np.random.default_rng(12)
    for _ in range(10):
        F0 = random_matrix(rng, 2, 4)
        if rational_rank(F0) < 2:
            continue
        U0 = complete_constant(F0, 2)
        assert (PolyMatrix.from_constant(F0, 2) @ U0).is_identity_block()


def test_rational_helpers():
    values = [[2, 1], [4, 3]]
    assert rational_det(values) == 2
    assert rational_inverse(values) == [[Fraction(3, 2), Fraction(-1, 2)], [-2, 1]]
    assert rational_rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert pivot_columns([[0, 1, 2], [0, 2, 5]]) == [1, 2]
    assert rational_det([]) == 1
    with pytest.raises(SingularMatrixError):
        rational_inverse([[1, 2], [2, 4]])


def test_preparation_is_monic_only_in_eliminated_variable(poly):
    """首子式 t² + s·t 关于 t 首一，关于 s 不首一：只检查被消元的变量"""
    F = row(poly("t^2 + s*t"), poly("s"))
    assert preparation_holds(F, 1)
    assert not preparation_holds(F, 0)


def test_constant_minor_shortcut(poly):
    F = PolyMatrix([[1, poly("s"), poly("t")], [0, 1, poly("s^2")]], 2)
    certificate = qs_transform(F)
    assert certificate.verify(F)
    assert [name for name, _ in certificate.degree_table] == ["minor"]
    assert certificate.trace_product() == certificate.U


def test_rows_completed_in_either_order(ex52):
    tilde = extend_tilde_M(ex52.M, ex52.p, ex52.q)
    for order in completion.ROW_ORDERS:
        U, trace, _, table = completion._complete_rows_in_order(
            tilde, np.random.default_rng(0), "auto", order)
        assert (tilde @ U).is_identity_block()
        assert determinant(U).constant_value()
        assert completion._product(trace, U.nrows, 2) == U
        assert table[0][0].startswith(f"row{order[0] + 1}:")


def test_degree_above_bound_is_an_error(poly, monkeypatch):
    x = poly("x", X)
    F = row(x, 1 - x)
    monkeypatch.setattr(completion, "qs_explicit_bound", lambda n, r, d: 0)
    with pytest.raises(VerificationError, match="上界"):
        qs_transform(F)
    monkeypatch.setenv("SYZ_MAX_RETRIES", "2")
    with pytest.raises(RetryExhaustedError):
        qs_transform(F, method="elimination")


def test_auto_falls_back_to_elimination(poly, monkeypatch):
    """列化简全部失败时 auto 走消元路线"""
    F = row(poly("s"), poly("t"), poly("1 - s - t"))
    monkeypatch.setattr(completion, "elementary_reduce", lambda *args, **kwargs: None)
    certificate = qs_transform(F, seed=0)
    assert certificate.method == "elimination"
    assert certificate.verify(F)
    assert certificate.trace_product() == certificate.U
    assert certificate.within_bound


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(60))
def test_random_rows(seed):
    rng = np.random.default_rng(seed)
    V = elementary_product(rng, 3, 3)
    F = V.take_rows([0])
    certificate = qs_transform(F, seed=seed)
    assert certificate.verify(F)
    assert certificate.within_bound
    assert qs_transform(F, seed=seed).U == certificate.U


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(40))
def test_random_two_row_matrices(seed):
    rng = np.random.default_rng(1000 + seed)
    V = elementary_product(rng, 4, 3)
    F = V.take_rows([0, 1])
    certificate = qs_transform(F, seed=seed)
    assert certificate.verify(F)
    assert certificate.within_bound
    assert certificate.trace_product() == certificate.U


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_random_rows_by_elimination(seed):
    rng = np.random.default_rng(seed)
    F = elementary_product(rng, 3, 3).take_rows([0])
    certificate = qs_transform(F, seed=seed, method="elimination")
    assert certificate.verify(F)
    assert certificate.within_bound
    assert certificate.trace_product() == certificate.U
    if not F.is_constant:
        assert certificate.method == "elimination"


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(3))
def test_random_two_row_matrices_by_elimination(seed):
    rng = np.random.default_rng(1000 + seed)
    F = elementary_product(rng, 4, 3).take_rows([0, 1])
    certificate = qs_transform(F, seed=seed, method="elimination")
    assert certificate.verify(F)
    assert certificate.within_bound
    assert certificate.trace_product() == certificate.U


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(3))
def test_random_rows_without_column_reduction(seed, monkeypatch):
    """elementary_reduce 化不动时（这里直接让它失败）auto 仍能通过消元完成"""
    rng = np.random.default_rng(200 + seed)
    F = elementary_product(rng, 3, 3).take_rows([0])
    monkeypatch.setattr(completion, "elementary_reduce", lambda *args, **kwargs: None)
    certificate = qs_transform(F, seed=seed)
    assert certificate.verify(F)
    assert certificate.trace_product() == certificate.U


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
