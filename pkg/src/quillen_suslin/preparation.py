"""消元前的准备工作

- noether_prepare: 随机坐标变换 + 常数列混合 + 乘以矩阵 A，使首个 r×r 子式关于被消变量首一，
  且总次数严格大于其他最大子式
- sample_y_matrices: 随机常数矩阵 Y，取两个首子式的结式 c，直到这些 c 生成单位理想
- bezout_lift_xn: 把 x_var 表示成 Σ a_i·c_i
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..algebra.ideal import is_unit_ideal, represent_in_ideal
from ..algebra.poly import Polynomial, resultant_with_cofactors
from ..algebra.polymat import PolyMatrix, determinant, maximal_minors
from ..algebra.rational import identity, random_invertible, rational_inverse
from ..errors import ComputationError, RetryExhaustedError, ShapeError
from ..utils import config
from ..utils.logger import logger


def make_rng(seed):
    """接受整数种子或已有的 numpy Generator"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def linear_images(matrix, nvars):
    """x ↦ C·x 对应的代入像"""
    images = []
    for i in range(nvars):
        terms = {}
        for j in range(nvars):
            if matrix[i][j]:
                e = [0] * nvars
                e[j] = 1
                terms[tuple(e)] = matrix[i][j]
        images.append(Polynomial(terms, nvars))
    return images


def change_coordinates(a, matrix):
    """矩阵每个元素做 f(x) ↦ f(C·x)"""
    if a.nvars == 0:
        return a
    return a.compose(linear_images(matrix, a.nvars))


def cyclic_matrix(size, rank, var, nvars):
    """a_ii = x_var (i ≤ r)，a_{i,i+1} = 1，a_{s,1} = 1；行列式为 ±1"""
    x = Polynomial.variable(var, nvars)
    zero, one = Polynomial.zero(nvars), Polynomial.one(nvars)
    rows = [[zero] * size for _ in range(size)]
    for i in range(size - 1):
        rows[i][i + 1] = one
    rows[size - 1][0] = one
    for i in range(rank):
        rows[i][i] = rows[i][i] + x
    return PolyMatrix(rows, nvars)


def leading_is_monic(f, var):
    """关于 var 的首项系数是非零常数，且 var 确实出现"""
    if f.is_zero or f.degree_in(var) < 1:
        return False
    value = f.leading_coeff_in(var).constant_value()
    return bool(value)


@dataclass(frozen=True)
class NoetherPreparation:
    coordinate_change: list
    column_mix: list
    A: PolyMatrix
    prepared: PolyMatrix
    var: int
    source: PolyMatrix  # 坐标变换之后、乘 Q·A 之前的矩阵

    @property
    def leading_minor(self):
        return determinant(self.prepared.take_columns(range(self.prepared.nrows)))

    def lift_back(self, u_prepared):
        """prepared·U' = prepared|var=0  ⟹  source·(Q·A·U'·A₀⁻¹·Q⁻¹) = source|var=0"""
        nvars = self.source.nvars
        q = PolyMatrix.from_constant(self.column_mix, nvars)
        q_inv = PolyMatrix.from_constant(rational_inverse(self.column_mix), nvars)
        a0_inv = PolyMatrix.from_constant(
            rational_inverse(self.A.substitute(self.var, 0).constant_values()), nvars)
        return q @ self.A @ u_prepared @ a0_inv @ q_inv


def preparation_holds(prepared, var):
    """首个 r×r 子式关于 var 首一，且总次数严格大于其他最大子式"""
    minors = maximal_minors(prepared)
    leading = minors[0]
    if not leading_is_monic(leading, var):
        return False
    top = leading.total_degree()
    return all(m.total_degree() < top for m in minors[1:])


def noether_prepare(F, seed=0, var=None, coordinate_change=None, max_attempts=None):
    """把 F 整理成满足消元条件的形式

    coordinate_change 为 None 时随机选取坐标变换（第一次尝试用恒等变换）；
    给定时只对常数列混合 Q 做随机采样。
    """
    rng = make_rng(seed)
    r, s = F.shape
    n = F.nvars
    if r >= s:
        raise ShapeError(f"消元准备要求 r < s，实际为 {r}×{s}")
    var = n - 1 if var is None else var
    attempts = max_attempts or config.max_retries()
    A = cyclic_matrix(s, r, var, n)
    for attempt in range(attempts):
        if coordinate_change is not None:
            change = coordinate_change
        elif attempt == 0:
            change = identity(n)
        else:
            change = random_invertible(rng, n)
        source = change_coordinates(F, change)
        mix = identity(s) if attempt == 0 else random_invertible(rng, s)
        prepared = source @ PolyMatrix.from_constant(mix, n) @ A
        if preparation_holds(prepared, var):
            logger.debug(f"消元准备完成：变量 x{var + 1}，第 {attempt + 1} 次尝试")
            return NoetherPreparation(change, mix, A, prepared, var, source)
    raise RetryExhaustedError(f"{attempts} 次随机坐标变换都没有满足首一条件（变量 x{var + 1}）")


@dataclass(frozen=True)
class YSample:
    y: list
    D1: Polynomial
    D2: Polynomial
    c: Polynomial
    u: Polynomial  # u·D1 + v·D2 = c
    v: Polynomial


@dataclass(frozen=True)
class YSampling:
    samples: Tuple[YSample, ...]
    bezout: List[Polynomial]
    attempts: int = 0

    @property
    def y_matrices(self):
        return [sample.y for sample in self.samples]

    @property
    def c_values(self):
        return [sample.c for sample in self.samples]


def leading_minors(prepared_y):
    """D₁ = 前 r 列的子式，D₂ = 把第 r 列换成第 r+1 列后的子式"""
    r = prepared_y.nrows
    d1 = determinant(prepared_y.take_columns(range(r)))
    d2 = determinant(prepared_y.take_columns(list(range(r - 1)) + [r]))
    return d1, d2


def sample_y_matrices(prep, seed=0, max_attempts=None):
    """采样常数矩阵 Y，直到结式 c(x, Y) 们生成单位理想"""
    rng = make_rng(seed)
    prepared, var = prep.prepared, prep.var
    n, s = prepared.nvars, prepared.ncols
    attempts = max_attempts or config.max_retries()
    samples = []
    for attempt in range(1, attempts + 1):
        y = random_invertible(rng, s)
        d1, d2 = leading_minors(prepared @ PolyMatrix.from_constant(y, n))
        if not leading_is_monic(d1, var) or d2.is_zero:
            continue
        c, u, v = resultant_with_cofactors(d1, d2, var)
        if c.is_zero:
            continue
        samples.append(YSample(y, d1, d2, c, u, v))
        bezout = is_unit_ideal([sample.c for sample in samples])
        if bezout is not None:
            logger.debug(f"Y 采样完成：{len(samples)} 个样本，{attempt} 次尝试")
            return YSampling(tuple(samples), bezout, attempt)
    raise RetryExhaustedError(
        f"{attempts} 次 Y 采样后结式仍未生成单位理想（已有 {len(samples)} 个有效样本）"
    )


def bezout_lift_xn(c_list, var):
    """返回 a，使 x_var = Σ a_i·c_i"""
    c_list = list(c_list)
    if not c_list:
        raise ComputationError("结式列表为空")
    n = c_list[0].nvars
    x = Polynomial.variable(var, n)
    bezout = is_unit_ideal(c_list)
    if bezout is not None:
        return [x * b for b in bezout]
    coefficients = represent_in_ideal(x, c_list)
    if coefficients is None:
        raise ComputationError(f"x{var + 1} 不在结式生成的理想中，缺少单位理想证书")
    return coefficients
