"""随机 grade 2 实例，供测试与 demo 使用

p、q 在一个随机整点 ξ 处同时为零（所以 ⟨p, q⟩ ≠ R），且 gcd(p, q) = 1。
默认 M 的元素是次数 ≤ matrix_degree 的随机多项式，只保留 ⟨a⟩ = ⟨p, q⟩ 的样本；
这样的 M 和导出的 N 一般都不是单模矩阵。
with_N 时改用 M = [C | R]·P（C 为可逆常数 2×2 块，P 为列置换）与 N = Pᵀ·[C⁻¹; 0]，满足 M·N = I₂。
"""
from itertools import product

from ..algebra.ideal import ideal_equal
from ..algebra.poly import Polynomial, multivariate_gcd
from ..algebra.polymat import PolyMatrix
from ..algebra.rational import identity, random_invertible, rational_inverse
from ..errors import RetryExhaustedError, ShapeError
from ..quillen_suslin.preparation import make_rng
from ..utils.logger import logger
from .instance import Grade2Instance

VARIABLE_NAMES = ("s", "t", "u", "v", "w")
MAX_ATTEMPTS = 50


def variable_names(n):
    if n <= len(VARIABLE_NAMES):
        return VARIABLE_NAMES[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def _exponents(n, degree, with_constant):
    low = 0 if with_constant else 1
    return [e for e in product(range(degree + 1), repeat=n) if low <= sum(e) <= degree]


def random_polynomial(rng, n, degree, with_constant=True, density=0.5, low=-3, high=3):
    """系数取自 [low, high] 的稀疏随机多项式"""
    terms = {}
    for e in _exponents(n, degree, with_constant):
        if rng.random() < density:
            terms[e] = int(rng.integers(low, high + 1))
    return Polynomial(terms, n)


def _pq_pair(rng, n, degree):
    xi = [int(v) for v in rng.integers(-2, 3, size=n)]
    shift = [-v for v in xi]
    for _ in range(MAX_ATTEMPTS):
        p = random_polynomial(rng, n, degree, with_constant=False)
        q = random_polynomial(rng, n, degree, with_constant=False)
        if p.is_zero or q.is_zero or p.is_constant or q.is_constant:
            continue
        if not multivariate_gcd(p, q).is_constant:
            continue
        ident = identity(n)
        return p.linear_change(ident, shift), q.linear_change(ident, shift), xi
    raise RetryExhaustedError(f"{MAX_ATTEMPTS} 次内没有找到互素的 p、q")


def _random_block(rng, n, rows, cols, degree):
    return PolyMatrix(
        [[random_polynomial(rng, n, degree) for _ in range(cols)] for _ in range(rows)], n)


def _orthogonal_pair(rng, n, m, matrix_degree):
    """M = [C | R]·P 与 N = Pᵀ·[C⁻¹; 0]，M·N = I₂"""
    C = random_invertible(rng, 2, -2, 2)
    c_block = PolyMatrix.from_constant(C, n)
    rest = m - 2
    M = c_block.hstack(_random_block(rng, n, 2, rest, matrix_degree)) if rest else c_block
    c_inv = PolyMatrix.from_constant(rational_inverse(C), n)
    N = c_inv.vstack(PolyMatrix.zeros(rest, 2, n)) if rest else c_inv
    order = [int(i) for i in rng.permutation(m)]
    return M.take_columns(order), N.take_rows(order)


def _random_M(rng, n, m, matrix_degree, p, q):
    """次数 ≤ matrix_degree 的随机 M，保留 ⟨(p q)·M⟩ = ⟨p, q⟩ 的样本"""
    pq_row = PolyMatrix.row_vector([p, q])
    for attempt in range(MAX_ATTEMPTS):
        M = _random_block(rng, n, 2, m, matrix_degree)
        a = (pq_row @ M).row(0)
        if any(x.is_zero for x in a):
            continue
        if ideal_equal(a, [p, q]):
            logger.debug(f"第 {attempt + 1} 次采样得到满足 ⟨a⟩ = ⟨p, q⟩ 的 M")
            return M
    raise RetryExhaustedError(f"{MAX_ATTEMPTS} 次内没有采样到满足 ⟨a⟩ = ⟨p, q⟩ 的 M")


def random_grade2_instance(rng=None, n=2, m=3, degree=2, matrix_degree=2, with_N=False):
    """随机生成 (a, p, q, M[, N])；a = (p q)·M"""
    if n < 2:
        raise ShapeError("grade 2 实例至少需要两个变量")
    if m < 2:
        raise ShapeError("at least two generators required（至少需要两个生成元）")
    rng = make_rng(rng if rng is not None else 0)
    p, q, xi = _pq_pair(rng, n, degree)

    N = None
    if with_N:
        M, N = _orthogonal_pair(rng, n, m, matrix_degree)
    else:
        M = _random_M(rng, n, m, matrix_degree, p, q)

    a = (PolyMatrix.row_vector([p, q]) @ M).row(0)
    logger.debug(f"随机实例: n={n}, m={m}, ξ={xi}, M·N = I₂: {with_N}")
    return Grade2Instance(variable_names(n), tuple(a), p, q, M, N)
