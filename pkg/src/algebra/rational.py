"""常数矩阵（有理数）上的线性代数

只处理 Fraction 元素的小矩阵：坐标变换、常数补全 U₀、随机采样都依赖这里。
秩、行列式、求逆和主元列交给 sympy.Matrix，结果转回 Fraction。
"""
from fractions import Fraction

import sympy as sp

from ..errors import SingularMatrixError


def to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    # numpy 整数等
    return Fraction(int(value))


def _to_sympy(rows):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in map(to_fraction, row)]
                      for row in rows])


def _from_sympy(matrix):
    return [[to_fraction(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def identity(size):
    return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]


def rational_rank(rows):
    if not rows:
        return 0
    return _to_sympy(rows).rank()


def pivot_columns(rows):
    if not rows:
        return []
    _, pivots = _to_sympy(rows).rref()
    return list(pivots)


def rational_det(rows):
    if not rows:
        return Fraction(1)
    return to_fraction(_to_sympy(rows).det(method="bareiss"))


def rational_inverse(rows):
    """奇异时抛出 SingularMatrixError（sympy 的 NonInvertibleMatrixError 是 ValueError 的子类）"""
    try:
        return _from_sympy(_to_sympy(rows).inv())
    except ValueError as e:
        raise SingularMatrixError(f"常数矩阵不可逆: {e}")


def random_matrix(rng, n_rows, n_cols, low=-3, high=3):
    values = rng.integers(low, high + 1, size=(n_rows, n_cols))
    return [[Fraction(int(values[i][j])) for j in range(n_cols)] for i in range(n_rows)]


def random_invertible(rng, size, low=-3, high=3, attempts=64):
    """随机整数可逆矩阵；连续失败说明采样区间有问题"""
    for _ in range(attempts):
        candidate = random_matrix(rng, size, size, low, high)
        if rational_det(candidate) != 0:
            return candidate
    raise SingularMatrixError(f"{attempts} 次采样都没有得到可逆矩阵")
