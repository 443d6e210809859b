"""Hilbert–Burch 校验与基变换

m×(m−1) 矩阵 B 的列是 Syz(a) 的基，当且仅当每列都是合冲，且带符号最大子式等于 u·(a₁, …, a_m)，
u 为非零常数。
"""
from ..algebra.poly import Polynomial, divide_exact
from ..algebra.polymat import (
    PolyMatrix,
    column_degrees,
    determinant,
    divide_matrix_exact,
    signed_maximal_minors,
)
from ..errors import InexactDivisionError, ShapeError, VerificationError
from ..utils.logger import logger
from .instance import VerificationReport


def _find_unit(a, minors):
    """从第一个非零 a_i 求 u，其余分量必须完全一致"""
    index = next((i for i, x in enumerate(a) if not x.is_zero), None)
    if index is None:
        return None
    ratio = divide_exact(minors[index], a[index])
    if ratio is None or not ratio.is_constant:
        return None
    unit = ratio.constant_value()
    if not unit:
        return None
    if any(m != x.scale(unit) for m, x in zip(minors, a)):
        return None
    return unit


def verify_basis(a, B, bounds=None):
    """返回 VerificationReport；bounds 为 [(id, value)] 时同时比较次数"""
    a = list(a)
    m = len(a)
    if B.shape != (m, m - 1):
        raise ShapeError(f"基矩阵必须是 {m}×{m - 1}，实际为 {B.nrows}×{B.ncols}")
    products = (PolyMatrix.row_vector(a) @ B).row(0)
    syzygy_ok = tuple(x.is_zero for x in products)
    minors = signed_maximal_minors(B)
    unit = _find_unit(a, minors)
    degrees = tuple(max(d, 0) for d in column_degrees(B))
    report = VerificationReport(syzygy_ok, unit is not None, unit, degrees)
    if bounds:
        report = report.with_bounds(bounds)
    if not report.ok:
        broken = [i + 1 for i, ok in enumerate(syzygy_ok) if not ok]
        logger.debug(f"基校验失败：非合冲列 {broken}，子式检查 {report.minors_ok}")
    return report


def require_verified(report, label):
    if report.ok:
        return report
    failed = [b.formula for b in report.bound_comparisons if not b.satisfied]
    raise VerificationError(
        f"{label} 的校验失败：合冲 {list(report.syzygy_ok)}，子式 {report.minors_ok}，"
        f"超出上界 {failed}"
    )


def change_of_basis(a, B_from, B_to):
    """求 X 使 B_to·X = B_from（Cramer 法则，作用在删去一行后的方块上）"""
    a = list(a)
    rows = B_to.nrows
    index = next((i for i, x in enumerate(a) if not x.is_zero), None)
    if index is None:
        raise VerificationError("生成元全为零，无法求基变换")
    keep = [i for i in range(rows) if i != index]
    square = B_to.take_rows(keep)
    det = determinant(square)
    if det.is_zero:
        raise VerificationError("删去一行后的方块行列式为零")
    size = square.nrows
    adjugate = []
    for i in range(size):
        row = []
        for j in range(size):
            if size == 1:
                row.append(Polynomial.one(B_to.nvars))
                continue
            minor = determinant(square.submatrix(
                [k for k in range(size) if k != j], [k for k in range(size) if k != i]))
            row.append(minor if (i + j) % 2 == 0 else -minor)
        adjugate.append(row)
    numerator = PolyMatrix(adjugate, B_to.nvars) @ B_from.take_rows(keep)
    X = divide_matrix_exact(numerator, det)
    if X is None:
        raise InexactDivisionError("基变换矩阵不是多项式矩阵，两组列不生成同一个模")
    if B_to @ X != B_from:
        raise VerificationError("基变换矩阵不满足 B_to·X = B_from")
    return X


def bases_equivalent(a, B1, B2):
    """两组基生成同一个模：基变换矩阵的行列式是非零常数"""
    X = change_of_basis(a, B1, B2)
    value = determinant(X).constant_value()
    return bool(value), value
