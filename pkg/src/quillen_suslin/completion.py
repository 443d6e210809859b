"""单模矩阵补全：F·U = [I_r | 0]

路线：
1. F 已是 [I_r | 0] 或为方阵时直接处理；两行且某个 2×2 子式是非零常数时直接写出 U
2. 列化简（elementary_reduce），失败时先对随机常数列混合后的 F 重试；两行时两种行顺序都试
3. 消元：随机坐标变换后从最后一个变量开始逐个消去，最后用 complete_constant 收尾
两行的情形化为两次单行补全。
"""
import time
from dataclasses import dataclass, field
from functools import reduce as fold
from itertools import combinations
from typing import List, Tuple

from ..algebra.poly import Polynomial
from ..algebra.polymat import (
    PolyMatrix,
    determinant,
    inverse_unimodular,
    is_unimodular,
    matrix_degree,
    maximal_minors,
)
from ..algebra.rational import identity, random_invertible, rational_inverse
from ..bounds.formulas import qs_explicit_bound
from ..errors import (
    ComputationError,
    InputError,
    NotUnimodularError,
    RetryExhaustedError,
    ShapeError,
    VerificationError,
)
from ..utils import config
from ..utils.logger import logger
from .patching import eliminate_variable
from .preparation import change_coordinates, make_rng
from .reduction import complete_constant, elementary_reduce

METHODS = ("auto", "elementary", "elimination")
ROW_ORDERS = ((0, 1), (1, 0))
# 消元之前用随机常数列混合重试列化简的次数
MIX_ATTEMPTS = 4


@dataclass(frozen=True)
class CompletionCertificate:
    U: PolyMatrix
    elimination_trace: Tuple[PolyMatrix, ...]
    degree: int
    rng_seed: object
    method: str
    bound: int
    degree_table: List[tuple] = field(default_factory=list)

    @property
    def within_bound(self):
        return self.degree <= self.bound

    def verify(self, F):
        """F·U = [I_r | 0] 且 det(U) 是非零常数"""
        if not (F @ self.U).is_identity_block():
            return False
        return bool(determinant(self.U).constant_value())

    def trace_product(self):
        return fold(lambda a, b: a @ b, self.elimination_trace)


def _seed_label(seed):
    return seed if isinstance(seed, int) else "generator"


def _product(factors, size, nvars):
    result = PolyMatrix.identity(size, nvars)
    for factor in factors:
        result = result @ factor
    return result


def _mixed_reduce(F, rng):
    """对 F·C（C 为随机可逆常数矩阵）做列化简，成功时返回 (C, u)"""
    n, s = F.nvars, F.ncols
    for _ in range(MIX_ATTEMPTS):
        c = PolyMatrix.from_constant(random_invertible(rng, s, -2, 2), n)
        u = elementary_reduce(F @ c, use_dual=False)
        if u is not None:
            return c, u
    return None


def _complete_row(F, rng, method, bound=None):
    """单行补全，返回 (U, trace, method, degree_table)"""
    n = F.nvars
    if F.is_constant:
        u0 = complete_constant(F)
        return u0, [u0], "elementary", [("U0", matrix_degree(u0))]

    if method in ("auto", "elementary"):
        u = elementary_reduce(F)
        if u is not None:
            return u, [u], "elementary", [("reduce", matrix_degree(u))]
        mixed = _mixed_reduce(F, rng)
        if mixed is not None:
            c, u = mixed
            logger.debug("随机常数列混合后列化简成功")
            return c @ u, [c, u], "elementary", [("mix", 0), ("reduce", matrix_degree(u))]
        if method == "elementary":
            raise ComputationError("列化简无法把该行化为 e₁，请改用 elimination 方法")

    stage_method = "auto" if method == "auto" else "patch"
    attempts = config.max_retries()
    last_error = None
    for attempt in range(attempts):
        change = identity(n) if attempt == 0 else random_invertible(rng, n)
        inverse = rational_inverse(change)
        current = change_coordinates(F, change)
        trace, table = [], []
        try:
            for var in reversed(range(n)):
                if method == "auto":
                    shortcut = elementary_reduce(current)
                    if shortcut is not None:
                        trace.append(shortcut)
                        table.append(("reduce", matrix_degree(shortcut)))
                        current = None
                        break
                step = eliminate_variable(current, var, rng, method=stage_method)
                if bound is not None and matrix_degree(step) > bound:
                    raise RetryExhaustedError(
                        f"x{var + 1} 的局部矩阵次数 {matrix_degree(step)} 超过上界 {bound}")
                trace.append(step)
                table.append((f"x{var + 1}", matrix_degree(step)))
                current = current.substitute(var, 0)
            if current is not None:
                u0 = complete_constant(current)
                trace.append(u0)
                table.append(("U0", matrix_degree(u0)))
        except (RetryExhaustedError, VerificationError) as e:
            last_error = e
            logger.warning(f"消元路线第 {attempt + 1} 次尝试失败，更换坐标变换: {e}")
            continue
        trace = [change_coordinates(t, inverse) for t in trace]
        u = _product(trace, F.ncols, n)
        return u, trace, "elimination", table
    raise RetryExhaustedError(f"单模行补全在 {attempts} 次尝试后失败: {last_error}")


def _constant_minor_completion(F):
    """某个 2×2 子式 S 是非零常数时直接写出 U = P·[[S⁻¹, −S⁻¹·R], [0, I]]"""
    n, s = F.nvars, F.ncols
    for i, j in combinations(range(s), 2):
        S = F.take_columns([i, j])
        if not determinant(S).constant_value():
            continue
        order = [i, j] + [k for k in range(s) if k not in (i, j)]
        s_inv = inverse_unimodular(S)
        top = s_inv.hstack((s_inv @ F.take_columns(order[2:])).scale(-1))
        bottom = PolyMatrix.zeros(s - 2, 2, n).hstack(PolyMatrix.identity(s - 2, n))
        permutation = PolyMatrix([[int(order[k] == row) for k in range(s)] for row in range(s)], n)
        return permutation @ top.vstack(bottom)
    return None


def _swap_first_columns(s, n):
    rows = PolyMatrix.identity(s, n).rows()
    rows[0], rows[1] = rows[1], rows[0]
    return PolyMatrix(rows, n)


def _complete_rows_in_order(F, rng, method, order, bound=None):
    """U = U₁·diag(1, V)·E：先补全 order[0] 行，再补全变换后另一行的剩余部分"""
    n, s = F.nvars, F.ncols
    first, second = order
    u1, _, method1, table1 = _complete_row(F.take_rows([first]), rng, method, bound)
    h = (F @ u1).row(second)
    tail = PolyMatrix.row_vector(h[1:])
    v, _, method2, table2 = _complete_row(tail, rng, method, bound)
    zero, one = Polynomial.zero(n), Polynomial.one(n)
    block = [[one] + [zero] * (s - 1)]
    for row in v.rows():
        block.append([zero] + row)
    block = PolyMatrix(block, n)
    clear = PolyMatrix.identity(s, n).rows()
    clear[1][0] = -h[0]
    clear = PolyMatrix(clear, n)
    trace = [u1, block, clear]
    if order != (0, 1):
        trace.append(_swap_first_columns(s, n))
    used = "elimination" if "elimination" in (method1, method2) else "elementary"
    table = [(f"row{first + 1}:" + name, deg) for name, deg in table1] + \
        [(f"row{second + 1}:" + name, deg) for name, deg in table2]
    return _product(trace, s, n), trace, used, table


def _complete_two_rows(F, rng, method, bound=None):
    """常数子式捷径 → 两种行顺序的列化简 → 消元"""
    if method != "elimination":
        shortcut = _constant_minor_completion(F)
        if shortcut is not None:
            return shortcut, [shortcut], "elementary", [("minor", matrix_degree(shortcut))]
    if method == "auto":
        for order in ROW_ORDERS:
            try:
                return _complete_rows_in_order(F, rng, "elementary", order)
            except ComputationError as e:
                logger.debug(f"行顺序 {order} 的列化简失败: {e}")
    return _complete_rows_in_order(F, rng, method, (0, 1), bound)


def qs_transform(F, seed=0, method="auto"):
    """单模 r×s 矩阵 F（r ≤ 2）的补全证书：F·U = [I_r | 0]，det U 为非零常数"""
    if method not in METHODS:
        raise InputError(f"未知的补全方法: {method}")
    r, s = F.shape
    n = F.nvars
    if r > s:
        raise ShapeError(f"需要 r ≤ s，实际为 {r}×{s}")
    if r > 2:
        raise InputError(f"只支持 r ∈ {{1, 2}}，实际 r = {r}")
    ok, _ = is_unimodular(F, with_certificate=True)
    if not ok:
        raise NotUnimodularError("矩阵不是单模的：最大子式不生成单位理想", maximal_minors(F))

    rng = make_rng(seed)
    start = time.time()
    bound = qs_explicit_bound(max(n, 1), r, max(matrix_degree(F), 0))
    if F.is_identity_block():
        u, trace, used, table = PolyMatrix.identity(s, n), [PolyMatrix.identity(s, n)], "elementary", []
    elif r == s:
        u = inverse_unimodular(F)
        trace, used, table = [u], "elementary", [("inverse", matrix_degree(u))]
    elif r == 1:
        u, trace, used, table = _complete_row(F, rng, method, bound)
    else:
        u, trace, used, table = _complete_two_rows(F, rng, method, bound)

    certificate = CompletionCertificate(
        U=u,
        elimination_trace=tuple(trace),
        degree=max(matrix_degree(u), 0),
        rng_seed=_seed_label(seed),
        method=used,
        bound=bound,
        degree_table=table,
    )
    if not certificate.verify(F):
        raise VerificationError("补全证书校验失败：F·U ≠ [I_r | 0] 或 det U 不是非零常数")
    if not certificate.within_bound:
        raise VerificationError(f"补全矩阵次数 {certificate.degree} 超过理论上界 {certificate.bound}")
    logger.debug(
        f"QS 补全完成: {r}×{s}，方法 {used}，次数 {certificate.degree} ({time.time() - start:.3f}秒)"
    )
    return certificate
