"""快速路径：常数补全与列化简

complete_constant 处理常数矩阵；elementary_reduce 尝试用列运算把单模行化为 e₁，
失败时返回 None，由消元路线接手。
"""
from itertools import combinations

from ..algebra.ideal import is_unit_ideal
from ..algebra.poly import DEFAULT_ORDER, Polynomial, reduce
from ..algebra.polymat import PolyMatrix, inverse_unimodular
from ..algebra.rational import pivot_columns, rational_inverse, to_fraction
from ..errors import SingularMatrixError
from ..utils.logger import logger

MAX_REDUCTION_STEPS = 200
MAX_PAIR_WIDTH = 6


def complete_constant(F0, nvars=None):
    """常数满行秩矩阵 F₀，返回常数可逆 U₀ 使 F₀·U₀ = [I_r | 0]"""
    if isinstance(F0, PolyMatrix):
        nvars = F0.nvars
        values = F0.constant_values()
        if any(v is None for row in values for v in row):
            raise SingularMatrixError("complete_constant 只接受常数矩阵")
    else:
        values = [[to_fraction(x) for x in row] for row in F0]
        nvars = nvars or 0
    r, s = len(values), len(values[0])
    pivots = pivot_columns(values)
    if len(pivots) < r:
        raise SingularMatrixError(f"常数矩阵秩为 {len(pivots)}，小于行数 {r}")
    extra = [k for k in range(s) if k not in pivots]
    square = [list(row) for row in values]
    for k in extra:
        square.append([int(j == k) for j in range(s)])
    return PolyMatrix.from_constant(rational_inverse(square), nvars)


class _ColumnState:
    """同步记录行 f 与列变换矩阵 U（f_now = f_start·U）"""

    def __init__(self, entries):
        self.f = list(entries)
        self.nvars = self.f[0].nvars
        size = len(self.f)
        zero, one = Polynomial.zero(self.nvars), Polynomial.one(self.nvars)
        self.u = [[one if i == j else zero for j in range(size)] for i in range(size)]

    def add_multiple(self, src, dst, h):
        """col_dst += h·col_src"""
        self.f[dst] = self.f[dst] + h * self.f[src]
        for row in self.u:
            row[dst] = row[dst] + h * row[src]

    def scale(self, col, factor):
        self.f[col] = self.f[col].scale(factor)
        for row in self.u:
            row[col] = row[col].scale(factor)

    def rotate_to_front(self, k):
        """(col₁, col_k) ← (col_k, −col₁)，行列式不变"""
        if k == 0:
            return
        self.f[0], self.f[k] = self.f[k], -self.f[0]
        for row in self.u:
            row[0], row[k] = row[k], -row[0]

    def pair_block(self, i, j, a, b):
        """a·f_i + b·f_j = 1：col_i ← a·col_i + b·col_j，col_j ← −f_j·col_i + f_i·col_j"""
        fi, fj = self.f[i], self.f[j]
        self.f[i], self.f[j] = a * fi + b * fj, Polynomial.zero(self.nvars)
        for row in self.u:
            ci, cj = row[i], row[j]
            row[i] = a * ci + b * cj
            row[j] = -fj * ci + fi * cj

    def constant_index(self):
        return next((k for k, x in enumerate(self.f) if x.constant_value()), None)

    def finish(self, k):
        """f_k 是非零常数：归一化、清掉其他分量、挪到第一列"""
        self.scale(k, 1 / self.f[k].constant_value())
        for j, x in enumerate(self.f):
            if j != k and not x.is_zero:
                self.add_multiple(k, j, -x)
        self.rotate_to_front(k)
        return PolyMatrix(self.u, self.nvars)


def _division_pass(state, order):
    """用首项最小的分量去约化其他分量；返回是否有进展"""
    live = [k for k, x in enumerate(state.f) if not x.is_zero]
    live.sort(key=lambda k: order.key(state.f[k].leading_monomial(order)))
    for i in live:
        progress = False
        for j in live:
            if j == i or state.f[j].is_zero:
                continue
            (quotient,), _ = reduce(state.f[j], [state.f[i]], order)
            if not quotient.is_zero:
                state.add_multiple(i, j, -quotient)
                progress = True
        if progress:
            return True
    return False


def _greedy(entries, order):
    state = _ColumnState(entries)
    for _ in range(MAX_REDUCTION_STEPS):
        k = state.constant_index()
        if k is not None:
            return state.finish(k)
        if not _division_pass(state, order):
            break
    k = state.constant_index()
    if k is not None:
        return state.finish(k)
    return state


def _comaximal_pair(state):
    live = [k for k, x in enumerate(state.f) if not x.is_zero]
    if len(live) > MAX_PAIR_WIDTH:
        return None
    for i, j in combinations(live, 2):
        bezout = is_unit_ideal([state.f[i], state.f[j]])
        if bezout is not None:
            state.pair_block(i, j, *bezout)
            return state.finish(i)
    return None


def elementary_reduce(row, order=DEFAULT_ORDER, use_dual=True):
    """把单模行化为 e₁：row·U = (1, 0, …, 0)；无法化简时返回 None"""
    if isinstance(row, PolyMatrix):
        if row.nrows != 1:
            raise ValueError("elementary_reduce 只处理单行矩阵")
        entries = row.row(0)
    else:
        entries = list(row)
    if len(entries) == 1:
        value = entries[0].constant_value()
        if not value:
            return None
        return PolyMatrix([[Polynomial.constant(1 / value, entries[0].nvars)]], entries[0].nvars)

    result = _greedy(entries, order)
    if isinstance(result, PolyMatrix):
        return result
    paired = _comaximal_pair(result)
    if paired is not None:
        # result.u 是贪心阶段的变换，pair_block 在同一个状态上继续
        return paired
    if not use_dual:
        return None
    return _dual_reduce(entries, order)


def _dual_reduce(entries, order):
    """对 Bézout 系数 b（Σ b_i f_i = 1）做化简，得到第一列为 b 的可逆矩阵 V"""
    bezout = is_unit_ideal(entries)
    if bezout is None:
        return None
    w = elementary_reduce(bezout, order, use_dual=False)
    if w is None:
        return None
    v = inverse_unimodular(w).transpose()
    state = _ColumnState(entries)
    state.u = v.rows()
    state.f = (PolyMatrix.row_vector(entries) @ v).row(0)
    if state.f[0] != Polynomial.one(state.nvars):
        logger.warning("对偶化简后第一个分量不是 1，放弃该路线")
        return None
    return state.finish(0)
