"""多项式矩阵

不可变的矩形矩阵，元素是同一个环里的 Polynomial。
文本序列化：每行一行，元素之间用 `;` 分隔。
"""
from itertools import combinations
from typing import Optional, Sequence

from ..errors import NotUnimodularError, ShapeError, SingularMatrixError, VariableMismatchError
from .ideal import is_unit_ideal
from .parsing import format_polynomial, parse_polynomial
from .poly import NEG_INF, Polynomial, bareiss_determinant, divide_exact
from .rational import to_fraction


class PolyMatrix:
    __slots__ = ("_rows", "nrows", "ncols", "nvars")

    def __init__(self, rows, nvars=None):
        rows = [list(row) for row in rows]
        if not rows or not rows[0]:
            raise ShapeError("矩阵至少要有一行一列")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ShapeError("矩阵各行长度不一致")
        if nvars is None:
            found = next((x.nvars for row in rows for x in row if isinstance(x, Polynomial)), None)
            if found is None:
                raise VariableMismatchError("无法从纯数字元素推断变量个数")
            nvars = found
        converted = []
        for row in rows:
            out = []
            for x in row:
                if not isinstance(x, Polynomial):
                    x = Polynomial.constant(to_fraction(x), nvars)
                elif x.nvars != nvars:
                    raise VariableMismatchError(f"矩阵元素的变量个数 {x.nvars} 与 {nvars} 不一致")
                out.append(x)
            converted.append(tuple(out))
        self._rows = tuple(converted)
        self.nrows = len(rows)
        self.ncols = width
        self.nvars = nvars

    # ---- 构造 ----
    @classmethod
    def identity(cls, size, nvars):
        return cls([[int(i == j) for j in range(size)] for i in range(size)], nvars)

    @classmethod
    def zeros(cls, nrows, ncols, nvars):
        return cls([[0] * ncols for _ in range(nrows)], nvars)

    @classmethod
    def from_constant(cls, rows, nvars):
        return cls([[to_fraction(x) for x in row] for row in rows], nvars)

    @classmethod
    def row_vector(cls, entries):
        return cls([list(entries)])

    @classmethod
    def column_vector(cls, entries):
        return cls([[x] for x in entries])

    @classmethod
    def from_columns(cls, columns, nvars=None):
        columns = [list(c) for c in columns]
        return cls([list(row) for row in zip(*columns)], nvars)

    # ---- 访问 ----
    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def row(self, i):
        return list(self._rows[i])

    def column(self, j):
        return [row[j] for row in self._rows]

    def rows(self):
        return [list(row) for row in self._rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.nvars == other.nvars and self._rows == other._rows

    def __hash__(self):
        return hash((self.nvars, self._rows))

    def __repr__(self):
        names = [f"x{i + 1}" for i in range(self.nvars)]
        return f"PolyMatrix({self.nrows}×{self.ncols}: {serialize_matrix(self, names)!r})"

    # ---- 代数运算 ----
    def __matmul__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ShapeError(f"矩阵乘法形状不匹配: {self.shape} × {other.shape}")
        if self.nvars != other.nvars:
            raise VariableMismatchError("矩阵乘法两侧的变量个数不一致")
        zero = Polynomial.zero(self.nvars)
        out = []
        for row in self._rows:
            new_row = []
            for j in range(other.ncols):
                total = zero
                for k, x in enumerate(row):
                    y = other._rows[k][j]
                    if not x.is_zero and not y.is_zero:
                        total = total + x * y
                new_row.append(total)
            out.append(new_row)
        return PolyMatrix(out, self.nvars)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"矩阵加法形状不匹配: {self.shape} 与 {other.shape}")
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)],
                          self.nvars)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, factor):
        if isinstance(factor, Polynomial):
            return self.map(lambda x: x * factor)
        return self.map(lambda x: x.scale(factor))

    def map(self, func, nvars=None):
        return PolyMatrix([[func(x) for x in row] for row in self._rows], nvars)

    def transpose(self):
        return PolyMatrix([list(col) for col in zip(*self._rows)], self.nvars)

    @property
    def T(self):
        return self.transpose()

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ShapeError("水平拼接要求行数相同")
        return PolyMatrix([list(a) + list(b) for a, b in zip(self._rows, other._rows)], self.nvars)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ShapeError("垂直拼接要求列数相同")
        return PolyMatrix(list(self._rows) + list(other._rows), self.nvars)

    def submatrix(self, row_indices, col_indices):
        return PolyMatrix([[self._rows[i][j] for j in col_indices] for i in row_indices], self.nvars)

    def take_columns(self, col_indices):
        return self.submatrix(range(self.nrows), col_indices)

    def take_rows(self, row_indices):
        return self.submatrix(row_indices, range(self.ncols))

    def delete_row(self, index):
        return self.take_rows([i for i in range(self.nrows) if i != index])

    def replace_column(self, j, column):
        if len(column) != self.nrows:
            raise ShapeError("替换列的长度与行数不一致")
        rows = self.rows()
        for i, x in enumerate(column):
            rows[i][j] = x
        return PolyMatrix(rows, self.nvars)

    def substitute(self, var, value):
        return self.map(lambda x: x.substitute(var, value))

    def compose(self, images):
        """每个元素做同一个变量代换"""
        return self.map(lambda x: x.compose(images), images[0].nvars)

    def embed(self, nvars):
        return self.map(lambda x: x.embed(nvars), nvars)

    def restrict(self, nvars):
        return self.map(lambda x: x.restrict(nvars), nvars)

    # ---- 谓词 ----
    @property
    def is_constant(self):
        return all(x.is_constant for row in self._rows for x in row)

    def constant_values(self):
        return [[x.constant_value() for x in row] for row in self._rows]

    def is_identity_block(self):
        """形如 [I_r | 0]"""
        one = Polynomial.one(self.nvars)
        return all(
            x == (one if i == j else Polynomial.zero(self.nvars))
            for i, row in enumerate(self._rows) for j, x in enumerate(row)
        )


def determinant(a):
    if a.nrows != a.ncols:
        raise ShapeError(f"行列式要求方阵，实际为 {a.nrows}×{a.ncols}")
    return bareiss_determinant(a.rows(), a.nvars)


def signed_maximal_minors(a):
    """(ℓ+1)×ℓ 矩阵：第 i 个分量 = (−1)^{i+1}·det(删去第 i 行)，i 从 1 开始"""
    if a.ncols != a.nrows - 1:
        raise ShapeError(f"需要 (ℓ+1)×ℓ 矩阵，实际为 {a.nrows}×{a.ncols}")
    minors = []
    for i in range(a.nrows):
        minor = determinant(a.delete_row(i))
        minors.append(minor if i % 2 == 0 else -minor)
    return minors


def maximal_minors(a):
    """r×s（r ≤ s）矩阵的全部 r×r 子式，列组合按字典序"""
    if a.nrows > a.ncols:
        raise ShapeError(f"最大子式要求行数不超过列数，实际为 {a.nrows}×{a.ncols}")
    return [determinant(a.take_columns(cols)) for cols in combinations(range(a.ncols), a.nrows)]


def is_unimodular(a, with_certificate=False):
    """最大子式生成单位理想；with_certificate 时返回 (结果, Bézout 系数)"""
    if a.nrows > a.ncols:
        raise ShapeError(f"单模性要求 r ≤ s，实际为 {a.nrows}×{a.ncols}")
    minors = maximal_minors(a)
    bezout = is_unit_ideal(minors)
    if with_certificate:
        return bezout is not None, bezout
    return bezout is not None


def require_unimodular(a, label="矩阵"):
    ok, _ = is_unimodular(a, with_certificate=True)
    if not ok:
        raise NotUnimodularError(f"{label} 不是单模矩阵：最大子式不生成单位理想", maximal_minors(a))


def inverse_unimodular(u):
    """伴随矩阵除以常数行列式"""
    det = determinant(u)
    value = det.constant_value()
    if not value:
        raise SingularMatrixError("行列式不是非零常数，矩阵在多项式环上不可逆")
    size = u.nrows
    if size == 1:
        return PolyMatrix([[Polynomial.constant(1 / value, u.nvars)]], u.nvars)
    inv = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = determinant(u.submatrix(
                [k for k in range(size) if k != i], [k for k in range(size) if k != j]))
            cofactor = minor if (i + j) % 2 == 0 else -minor
            inv[j][i] = cofactor.scale(1 / value)
    return PolyMatrix(inv, u.nvars)


def matrix_degree(a):
    return max(x.total_degree() for row in a.rows() for x in row)


def column_degrees(a):
    return [max(x.total_degree() for x in col) for col in a.columns()]


def divide_matrix_exact(a, g):
    """每个元素都被 g 整除时返回商矩阵，否则返回 None"""
    out = []
    for row in a.rows():
        new_row = []
        for x in row:
            q = divide_exact(x, g)
            if q is None:
                return None
            new_row.append(q)
        out.append(new_row)
    return PolyMatrix(out, a.nvars)


def row_times_matrix(entries, a):
    return PolyMatrix.row_vector(entries) @ a


def serialize_matrix(a, variables):
    return "\n".join("; ".join(format_polynomial(x, variables) for x in row) for row in a.rows())


def parse_matrix(lines, variables, first_line=None):
    """逐行解析矩阵文本；first_line 是第一行在文件中的行号"""
    rows = []
    for offset, line in enumerate(lines):
        line_no = None if first_line is None else first_line + offset
        if not line.strip():
            continue
        rows.append([parse_polynomial(cell, variables, line_no) for cell in line.split(";")])
    return PolyMatrix(rows, len(variables))


def format_rows(a: PolyMatrix, variables: Sequence[str]) -> Optional[list]:
    return [[format_polynomial(x, variables) for x in row] for row in a.rows()]
