"""实例文件与矩阵文件

实例文件按行书写，`#` 之后是注释：

    vars: s t
    a1: 11 - 4*s + 3*s^2 + 4*t
    a2: ...
    p: t - s + 2
    q: s^2 + 1
    M:
        4; t - s + 2; s^2; 3
        3; 1; 1; 1
    zero_dimensional: true

生成元也可以写成 `a:` 块（每个缩进行一个多项式）。矩阵块的每个缩进行是一行，元素用 `;` 分隔。
矩阵文件只有矩阵行，变量取自实例文件。
"""
import re
from dataclasses import dataclass, field
from itertools import count
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..algebra.parsing import format_polynomial, parse_polynomial
from ..algebra.polymat import parse_matrix
from ..errors import InputError, ParseError, ShapeError
from ..syzygy import Grade2Instance

_HEADER = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.*)$")
_GENERATOR = re.compile(r"^a(\d+)$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
BLOCKS = ("a", "M", "N")
SCALARS = ("vars", "p", "q", "zero_dimensional")
INDENT = "    "


@dataclass
class InstanceFile:
    variables: Tuple[str, ...]
    a: List[str]
    p: str
    q: str
    M: Optional[List[List[str]]] = None
    N: Optional[List[List[str]]] = None
    zero_dimensional: bool = False
    positions: Dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def n(self):
        return len(self.variables)

    @property
    def m(self):
        return len(self.a)

    def _parse(self, text, key):
        return parse_polynomial(text, self.variables, self.positions.get(key))

    def _matrix(self, rows, key):
        first = self.positions.get(key)
        return parse_matrix(["; ".join(row) for row in rows], self.variables, first)

    def to_instance(self):
        return Grade2Instance(
            variables=tuple(self.variables),
            a=tuple(self._parse(x, f"a{i + 1}") for i, x in enumerate(self.a)),
            p=self._parse(self.p, "p"),
            q=self._parse(self.q, "q"),
            M=self._matrix(self.M, "M") if self.M else None,
            N=self._matrix(self.N, "N") if self.N else None,
            zero_dimensional=self.zero_dimensional,
        )

    @classmethod
    def from_instance(cls, instance):
        names = instance.variables

        def rows(matrix):
            if matrix is None:
                return None
            return [[format_polynomial(x, names) for x in row] for row in matrix.rows()]

        return cls(
            variables=tuple(names),
            a=[format_polynomial(x, names) for x in instance.a],
            p=format_polynomial(instance.p, names),
            q=format_polynomial(instance.q, names),
            M=rows(instance.M),
            N=rows(instance.N),
            zero_dimensional=instance.zero_dimensional,
        )


def _strip_comment(line):
    return line.split("#", 1)[0].rstrip()


def _parse_bool(value, line_no):
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ParseError(f"布尔值只能是 true 或 false: {value!r}", line_no, 1)


def _parse_variables(value, line_no):
    names = [x for x in re.split(r"[\s,]+", value.strip()) if x]
    if not names:
        raise ParseError("vars 不能为空", line_no, 1)
    for name in names:
        if not _NAME.match(name):
            raise ParseError(f"非法的变量名: {name!r}", line_no, 1)
    if len(set(names)) != len(names):
        raise ParseError("变量名重复", line_no, 1)
    return tuple(names)


def _collect(text):
    """把文本切成 {key: (行号, 值或块行列表)}"""
    entries = {}
    block = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if line[0] in " \t":
            if block is None:
                raise ParseError("缩进行不属于任何矩阵块或 a: 块", line_no, 1)
            entries[block][1].append((line_no, line.strip()))
            continue
        match = _HEADER.match(line)
        if not match:
            raise ParseError(f"无法识别的行: {line.strip()!r}", line_no, 1)
        key, value = match.group(1), match.group(2).strip()
        if key in entries:
            raise ParseError(f"重复的字段: {key}", line_no, 1)
        if key in BLOCKS:
            if value:
                raise ParseError(f"{key}: 块的内容要写在后面的缩进行里", line_no, len(key) + 2)
            entries[key] = (line_no, [])
            block = key
        elif key in SCALARS or _GENERATOR.match(key):
            entries[key] = (line_no, value)
            block = None
        else:
            raise ParseError(f"未知的字段: {key}", line_no, 1)
    return entries


def _generators(entries):
    numbered = sorted(
        (int(_GENERATOR.match(k).group(1)), k) for k in entries if _GENERATOR.match(k))
    if numbered and "a" in entries:
        raise ParseError("a: 块与 a1: … 写法不能混用", entries["a"][0], 1)
    if "a" in entries:
        rows = entries["a"][1]
        return [value for _, value in rows], {f"a{i + 1}": no for i, (no, _) in enumerate(rows)}
    numbers = [k for k, _ in numbered]
    if numbers != list(range(1, len(numbers) + 1)):
        missing = next(i for i in count(1) if i not in numbers)
        raise ParseError(f"生成元必须从 a1 连续编号，缺少 a{missing}", entries[numbered[-1][1]][0], 1)
    values = [entries[k][1] for _, k in numbered]
    positions = {k: entries[k][0] for _, k in numbered}
    return values, positions


def _matrix_rows(entries, key, shape):
    if key not in entries:
        return None
    line_no, rows = entries[key]
    if not rows:
        raise ParseError(f"{key}: 块是空的", line_no, 1)
    cells = [[cell.strip() for cell in value.split(";")] for _, value in rows]
    nrows, ncols = shape
    if len(cells) != nrows:
        raise ShapeError(f"第 {line_no} 行: {key} 必须是 {nrows}×{ncols}，实际有 {len(cells)} 行")
    for (row_no, _), row in zip(rows, cells):
        if len(row) != ncols:
            raise ShapeError(f"第 {row_no} 行: {key} 必须是 {nrows}×{ncols}，这一行有 {len(row)} 列")
    return cells


def parse_instance(text):
    """解析实例文本并校验（多项式可解析、矩阵形状正确、m ≥ 2）"""
    entries = _collect(text)
    for key in ("vars", "p", "q"):
        if key not in entries:
            raise ParseError(f"缺少字段: {key}")
    variables = _parse_variables(entries["vars"][1], entries["vars"][0])
    a, positions = _generators(entries)
    if len(a) < 2:
        raise ShapeError("at least two generators required（至少需要两个生成元）")
    m = len(a)
    positions.update({key: entries[key][0] for key in ("p", "q", "M", "N") if key in entries})
    # 矩阵块的第一行才是数据所在行
    for key in ("M", "N"):
        if key in entries and entries[key][1]:
            positions[key] = entries[key][1][0][0]
    zero_dim = False
    if "zero_dimensional" in entries:
        line_no, value = entries["zero_dimensional"]
        zero_dim = _parse_bool(value, line_no)

    result = InstanceFile(
        variables=variables,
        a=a,
        p=entries["p"][1],
        q=entries["q"][1],
        M=_matrix_rows(entries, "M", (2, m)),
        N=_matrix_rows(entries, "N", (m, 2)),
        zero_dimensional=zero_dim,
        positions=positions,
    )
    result.to_instance()
    return result


def format_instance(data):
    """输出能被 parse_instance 读回的文本"""
    lines = [f"vars: {' '.join(data.variables)}"]
    lines += [f"a{i + 1}: {value}" for i, value in enumerate(data.a)]
    lines += [f"p: {data.p}", f"q: {data.q}"]
    for key, rows in (("M", data.M), ("N", data.N)):
        if rows:
            lines.append(f"{key}:")
            lines += [INDENT + "; ".join(row) for row in rows]
    if data.zero_dimensional:
        lines.append("zero_dimensional: true")
    return "\n".join(lines) + "\n"


def parse_matrix_text(text, variables):
    """矩阵文件：每行一行，`;` 分隔，`#` 注释"""
    lines = [_strip_comment(line) for line in text.splitlines()]
    if not any(line.strip() for line in lines):
        raise ParseError("矩阵文件是空的")
    return parse_matrix(lines, variables, 1)


def _read(path):
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"文件不存在: {path}")
    except UnicodeDecodeError as e:
        raise InputError(f"文件不是 UTF-8 文本: {path} ({e})")


def load_instance(path):
    return parse_instance(_read(path))


def load_matrix(path, variables):
    return parse_matrix_text(_read(path), variables)
