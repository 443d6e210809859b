"""输入实例与结果类型"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

from ..algebra.poly import Polynomial
from ..algebra.polymat import PolyMatrix, matrix_degree
from ..errors import ShapeError, VariableMismatchError


class Strategy(Enum):
    VIA_TILDE_M = "tilde-m"
    VIA_M = "m"
    VIA_N = "n"
    UNIT_IDEAL = "unit-ideal"
    AUTO = "auto"

    @classmethod
    def parse(cls, value):
        if isinstance(value, Strategy):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(s.value for s in cls if s is not cls.UNIT_IDEAL)
            raise ValueError(f"未知的策略: {value}（可选: {choices}）")


class AlignmentStatus(Enum):
    ALIGNED = "aligned"
    MISMATCH = "mismatch"
    SKIPPED = "skipped"


def clamp_degree(value):
    return max(value, 0) if value != float("-inf") else 0


@dataclass(frozen=True)
class Grade2Instance:
    variables: Tuple[str, ...]
    a: Tuple[Polynomial, ...]
    p: Polynomial
    q: Polynomial
    M: Optional[PolyMatrix] = None
    N: Optional[PolyMatrix] = None
    zero_dimensional: bool = False

    def __post_init__(self):
        nvars = len(self.variables)
        for poly in list(self.a) + [self.p, self.q]:
            if poly.nvars != nvars:
                raise VariableMismatchError(f"多项式的变量个数 {poly.nvars} 与声明的 {nvars} 不一致")
        if len(self.a) < 2:
            raise ShapeError("at least two generators required（至少需要两个生成元）")
        if self.M is not None and self.M.shape != (2, self.m):
            raise ShapeError(f"M 必须是 2×{self.m}，实际为 {self.M.nrows}×{self.M.ncols}")
        if self.N is not None and self.N.shape != (self.m, 2):
            raise ShapeError(f"N 必须是 {self.m}×2，实际为 {self.N.nrows}×{self.N.ncols}")

    @property
    def n(self):
        return len(self.variables)

    @property
    def m(self):
        return len(self.a)

    @property
    def delta_0(self):
        return clamp_degree(max(self.p.total_degree(), self.q.total_degree()))

    @property
    def delta_a(self):
        return clamp_degree(max(f.total_degree() for f in self.a))

    def a_row(self):
        return PolyMatrix.row_vector(self.a)

    def pq_row(self):
        return PolyMatrix.row_vector([self.p, self.q])

    def with_generators(self, a, p, q):
        return replace(self, a=tuple(a), p=p, q=q)


@dataclass(frozen=True)
class ConversionPair:
    """(p q)·M = (a)，(a)·N = (p q)，K = M·N = [[1−eq, fq], [ep, 1−fp]]"""

    M: PolyMatrix
    N: PolyMatrix
    K: PolyMatrix
    e: Polynomial
    f: Polynomial

    @property
    def is_orthogonal(self):
        """M·N = I₂"""
        return self.K == PolyMatrix.identity(2, self.K.nvars)

    def det_K(self, p, q):
        """det(M·N) = 1 − e·q − f·p"""
        return Polynomial.one(p.nvars) - self.e * q - self.f * p

    @property
    def delta_M(self):
        return clamp_degree(matrix_degree(self.M))

    @property
    def delta_N(self):
        return clamp_degree(matrix_degree(self.N))


@dataclass(frozen=True)
class BoundCheck:
    formula: str
    value: int
    satisfied: bool


@dataclass(frozen=True)
class VerificationReport:
    syzygy_ok: Tuple[bool, ...]
    minors_ok: bool
    unit: Optional[object]  # Fraction
    degrees: Tuple[int, ...]
    bound_comparisons: Tuple[BoundCheck, ...] = ()

    @property
    def degree(self):
        return max(self.degrees) if self.degrees else 0

    @property
    def ok(self):
        return all(self.syzygy_ok) and self.minors_ok and all(b.satisfied for b in self.bound_comparisons)

    def with_bounds(self, table):
        """追加 (id, value) 形式的上界比较，重复的 id 只保留第一次"""
        seen = {b.formula for b in self.bound_comparisons}
        extra = tuple(
            BoundCheck(formula, value, self.degree <= value)
            for formula, value in table if formula not in seen
        )
        return replace(self, bound_comparisons=self.bound_comparisons + extra)


@dataclass(frozen=True)
class SyzygyBasis:
    B: PolyMatrix
    strategy: Strategy
    certificate: Optional[object]  # CompletionCertificate
    verification: VerificationReport
    notes: List[str] = field(default_factory=list)

    @property
    def degree(self):
        return clamp_degree(matrix_degree(self.B))

    def with_verification(self, report):
        return replace(self, verification=report)
