"""多元多项式（有理系数，稀疏表示）

环 R = Q[x_1, ..., x_n]。多项式是不可变值：项表 {指数元组: 非零 Fraction}。
所有运算都是纯函数，可以在多个线程间共享。
"""
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Optional, Sequence

from ..errors import (
    InexactDivisionError,
    SingularMatrixError,
    VariableMismatchError,
    VerificationError,
)
from .rational import rational_det, to_fraction

NEG_INF = float("-inf")  # 零多项式的次数


@dataclass(frozen=True)
class MonomialOrder:
    """单项式序：grevlex（默认）、lex、grlex，可选变量优先级排列"""

    kind: str = "grevlex"
    permutation: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "grlex"):
            raise ValueError(f"未知的单项式序: {self.kind}")

    def key(self, exponents):
        """排序键：键越大单项式越大"""
        if self.permutation is not None:
            exponents = tuple(exponents[i] for i in self.permutation)
        if self.kind == "lex":
            return tuple(exponents)
        degree = sum(exponents)
        if self.kind == "grlex":
            return (degree, tuple(exponents))
        return (degree, tuple(-e for e in reversed(exponents)))


DEFAULT_ORDER = MonomialOrder()


def _add_exponents(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


def _divides(small, big):
    return all(a <= b for a, b in zip(small, big))


class Polynomial:
    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms, nvars):
        clean = {}
        for exponents, coeff in dict(terms).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != nvars:
                raise VariableMismatchError(
                    f"单项式 {exponents} 的长度与变量个数 {nvars} 不一致"
                )
            if any(e < 0 for e in exponents):
                raise ValueError(f"指数必须非负: {exponents}")
            coeff = to_fraction(coeff)
            if coeff != 0:
                clean[exponents] = clean.get(exponents, Fraction(0)) + coeff
                if clean[exponents] == 0:
                    del clean[exponents]
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms, nvars):
        """内部构造：terms 已经是干净的 {tuple: Fraction}"""
        poly = cls.__new__(cls)
        poly._terms = {e: c for e, c in terms.items() if c != 0}
        poly.nvars = nvars
        poly._hash = None
        return poly

    # ---- 构造 ----
    @classmethod
    def zero(cls, nvars):
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, value, nvars):
        return cls._raw({(0,) * nvars: to_fraction(value)}, nvars)

    @classmethod
    def one(cls, nvars):
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, index, nvars):
        exponents = [0] * nvars
        exponents[index] = 1
        return cls._raw({tuple(exponents): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, exponents, coeff=1):
        return cls._raw({tuple(exponents): to_fraction(coeff)}, len(exponents))

    # ---- 基本属性 ----
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def is_zero(self):
        return not self._terms

    @property
    def is_constant(self):
        return all(sum(e) == 0 for e in self._terms)

    def constant_value(self):
        """常数多项式的值；非常数时返回 None"""
        if not self.is_constant:
            return None
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def degree_in(self, var):
        if not self._terms:
            return NEG_INF
        return max(e[var] for e in self._terms)

    def variables(self):
        """出现的变量下标集合"""
        used = set()
        for e in self._terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def sorted_terms(self, order=DEFAULT_ORDER):
        return sorted(self._terms.items(), key=lambda item: order.key(item[0]), reverse=True)

    def leading_monomial(self, order=DEFAULT_ORDER):
        if not self._terms:
            return None
        return max(self._terms, key=order.key)

    def leading_coeff(self, order=DEFAULT_ORDER):
        if not self._terms:
            return Fraction(0)
        return self._terms[self.leading_monomial(order)]

    def monic(self, order=DEFAULT_ORDER):
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coeff(order))

    # ---- 运算 ----
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise VariableMismatchError(
                    f"变量个数不一致: {self.nvars} 与 {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            value = out.get(e, 0) + c
            if value:
                out[e] = value
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Polynomial.zero(self.nvars)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exponents(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(out, self.nvars)

    __rmul__ = __mul__

    def scale(self, factor):
        factor = to_fraction(factor)
        if factor == 0:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({e: c * factor for e, c in self._terms.items()}, self.nvars)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"幂次必须是非负整数: {exponent}")
        result = Polynomial.one(self.nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        names = [f"x{i + 1}" for i in range(self.nvars)]
        return f"Polynomial({format_terms(self, names)})"

    # ---- 代入与变量变换 ----
    def evaluate(self, point):
        if len(point) != self.nvars:
            raise VariableMismatchError(f"求值点长度 {len(point)} 与变量个数 {self.nvars} 不一致")
        point = [to_fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for value, k in zip(point, e):
                if k:
                    term *= value ** k
            total += term
        return total

    def substitute(self, var, value):
        """把变量 var 换成有理数或多项式（partial_substitute）"""
        if isinstance(value, Polynomial):
            images = [Polynomial.variable(i, self.nvars) for i in range(self.nvars)]
            images[var] = self._coerce(value)
            return self.compose(images)
        value = to_fraction(value)
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            new_e = e[:var] + (0,) + e[var + 1:]
            out[new_e] = out.get(new_e, 0) + c * value ** k
        return Polynomial._raw(out, self.nvars)

    def compose(self, images):
        """每个变量 x_i 换成 images[i]，目标环由 images 决定"""
        if len(images) != self.nvars:
            raise VariableMismatchError(f"代入像的个数 {len(images)} 与变量个数 {self.nvars} 不一致")
        if not images:
            raise VariableMismatchError("零变量多项式无法确定目标环")
        target = images[0].nvars
        if any(img.nvars != target for img in images):
            raise VariableMismatchError("代入像的变量个数不一致")
        powers = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
            return powers[key]

        result = Polynomial.zero(target)
        for e, c in self._terms.items():
            term = Polynomial.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def linear_change(self, matrix, shift=None):
        """f(C·x + shift)，C 必须可逆"""
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise VariableMismatchError(f"坐标变换矩阵必须是 {n}×{n}")
        if rational_det(matrix) == 0:
            raise SingularMatrixError("坐标变换矩阵奇异")
        shift = shift or [0] * n
        images = []
        for i in range(n):
            terms = {}
            for j in range(n):
                coeff = to_fraction(matrix[i][j])
                if coeff:
                    e = [0] * n
                    e[j] = 1
                    terms[tuple(e)] = coeff
            if to_fraction(shift[i]):
                terms[(0,) * n] = to_fraction(shift[i])
            images.append(Polynomial._raw(terms, n))
        return self.compose(images)

    def embed(self, nvars):
        """放入有更多（尾部）变量的环"""
        if nvars < self.nvars:
            raise VariableMismatchError(f"不能把 {self.nvars} 元多项式嵌入 {nvars} 元环")
        pad = (0,) * (nvars - self.nvars)
        return Polynomial._raw({e + pad: c for e, c in self._terms.items()}, nvars)

    def restrict(self, nvars):
        """去掉尾部变量（这些变量必须不出现）"""
        out = {}
        for e, c in self._terms.items():
            if any(e[nvars:]):
                raise VariableMismatchError(f"多项式仍含有第 {nvars + 1} 个之后的变量")
            out[e[:nvars]] = c
        return Polynomial._raw(out, nvars)

    def coefficients_in(self, var):
        """按变量 var 展开: {次数: 系数多项式（不含 var）}"""
        groups = {}
        for e, c in self._terms.items():
            k = e[var]
            rest = e[:var] + (0,) + e[var + 1:]
            groups.setdefault(k, {})[rest] = c
        return {k: Polynomial._raw(t, self.nvars) for k, t in groups.items()}

    def leading_coeff_in(self, var):
        if not self._terms:
            return Polynomial.zero(self.nvars)
        return self.coefficients_in(var)[self.degree_in(var)]


def ring_ops_check(f, g):
    """确认两个多项式在同一个环里"""
    if f.nvars != g.nvars:
        raise VariableMismatchError(f"变量个数不一致: {f.nvars} 与 {g.nvars}")


def total_degree(f):
    return f.total_degree()


def evaluate(f, point):
    return f.evaluate(point)


def partial_substitute(f, var, value):
    return f.substitute(var, value)


def linear_change(f, matrix, shift=None):
    return f.linear_change(matrix, shift)


def variable_power(var, k, nvars):
    e = [0] * nvars
    e[var] = k
    return Polynomial.monomial(e)


# ---- 除法 ----
def reduce(f, divisors, order=DEFAULT_ORDER):
    """多元带余除法: f = Σ quotients_i·divisors_i + remainder，余式不能再被任何首项整除"""
    n = f.nvars
    for g in divisors:
        ring_ops_check(f, g)
    active = [(i, g.leading_monomial(order), g.leading_coeff(order), g)
              for i, g in enumerate(divisors) if not g.is_zero]
    quotients = [dict() for _ in divisors]
    remainder = {}
    p = dict(f.terms)
    key = order.key
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for i, g_lm, g_lc, g in active:
            if _divides(g_lm, lm):
                shift = tuple(a - b for a, b in zip(lm, g_lm))
                factor = lc / g_lc
                quotients[i][shift] = quotients[i].get(shift, 0) + factor
                for e, c in g.terms.items():
                    target = _add_exponents(e, shift)
                    value = p.get(target, 0) - factor * c
                    if value:
                        p[target] = value
                    else:
                        p.pop(target, None)
                break
        else:
            remainder[lm] = lc
            del p[lm]
    return [Polynomial._raw(q, n) for q in quotients], Polynomial._raw(remainder, n)


def divide_exact(f, g, order=DEFAULT_ORDER):
    """整除时返回商，否则返回 None"""
    ring_ops_check(f, g)
    if g.is_zero:
        raise ZeroDivisionError("除数是零多项式")
    value = g.constant_value()
    if value is not None:
        return f.scale(1 / value)
    quotients, remainder = reduce(f, [g], order)
    if remainder.is_zero:
        return quotients[0]
    return None


def _exact(f, g):
    q = divide_exact(f, g)
    if q is None:
        raise InexactDivisionError(f"{g!r} 不整除 {f!r}")
    return q


# ---- gcd ----
def pseudo_remainder(f, g, var):
    dg = g.degree_in(var)
    if dg == NEG_INF:
        raise ZeroDivisionError("伪除法的除数是零多项式")
    lc = g.leading_coeff_in(var)
    r = f
    while not r.is_zero and r.degree_in(var) >= dg:
        dr = r.degree_in(var)
        lr = r.leading_coeff_in(var)
        r = lc * r - lr * variable_power(var, dr - dg, f.nvars) * g
    return r


def content_in(f, var):
    """f 看作 var 的一元多项式时各系数的 gcd（首项系数为 1）"""
    content = None
    for coeff in f.coefficients_in(var).values():
        content = coeff if content is None else _gcd(content, coeff)
        if content.is_constant:
            return Polynomial.one(f.nvars)
    return content.monic() if content is not None else Polynomial.zero(f.nvars)


def primitive_part_in(f, var):
    if f.is_zero:
        return f
    return _exact(f, content_in(f, var))


def _gcd(f, g):
    """两个非零多项式的 gcd（相差一个非零常数）"""
    n = f.nvars
    if f.is_constant or g.is_constant:
        return Polynomial.one(n)
    candidates = f.variables() | g.variables()
    var = max(candidates, key=lambda i: (max(f.degree_in(i), g.degree_in(i)), -i))
    if f.degree_in(var) == 0:
        return _gcd(f, content_in(g, var))
    if g.degree_in(var) == 0:
        return _gcd(content_in(f, var), g)
    cf, cg = content_in(f, var), content_in(g, var)
    c = _gcd(cf, cg)
    a, b = _exact(f, cf), _exact(g, cg)
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    while not b.is_zero and b.degree_in(var) > 0:
        r = pseudo_remainder(a, b, var)
        a, b = b, primitive_part_in(r, var)
    head = a if b.is_zero else Polynomial.one(n)
    return c * head


def multivariate_gcd(f, g, order=DEFAULT_ORDER):
    """gcd，首项系数（默认序下）归一为 1；gcd(f, 0) = f 归一化"""
    ring_ops_check(f, g)
    if f.is_zero:
        return g.monic(order)
    if g.is_zero:
        return f.monic(order)
    return _gcd(f, g).monic(order)


# ---- 行列式与结式 ----
def bareiss_determinant(rows, nvars):
    """Bareiss 无分式消元求行列式，rows 是多项式二维列表"""
    size = len(rows)
    if size == 0:
        return Polynomial.one(nvars)
    if size == 1:
        return rows[0][0]
    if size == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    a = [list(row) for row in rows]
    sign = 1
    prev = Polynomial.one(nvars)
    for k in range(size - 1):
        if a[k][k].is_zero:
            pivot = next((i for i in range(k + 1, size) if not a[i][k].is_zero), None)
            if pivot is None:
                return Polynomial.zero(nvars)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                numerator = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exact(numerator, prev) if k else numerator
        prev = a[k][k]
    det = a[size - 1][size - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f, g, var):
    df, dg = f.degree_in(var), g.degree_in(var)
    size = df + dg
    zero = Polynomial.zero(f.nvars)
    cf, cg = f.coefficients_in(var), g.coefficients_in(var)
    rows = []
    for i in range(dg):
        row = [zero] * size
        for k, coeff in cf.items():
            row[size - 1 - (k + dg - 1 - i)] = coeff
        rows.append(row)
    for i in range(df):
        row = [zero] * size
        for k, coeff in cg.items():
            row[size - 1 - (k + df - 1 - i)] = coeff
        rows.append(row)
    return rows


def resultant(f, g, var):
    """关于变量 var 的 Sylvester 结式

    退化约定：两者关于 var 都是常数时结式为 1；恰有一个是常数 c 时为 c^{另一个的次数}；
    零多项式与非常数多项式的结式为 0。
    """
    ring_ops_check(f, g)
    if f.is_zero and g.is_zero:
        raise ValueError("两个参数都是零多项式，结式无定义")
    df, dg = f.degree_in(var), g.degree_in(var)
    if df <= 0 and dg <= 0:
        return Polynomial.one(f.nvars)
    if df <= 0:
        return f ** dg
    if dg <= 0:
        return g ** df
    return bareiss_determinant(sylvester_matrix(f, g, var), f.nvars)


def resultant_with_cofactors(f, g, var):
    """返回 (res, u, v)，满足 u·f + v·g = res = Res_var(f, g)"""
    ring_ops_check(f, g)
    n = f.nvars
    df, dg = f.degree_in(var), g.degree_in(var)
    if df < 1 and dg < 1:
        raise ValueError("两个多项式关于该变量都是常数，没有 Bézout 型结式证书")
    zero = Polynomial.zero(n)
    if df < 1:
        return f ** dg, f ** (dg - 1), zero
    if dg < 1:
        return g ** df, zero, g ** (df - 1)
    rows = sylvester_matrix(f, g, var)
    size = df + dg
    res = bareiss_determinant(rows, n)
    u, v = zero, zero
    for i in range(size):
        minor = [row[:-1] for k, row in enumerate(rows) if k != i]
        cofactor = bareiss_determinant(minor, n)
        if (i + size - 1) % 2:
            cofactor = -cofactor
        if i < dg:
            u = u + cofactor * variable_power(var, dg - 1 - i, n)
        else:
            v = v + cofactor * variable_power(var, df - 1 - (i - dg), n)
    if u * f + v * g != res:
        raise VerificationError("结式余因子校验失败")
    return res, u, v


# ---- 文本表示 ----
def _format_coeff(c):
    if c.denominator == 1:
        return str(abs(c.numerator))
    return f"{abs(c.numerator)}/{c.denominator}"


def format_terms(f, variables: Sequence[str], order=DEFAULT_ORDER):
    """按默认序降序输出，例如 `3*s^2 - 4*s + 4*t + 11`"""
    if f.is_zero:
        return "0"
    pieces = []
    for exponents, coeff in f.sorted_terms(order):
        factors = []
        for name, k in zip(variables, exponents):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        magnitude = _format_coeff(coeff)
        if not factors:
            body = magnitude
        elif magnitude == "1":
            body = "*".join(factors)
        else:
            body = "*".join([magnitude] + factors)
        sign = "-" if coeff < 0 else "+"
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)
