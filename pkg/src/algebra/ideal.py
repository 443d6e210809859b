"""理想运算：带余因子跟踪的 Buchberger 算法

每个 Gröbner 基元素都记录它在输入生成元下的表示，所以成员判定、单位理想判定
都能给出可以直接展开验证的证书。
"""
import time
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from ..errors import InputError, VerificationError
from ..utils.logger import logger
from .poly import DEFAULT_ORDER, MonomialOrder, Polynomial, multivariate_gcd, reduce


@dataclass(frozen=True)
class GroebnerBasis:
    """约化 Gröbner 基；cofactors[i][j] 是第 j 个基元素中 generators[i] 的系数"""

    generators: Tuple[Polynomial, ...]
    basis: Tuple[Polynomial, ...]
    cofactors: Tuple[Tuple[Polynomial, ...], ...]
    order: MonomialOrder = DEFAULT_ORDER

    @property
    def is_unit(self):
        return len(self.basis) == 1 and self.basis[0].is_constant and not self.basis[0].is_zero

    def cofactor_column(self, j):
        return [row[j] for row in self.cofactors]

    def reduce(self, f):
        return reduce(f, list(self.basis), self.order)

    def certificate(self, f):
        """f = Σ coefficients_i·generators_i + remainder"""
        quotients, remainder = self.reduce(f)
        nvars = f.nvars
        coefficients = []
        for row in self.cofactors:
            total = Polynomial.zero(nvars)
            for q, t in zip(quotients, row):
                if not q.is_zero and not t.is_zero:
                    total = total + q * t
            coefficients.append(total)
        return MembershipCertificate(coefficients, remainder)

    def represent(self, f):
        cert = self.certificate(f)
        if not cert.remainder.is_zero:
            return None
        return cert.coefficients


@dataclass(frozen=True)
class MembershipCertificate:
    coefficients: List[Polynomial]
    remainder: Polynomial


class GradeKind(Enum):
    GRADE_TWO = "grade_two"
    UNIT_IDEAL = "unit_ideal"
    COMMON_FACTOR = "common_factor"


@dataclass(frozen=True)
class GradeCheck:
    kind: GradeKind
    factor: Optional[Polynomial] = None
    bezout: Optional[List[Polynomial]] = None


def _lcm_exponents(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _combine(vectors_with_factors, length, nvars):
    """Σ factor·vector，向量按分量相加"""
    out = [Polynomial.zero(nvars) for _ in range(length)]
    for factor, vector in vectors_with_factors:
        if factor.is_zero:
            continue
        for i, v in enumerate(vector):
            if not v.is_zero:
                out[i] = out[i] + factor * v
    return out


def _divides(small, big):
    return all(a <= b for a, b in zip(small, big))


def buchberger_cofactors(gens, order=DEFAULT_ORDER):
    """扩展 Buchberger：返回约化 Gröbner 基以及每个基元素的余因子"""
    gens = list(gens)
    if not gens:
        raise InputError("生成元列表不能为空")
    nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise InputError("生成元的变量个数不一致")
    start = time.time()
    count = len(gens)

    def unit_vector(i, value):
        vec = [Polynomial.zero(nvars) for _ in range(count)]
        vec[i] = Polynomial.constant(value, nvars)
        return vec

    # 工作集：(多项式, 余因子向量)，多项式都是首一的
    basis = []
    for i, g in enumerate(gens):
        if g.is_zero:
            continue
        lc = g.leading_coeff(order)
        basis.append((g.scale(1 / lc), unit_vector(i, 1 / lc)))

    def unit_result(poly, vector):
        value = poly.constant_value()
        one = Polynomial.one(nvars)
        vec = [v.scale(1 / value) for v in vector]
        return GroebnerBasis(tuple(gens), (one,), tuple((v,) for v in vec), order)

    for poly, vector in basis:
        if poly.is_constant:
            return unit_result(poly, vector)

    def lm(k):
        return basis[k][0].leading_monomial(order)

    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    done = set()
    while pairs:
        pairs.sort(key=lambda ij: order.key(_lcm_exponents(lm(ij[0]), lm(ij[1]))))
        i, j = pairs.pop(0)
        done.add((i, j))
        lm_i, lm_j = lm(i), lm(j)
        lcm = _lcm_exponents(lm_i, lm_j)
        # 乘积判别法
        if all(a == 0 or b == 0 for a, b in zip(lm_i, lm_j)):
            continue
        # 链判别法
        if any(
            k not in (i, j) and _divides(lm(k), lcm)
            and (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done
            for k in range(len(basis))
        ):
            continue
        (f_i, v_i), (f_j, v_j) = basis[i], basis[j]
        m_i = Polynomial.monomial(tuple(a - b for a, b in zip(lcm, lm_i)))
        m_j = Polynomial.monomial(tuple(a - b for a, b in zip(lcm, lm_j)))
        s_poly = m_i * f_i - m_j * f_j
        quotients, remainder = reduce(s_poly, [b[0] for b in basis], order)
        if remainder.is_zero:
            continue
        terms = [(m_i, v_i), (-m_j, v_j)]
        terms += [(-q, basis[k][1]) for k, q in enumerate(quotients)]
        vector = _combine(terms, count, nvars)
        if remainder.is_constant:
            logger.debug(f"Gröbner 基计算中出现常数，理想是单位理想 ({time.time() - start:.3f}秒)")
            return unit_result(remainder, vector)
        lc = remainder.leading_coeff(order)
        basis.append((remainder.scale(1 / lc), [v.scale(1 / lc) for v in vector]))
        new = len(basis) - 1
        pairs.extend((k, new) for k in range(new))

    # 极小化：去掉首项能被其他元素首项整除的元素
    minimal = []
    for k, (poly, vector) in enumerate(basis):
        lm_k = poly.leading_monomial(order)
        redundant = any(
            other != k and _divides(basis[other][0].leading_monomial(order), lm_k)
            and (basis[other][0].leading_monomial(order) != lm_k or other < k)
            for other in range(len(basis))
        )
        if not redundant:
            minimal.append((poly, vector))

    # 互约化
    reduced = []
    for k, (poly, vector) in enumerate(minimal):
        others = [b[0] for idx, b in enumerate(minimal) if idx != k]
        quotients, remainder = reduce(poly, others, order)
        other_vectors = [b[1] for idx, b in enumerate(minimal) if idx != k]
        vector = _combine([(Polynomial.one(nvars), vector)]
                          + [(-q, v) for q, v in zip(quotients, other_vectors)], count, nvars)
        reduced.append((remainder, vector))
    reduced.sort(key=lambda item: order.key(item[0].leading_monomial(order)), reverse=True)

    polys = tuple(p for p, _ in reduced)
    cofactors = tuple(tuple(v[i] for _, v in reduced) for i in range(count))
    logger.debug(f"Gröbner 基: {len(gens)} 个生成元 -> {len(polys)} 个基元素 ({time.time() - start:.3f}秒)")
    return GroebnerBasis(tuple(gens), polys, cofactors, order)


def check_groebner_cofactors(gb):
    """逐个展开 basis_j = Σ generators_i·T_ij"""
    for j, b in enumerate(gb.basis):
        total = Polynomial.zero(b.nvars)
        for g, t in zip(gb.generators, gb.cofactor_column(j)):
            total = total + g * t
        if total != b:
            raise VerificationError(f"Gröbner 基第 {j + 1} 个元素的余因子展开不成立")
    return True


def represent_in_ideal(f, gens, order=DEFAULT_ORDER):
    """f ∈ ⟨gens⟩ 时返回系数 c（f = Σ c_i·gens_i），否则返回 None"""
    if f.is_zero:
        return [Polynomial.zero(f.nvars) for _ in gens]
    if all(g.is_zero for g in gens):
        return None
    return buchberger_cofactors(gens, order).represent(f)


def is_unit_ideal(gens, order=DEFAULT_ORDER):
    """理想是整个环时返回 Bézout 系数 b（1 = Σ b_i·gens_i），否则返回 None"""
    gens = list(gens)
    if not gens:
        raise InputError("生成元列表不能为空")
    nvars = gens[0].nvars
    for i, g in enumerate(gens):
        value = g.constant_value()
        if value:
            coeffs = [Polynomial.zero(nvars) for _ in gens]
            coeffs[i] = Polynomial.constant(1 / value, nvars)
            return coeffs
    if all(g.is_zero for g in gens):
        return None
    gb = buchberger_cofactors(gens, order)
    if not gb.is_unit:
        return None
    return gb.cofactor_column(0)


def ideal_equal(gens_a, gens_b, order=DEFAULT_ORDER):
    """两个理想相等当且仅当两个方向的包含都成立"""
    gens_a, gens_b = list(gens_a), list(gens_b)
    nvars = {g.nvars for g in gens_a + gens_b}
    if len(nvars) > 1:
        raise InputError("两组生成元的变量个数不一致")

    def contained(small, big):
        if all(g.is_zero for g in small):
            return True
        if all(g.is_zero for g in big):
            return False
        gb = buchberger_cofactors(big, order)
        return all(gb.reduce(g)[1].is_zero for g in small)

    return contained(gens_a, gens_b) and contained(gens_b, gens_a)


def grade_two_check(p, q):
    """判断 ⟨p, q⟩ 是否是 grade 2 理想"""
    if p.is_zero and q.is_zero:
        raise InputError("p 与 q 不能同时为零")
    bezout = is_unit_ideal([p, q])
    if bezout is not None:
        return GradeCheck(GradeKind.UNIT_IDEAL, bezout=bezout)
    g = multivariate_gcd(p, q)
    if not g.is_constant:
        return GradeCheck(GradeKind.COMMON_FACTOR, factor=g)
    return GradeCheck(GradeKind.GRADE_TWO)
