"""完整流程：校验输入 -> 转换矩阵 -> 按策略构造基 -> 校验与上界比较

策略优先级与故障转移：N 不是单模矩阵时先搜索单模的 N′；auto 先走 N 路线，
找不到单模 N′ 或补全重试耗尽时切换到 M̃ 路线。
"""
import time
from itertools import combinations

from ..algebra.ideal import GradeKind, grade_two_check, ideal_equal
from ..algebra.poly import divide_exact
from ..algebra.polymat import is_unimodular
from ..bounds.formulas import BoundFormula, budget_for_instance, evaluate_bound
from ..errors import (
    CommonFactorError,
    IdealMismatchError,
    InexactDivisionError,
    NotUnimodularError,
    RetryExhaustedError,
    VerificationError,
)
from ..utils.logger import logger
from .conversion import derive_conversion, make_unimodular_M, unimodular_conversion
from .instance import Strategy
from .strategies import basis_via_M, basis_via_N, basis_via_tilde_M, unit_ideal_basis
from .verification import bases_equivalent

CROSS_CHECK_ORDER = (Strategy.VIA_N, Strategy.VIA_TILDE_M, Strategy.VIA_M)


def strip_common_factor(instance, factor):
    """a、p、q 同时除以 gcd(p, q)，合冲模不变"""
    def divide(poly, name):
        quotient = divide_exact(poly, factor)
        if quotient is None:
            raise InexactDivisionError(f"{name} 不能被公因子 {factor} 整除，输入不满足 ⟨a⟩ = ⟨p, q⟩")
        return quotient

    a = [divide(x, f"a{i + 1}") for i, x in enumerate(instance.a)]
    return instance.with_generators(a, divide(instance.p, "p"), divide(instance.q, "q"))


def prepare_instance(instance, strip_gcd=False):
    """返回 (处理后的实例, GradeKind)"""
    check = grade_two_check(instance.p, instance.q)
    if check.kind is GradeKind.COMMON_FACTOR:
        if not strip_gcd:
            raise CommonFactorError(check.factor)
        logger.warning(f"⚠️ p、q 有公因子 {check.factor}，已从 a、p、q 中约去")
        instance = strip_common_factor(instance, check.factor)
        check = grade_two_check(instance.p, instance.q)
    if not ideal_equal(instance.a, [instance.p, instance.q]):
        raise IdealMismatchError("⟨a₁, …, a_m⟩ ≠ ⟨p, q⟩")
    return instance, check.kind


def _mtt_bounds(instance, report):
    table = []
    budget = budget_for_instance(instance)
    table.append((BoundFormula.MTT_1.value, evaluate_bound(BoundFormula.MTT_1, budget)))
    if instance.zero_dimensional:
        table.append((BoundFormula.MTT_2.value, evaluate_bound(BoundFormula.MTT_2, budget)))
    return report.with_bounds(table)


def _dispatch(instance, pair, strategy, seed):
    p, q = instance.p, instance.q
    if strategy is Strategy.VIA_TILDE_M:
        return basis_via_tilde_M(instance, pair.M, seed)
    if strategy is Strategy.VIA_M:
        M = pair.M
        if not is_unimodular(M):
            logger.warning("⚠️ M 不是单模矩阵，改用 M′ = M + [q·xᵀ; −p·xᵀ]")
            pair = unimodular_conversion(instance.a, p, q, pair, seed)
            M = make_unimodular_M(pair, p, q, seed)
        return basis_via_M(instance, M, seed)
    if strategy is Strategy.VIA_N:
        return basis_via_N(instance, unimodular_conversion(instance.a, p, q, pair, seed), seed)
    # auto
    try:
        pair = unimodular_conversion(instance.a, p, q, pair, seed)
        return basis_via_N(instance, pair, seed)
    except (RetryExhaustedError, NotUnimodularError) as e:
        logger.warning(f"⚠️ N 路线无法完成（{e}），切换到 M̃ 路线")
        return basis_via_tilde_M(instance, pair.M, seed)


def compute_syzygy_basis(instance, strategy=Strategy.AUTO, seed=0, strip_gcd=False):
    """计算并校验 Syz(a₁, …, a_m) 的基"""
    strategy = Strategy.parse(strategy)
    start = time.time()
    logger.info(f"开始计算合冲模基: n={instance.n}, m={instance.m}, 策略 {strategy.value}, 种子 {seed}")
    instance, kind = prepare_instance(instance, strip_gcd)
    if kind is GradeKind.UNIT_IDEAL:
        logger.info("⟨p, q⟩ 是单位理想，直接对 (a) 做补全")
        return unit_ideal_basis(instance, seed)
    if strategy is Strategy.UNIT_IDEAL:
        raise IdealMismatchError("⟨p, q⟩ 不是单位理想，不能使用 unit-ideal 策略")

    pair = derive_conversion(instance.a, instance.p, instance.q, instance.M, instance.N)
    logger.debug(f"e = {pair.e}, f = {pair.f}, M·N = I₂: {pair.is_orthogonal}")
    basis = _dispatch(instance, pair, strategy, seed)

    report = _mtt_bounds(instance, basis.verification)
    failed = [b.formula for b in report.bound_comparisons if not b.satisfied]
    if failed:
        logger.warning(f"⚠️ 基的次数 {report.degree} 超出上界 {failed}")
    logger.info(f"✅ 合冲模基计算完成，总耗时 {time.time() - start:.3f}秒")
    return basis.with_verification(report)


def cross_check_strategies(instance, seed=0, strip_gcd=False):
    """三种策略逐个运行，返回 ({策略: 基}, {(策略, 策略): 基变换行列式})"""
    results = {}
    for strategy in CROSS_CHECK_ORDER:
        try:
            results[strategy] = compute_syzygy_basis(instance, strategy, seed, strip_gcd)
        except (RetryExhaustedError, NotUnimodularError) as e:
            logger.warning(f"⚠️ 策略 {strategy.value} 失败: {e}")
    if not results:
        raise VerificationError("所有策略都失败了")

    determinants = {}
    for first, second in combinations(results, 2):
        ok, value = bases_equivalent(instance.a, results[first].B, results[second].B)
        if not ok:
            raise VerificationError(f"策略 {first.value} 与 {second.value} 得到的模不同")
        determinants[(first, second)] = value
    return results, determinants
