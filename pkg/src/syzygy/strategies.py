"""三种构造合冲模基的方法，以及单位理想的直接路线"""
import time

from ..algebra.polymat import (
    PolyMatrix,
    inverse_unimodular,
    is_unimodular,
    matrix_degree,
    maximal_minors,
)
from ..bounds.formulas import BoundFormula, DegreeBudget, evaluate_bound
from ..errors import (
    InexactDivisionError,
    NotUnimodularError,
    SingularMatrixError,
    VerificationError,
)
from ..quillen_suslin import qs_transform
from ..utils.logger import logger
from .conversion import extend_tilde_M, n_star_from_completion
from .instance import AlignmentStatus, Strategy, SyzygyBasis, clamp_degree
from .verification import bases_equivalent, require_verified, verify_basis


def _degree(matrix):
    return clamp_degree(matrix_degree(matrix))


def _hat_from_two_columns(first, second, rest, p, q):
    """(q·C¹ − p·C², C³, …)"""
    head = [q * x - p * y for x, y in zip(first, second)]
    return PolyMatrix.from_columns([head] + rest, p.nvars)


def _finish(instance, B, strategy, certificate, bounds, start, notes=None):
    report = require_verified(verify_basis(instance.a, B, bounds), strategy.value)
    logger.info(
        f"✅ 策略 {strategy.value}: {B.nrows}×{B.ncols} 基，次数 {report.degree} "
        f"({time.time() - start:.3f}秒)"
    )
    return SyzygyBasis(B, strategy, certificate, report, list(notes or []))


def basis_via_tilde_M(instance, M, seed=0):
    """U = qs(M̃)，Û = U 去掉前两列和最后一行"""
    start = time.time()
    p, q, m = instance.p, instance.q, instance.m
    tilde = extend_tilde_M(M, p, q)
    certificate = qs_transform(tilde, seed)
    U = certificate.U
    B = U.submatrix(range(m), range(2, m + 1))
    notes = []
    alternative = U.submatrix(range(m), [0, 1])
    if instance.a_row() @ alternative == instance.pq_row():
        notes.append("M̃ 补全矩阵的前两列（去掉最后一行）给出另一个可用的 N")
        logger.debug("从 M̃ 的补全矩阵读出了另一个 N")
    budget = DegreeBudget(n=instance.n, delta_M=_degree(M), delta_0=instance.delta_0)
    bounds = [(BoundFormula.TILDE_M.value, evaluate_bound(BoundFormula.TILDE_M, budget))]
    return _finish(instance, B, Strategy.VIA_TILDE_M, certificate, bounds, start, notes)


def basis_via_M(instance, M, seed=0):
    """U* = qs(M)，Û* = (q·U*¹ − p·U*², U*³, …, U*ᵐ)"""
    start = time.time()
    if not is_unimodular(M):
        raise NotUnimodularError(
            "M 不是单模矩阵，请先用 make_unimodular_M 构造 M′", maximal_minors(M))
    certificate = qs_transform(M, seed)
    U = certificate.U
    B = _hat_from_two_columns(U.column(0), U.column(1), U.columns()[2:], instance.p, instance.q)
    budget = DegreeBudget(n=instance.n, delta_M=_degree(M), delta_0=instance.delta_0)
    bounds = [(BoundFormula.UNIMOD_M.value, evaluate_bound(BoundFormula.UNIMOD_M, budget))]
    return _finish(instance, B, Strategy.VIA_M, certificate, bounds, start)


def n_star_star(n_star, M):
    """N**ⁱ = N*ⁱ − λ_i·N*¹ − δ_i·N*²，(λ_i, δ_i)ᵀ = M·N*ⁱ（i ≥ 3）"""
    columns = n_star.columns()
    first, second = columns[0], columns[1]
    corrected = [first, second]
    coefficients = []
    for column in columns[2:]:
        lam, delta = (M @ PolyMatrix.column_vector(column)).column(0)
        coefficients.append((lam, delta))
        corrected.append([c - lam * x - delta * y for c, x, y in zip(column, first, second)])
    return PolyMatrix.from_columns(corrected, M.nvars), coefficients


def basis_via_N(instance, pair, seed=0):
    """N* 的前两列为 N，用 M 修正其余列得到 N**，再取 N̂ = (q·N¹ − p·N², N**³, …)"""
    start = time.time()
    n_star, certificate = n_star_from_completion(pair.N, seed)
    nss, coefficients = n_star_star(n_star, pair.M)
    columns = nss.columns()
    B = _hat_from_two_columns(columns[0], columns[1], columns[2:], instance.p, instance.q)
    if all(lam.is_zero and delta.is_zero for lam, delta in coefficients):
        logger.debug("所有 λ_i、δ_i 都为零，N** = N*")
    budget = DegreeBudget(
        n=instance.n, m=instance.m, delta_0=instance.delta_0,
        delta_N=pair.delta_N, delta_M=pair.delta_M,
    )
    bounds = [(BoundFormula.VIA_N.value, evaluate_bound(BoundFormula.VIA_N, budget))]
    return _finish(instance, B, Strategy.VIA_N, certificate, bounds, start)


def unit_ideal_basis(instance, seed=0):
    """⟨a⟩ = R：U = qs((a₁ … a_m))，取第 2..m 列"""
    start = time.time()
    row = instance.a_row()
    certificate = qs_transform(row, seed)
    U = certificate.U
    if not (row @ U).is_identity_block():
        raise NotUnimodularError("(a)·U ≠ (1, 0, …, 0)", list(instance.a))
    B = U.take_columns(range(1, instance.m))
    budget = DegreeBudget(n=max(instance.n, 1), r=1, d=instance.delta_a)
    bounds = [(BoundFormula.QS_EXPLICIT.value, evaluate_bound(BoundFormula.QS_EXPLICIT, budget))]
    return _finish(instance, B, Strategy.UNIT_IDEAL, certificate, bounds, start)


def aligned_bases_check(instance, pair, seed=0):
    """M·N = I₂ 时把 qs(M) 对齐到 N：U* = [N¹, N², U*₀³, …, U*₀ᵐ]

    对齐后的 U* 本身就是一个 N*，且 N** = N*，所以 Û* 与 N̂ 逐项相同；
    再与 qs(Nᵀ) 独立得到的 N̂ 比较，两者必须张成同一个模。
    """
    if not pair.is_orthogonal:
        return AlignmentStatus.SKIPPED
    m, nvars = instance.m, instance.p.nvars
    completion = qs_transform(pair.M, seed).U
    aligned = PolyMatrix.from_columns(pair.N.columns() + completion.columns()[2:], nvars)
    target = PolyMatrix.identity(2, nvars).hstack(PolyMatrix.zeros(2, m - 2, nvars)) \
        if m > 2 else PolyMatrix.identity(2, nvars)
    if pair.M @ aligned != target:
        logger.warning("对齐后的 U* 不满足 M·U* = [I₂ | 0]")
        return AlignmentStatus.MISMATCH
    try:
        inverse_unimodular(aligned)
    except SingularMatrixError as e:
        logger.warning(f"对齐后的 U* 不可逆: {e}")
        return AlignmentStatus.MISMATCH
    nss, _ = n_star_star(aligned, pair.M)
    if nss != aligned:
        logger.warning("对齐后的 U* 作为 N* 时 N** ≠ N*")
        return AlignmentStatus.MISMATCH
    p, q = instance.p, instance.q
    columns = aligned.columns()
    hat_u = _hat_from_two_columns(columns[0], columns[1], columns[2:], p, q)
    if not verify_basis(instance.a, hat_u).ok:
        return AlignmentStatus.MISMATCH
    independent = basis_via_N(instance, pair, seed).B
    try:
        same, _ = bases_equivalent(instance.a, independent, hat_u)
    except (InexactDivisionError, VerificationError) as e:
        logger.warning(f"无法比较对齐后的 Û* 与 N̂: {e}")
        same = False
    if not same:
        logger.warning("对齐后的 Û* 与 qs(Nᵀ) 给出的 N̂ 张成的模不同")
        return AlignmentStatus.MISMATCH
    return AlignmentStatus.ALIGNED
