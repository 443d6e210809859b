"""转换矩阵 M、N 与 (K, e, f) 分解

(p q)·M = (a₁ … a_m)，(a₁ … a_m)·N = (p q)。K = M·N 满足
K = [[1 − e·q, f·q], [e·p, 1 − f·p]]，e、f 由精确除法得到。
"""
from ..algebra.ideal import buchberger_cofactors
from ..algebra.poly import Polynomial, divide_exact
from ..algebra.polymat import PolyMatrix, inverse_unimodular, is_unimodular, maximal_minors
from ..errors import (
    IdealMismatchError,
    InexactDivisionError,
    NotUnimodularError,
    VerificationError,
)
from ..quillen_suslin import qs_transform
from ..quillen_suslin.preparation import make_rng
from ..utils import config
from ..utils.logger import logger
from .generator import random_polynomial
from .instance import ConversionPair

# 合冲修正 N + B·Y 中 Y 的次数，依次尝试
SHIFT_DEGREES = (0, 1)


def compute_K_ef(M, N, p, q):
    """返回 (K, e, f)，并检查 K 的分解"""
    K = M @ N
    e = divide_exact(K[1, 0], p)
    f = divide_exact(K[0, 1], q)
    if e is None or f is None:
        raise InexactDivisionError("K₂₁ 不能被 p 整除或 K₁₂ 不能被 q 整除，gcd(p, q) 可能不为 1")
    one = Polynomial.one(p.nvars)
    expected = PolyMatrix([[one - e * q, f * q], [e * p, one - f * p]], p.nvars)
    if K != expected:
        raise VerificationError("M·N 不符合 [[1−eq, fq], [ep, 1−fp]] 的分解")
    return K, e, f


def _conversion_M(a, p, q):
    gb = buchberger_cofactors([p, q])
    columns = []
    for i, value in enumerate(a):
        coefficients = gb.represent(value)
        if coefficients is None:
            raise IdealMismatchError(f"a{i + 1} 不属于理想 ⟨p, q⟩")
        columns.append(coefficients)
    return PolyMatrix.from_columns(columns, p.nvars)


def _conversion_N(a, p, q):
    gb = buchberger_cofactors(list(a))
    columns = []
    for name, value in (("p", p), ("q", q)):
        coefficients = gb.represent(value)
        if coefficients is None:
            raise IdealMismatchError(f"{name} 不属于理想 ⟨a₁, …, a_m⟩")
        columns.append(coefficients)
    return PolyMatrix.from_columns(columns, p.nvars)


def derive_conversion(a, p, q, M=None, N=None):
    """构造（或校验用户给出的）M、N，并求 K、e、f"""
    a = list(a)
    a_row = PolyMatrix.row_vector(a)
    pq_row = PolyMatrix.row_vector([p, q])
    if M is None:
        M = _conversion_M(a, p, q)
    elif pq_row @ M != a_row:
        raise IdealMismatchError("给出的 M 不满足 (p q)·M = (a₁ … a_m)")
    if N is None:
        N = _conversion_N(a, p, q)
    elif a_row @ N != pq_row:
        raise IdealMismatchError("给出的 N 不满足 (a₁ … a_m)·N = (p q)")
    K, e, f = compute_K_ef(M, N, p, q)
    pair = ConversionPair(M, N, K, e, f)
    det_k = pair.det_K(p, q)
    value = det_k.constant_value()
    if value is not None and value not in (0, 1):
        logger.info(f"det(M·N) = {value} 是非零常数，理想是主理想")
    return pair


def from_unimodular_M(a, p, q, M, seed=0):
    """M 单模时，N 取 M 的补全矩阵的前两列"""
    certificate = qs_transform(M, seed)
    N = certificate.U.take_columns([0, 1])
    return derive_conversion(a, p, q, M, N)


def extend_tilde_M(M, p, q):
    """M̃ = [M | (−q, p)ᵀ]，必然单模"""
    tilde = M.hstack(PolyMatrix([[-q], [p]], M.nvars))
    if not is_unimodular(tilde):
        raise NotUnimodularError("M̃ 不是单模矩阵，输入数据不满足 (p q)·M = (a)", maximal_minors(tilde))
    return tilde


def _correction(M, x, p, q):
    rows = [[q * xi for xi in x], [-(p * xi) for xi in x]]
    return M + PolyMatrix(rows, M.nvars)


def make_unimodular_M(pair, p, q, seed=0):
    """M′ = M + [q·xᵀ; −p·xᵀ]，其中 xᵀ·N = (e, −f)，从而 M′·N = I₂

    N 必须是单模矩阵，否则先用 unimodular_conversion 替换。
    """
    if pair.e.is_zero and pair.f.is_zero:
        return pair.M
    certificate = qs_transform(pair.N.transpose(), seed)
    u1, u2 = certificate.U.column(0), certificate.U.column(1)
    identity = PolyMatrix.identity(2, p.nvars)
    for sign in (1, -1):
        x = [pair.e * c1 - pair.f * c2 if sign > 0 else pair.f * c2 - pair.e * c1
             for c1, c2 in zip(u1, u2)]
        candidate = _correction(pair.M, x, p, q)
        if candidate @ pair.N == identity:
            if sign < 0:
                logger.warning("x = −e·U¹ + f·U² 才满足 M′·N = I₂")
            return candidate
    raise VerificationError("两种符号的修正都不满足 M′·N = I₂")


def build_tilde_N_star(pair, p, q):
    """Ñ* = [N¹ N² qN¹−pN²; −e f 1−eq−fp]，满足 M̃·Ñ* = [I₂ | 0]"""
    n1, n2 = pair.N.column(0), pair.N.column(1)
    third = [q * x - p * y for x, y in zip(n1, n2)]
    rows = [[x, y, z] for x, y, z in zip(n1, n2, third)]
    rows.append([-pair.e, pair.f, pair.det_K(p, q)])
    tilde_n = PolyMatrix(rows, p.nvars)
    tilde_m = pair.M.hstack(PolyMatrix([[-q], [p]], p.nvars))
    zero, one = Polynomial.zero(p.nvars), Polynomial.one(p.nvars)
    if tilde_m @ tilde_n != PolyMatrix([[one, zero, zero], [zero, one, zero]], p.nvars):
        raise VerificationError("M̃·Ñ* ≠ [I₂ | 0]，(M, N, e, f) 不一致")
    return tilde_n


def n_star_from_completion(N, seed=0):
    """N* = (U_N⁻¹)ᵀ，其中 Nᵀ·U_N = [I₂ | 0]；N* 的前两列就是 N"""
    certificate = qs_transform(N.transpose(), seed)
    n_star = inverse_unimodular(certificate.U).transpose()
    return n_star, certificate


def _syzygy_shift(N, syzygies, rng, degree):
    """N + B·Y，Y 的元素是次数 ≤ degree 的随机多项式"""
    nvars = N.nvars
    rows = [[random_polynomial(rng, nvars, degree, low=-2, high=2) for _ in range(2)]
            for _ in range(syzygies.ncols)]
    return N + syzygies @ PolyMatrix(rows, nvars)


def _unimodular_candidates(a, p, q, pair, seed):
    """依次给出满足 (a)·N = (p q) 的候选 N：M̃ 补全的前两列，然后是合冲修正"""
    m = len(a)
    U = qs_transform(extend_tilde_M(pair.M, p, q), seed).U
    from_tilde = U.submatrix(range(m), [0, 1])
    yield from_tilde
    syzygies = U.submatrix(range(m), range(2, m + 1))
    rng = make_rng(seed)
    for degree in SHIFT_DEGREES:
        for attempt in range(config.max_retries()):
            base = pair.N if attempt % 2 == 0 else from_tilde
            yield _syzygy_shift(base, syzygies, rng, degree)


def unimodular_conversion(a, p, q, pair, seed=0):
    """返回 N 单模的转换对，M 保持不变

    N 不是单模矩阵时，在 {N′ : (a)·N′ = (p q)} 中搜索单模的 N′：先取 M̃ 补全矩阵的前两列，
    再试 N + B·Y（B 为 Syz(a) 的基，Y 为随机常数或一次多项式矩阵）。m = 2 时这样的 N′ 可能不存在。
    """
    if is_unimodular(pair.N):
        return pair
    a = list(a)
    a_row, pq_row = PolyMatrix.row_vector(a), PolyMatrix.row_vector([p, q])
    logger.warning("⚠️ N 不是单模矩阵，搜索满足 (a)·N′ = (p q) 的单模 N′")
    tried = 0
    for candidate in _unimodular_candidates(a, p, q, pair, seed):
        tried += 1
        if a_row @ candidate != pq_row:
            raise VerificationError("候选 N′ 不满足 (a)·N′ = (p q)")
        if is_unimodular(candidate):
            logger.info(f"✅ 第 {tried} 个候选 N′ 是单模矩阵")
            return derive_conversion(a, p, q, pair.M, candidate)
    raise NotUnimodularError(
        f"{tried} 个候选中没有单模的 N′，该实例可能不存在单模的转换矩阵", maximal_minors(pair.N))
