"""单变量消元：局部矩阵 E(x, T) 的构造与拼接

对单模行 g = P·Y，设 c = u·D₁ + v·D₂ 为 D₁ = g₁、D₂ = g₂ 关于 x_var 的结式。构造

    σ₀ 的列:  (u, v, 0, …)ᵀ,  c·(−D₂, D₁, 0, …)ᵀ,  c·e_j − g_j·(u·e₁ + v·e₂)
    S₀ 的行:  c·g,  (−v, u, 0, …),  c·e_jᵀ

则 g·σ₀ = c·e₁，S₀·σ₀ = c²·I。τ(x, T) = σ₀(x_var)·S₀(x_var + c^h·T) / c² 满足
g(x_var)·τ = g(x_var + c^h·T) 且 τ(x, 0) = I。再用 x_var = Σ a_k·c_k^{h_k} 把各个局部矩阵拼起来。
"""
import time
from dataclasses import dataclass

from ..algebra.poly import Polynomial
from ..algebra.polymat import PolyMatrix, divide_matrix_exact, inverse_unimodular
from ..algebra.rational import identity, rational_inverse
from ..errors import RetryExhaustedError, VerificationError
from ..utils import config
from ..utils.logger import logger
from .preparation import bezout_lift_xn, make_rng, noether_prepare, sample_y_matrices
from .reduction import complete_constant, elementary_reduce


@dataclass(frozen=True)
class Patch:
    E: PolyMatrix  # n+1 个变量，最后一个是 T
    h: int
    c: Polynomial


def _shift_images(n, var, shift):
    """n+1 元环里 x_var ↦ x_var + shift 的代入像"""
    images = [Polynomial.variable(i, n + 1) for i in range(n + 1)]
    images[var] = images[var] + shift
    return images


def build_patch(prepared, y, c, u, v, var):
    """返回 Patch，满足 prepared(x)·E = prepared(x_var ← x_var + c^h·T)，E(x, 0) = I"""
    n = prepared.nvars
    s = prepared.ncols
    big = n + 1
    y_mat = PolyMatrix.from_constant(y, n)
    g = (prepared @ y_mat).row(0)
    d1, d2 = g[0], g[1]
    if u * d1 + v * d2 != c:
        raise VerificationError("结式余因子与局部矩阵不匹配")

    zero = Polynomial.zero(n)
    sigma = [[zero] * s for _ in range(s)]
    sigma[0][0], sigma[1][0] = u, v
    sigma[0][1], sigma[1][1] = -(c * d2), c * d1
    for j in range(2, s):
        sigma[0][j] = -(g[j] * u)
        sigma[1][j] = -(g[j] * v)
        sigma[j][j] = c
    s_inv = [[zero] * s for _ in range(s)]
    s_inv[0] = [c * x for x in g]
    s_inv[1][0], s_inv[1][1] = -v, u
    for j in range(2, s):
        s_inv[j][j] = c

    sigma0 = PolyMatrix(sigma, n).embed(big)
    s0 = PolyMatrix(s_inv, n).embed(big)
    c_big = c.embed(big)
    c_squared = c_big * c_big
    t = Polynomial.variable(n, big)
    y_big = PolyMatrix.from_constant(y, big)
    y_inv = PolyMatrix.from_constant(rational_inverse(y), big)

    for h in (1, 2):
        shift = (c_big ** h) * t
        tau = sigma0 @ s0.compose(_shift_images(n, var, shift))
        tau = divide_matrix_exact(tau, c_squared)
        if tau is None:
            continue
        E = y_big @ tau @ y_inv
        lhs = prepared.embed(big) @ E
        rhs = prepared.embed(big).compose(_shift_images(n, var, shift))
        if lhs != rhs:
            raise VerificationError("局部矩阵 E 不满足平移关系")
        return Patch(E, h, c)
    raise VerificationError("τ 不能被 c² 整除（h = 2 时不应发生）")


def _apply_patch(patch, var, z_prev, a_k, n):
    """φ_k：x_var ↦ z_{k−1}，T ↦ −a_k"""
    images = [Polynomial.variable(i, n) for i in range(n)]
    images[var] = z_prev
    images.append(-a_k)
    return patch.E.compose(images)


def assemble_patches(patches, var, n):
    """U' = Π φ_k(E_k)，满足 prepared·U' = prepared|var=0"""
    powers = [patch.c ** patch.h for patch in patches]
    a = bezout_lift_xn(powers, var)
    z = Polynomial.variable(var, n)
    size = patches[0].E.nrows
    result = PolyMatrix.identity(size, n)
    for patch, power, a_k in zip(patches, powers, a):
        result = result @ _apply_patch(patch, var, z, a_k, n)
        z = z - a_k * power
    if not z.is_zero:
        raise VerificationError("Bézout 提升后 z_K 不为零")
    return result


def _patch_route(F, var, rng):
    """r = 1 的构造性消元"""
    n = F.nvars
    attempts = config.max_retries()
    last_error = None
    for attempt in range(attempts):
        try:
            prep = noether_prepare(F, rng, var=var, coordinate_change=identity(n))
            sampling = sample_y_matrices(prep, rng)
        except RetryExhaustedError as e:
            last_error = e
            logger.warning(f"消元第 {attempt + 1} 次尝试失败: {e}")
            continue
        patches = [
            build_patch(prep.prepared, sample.y, sample.c, sample.u, sample.v, var)
            for sample in sampling.samples
        ]
        u_prepared = assemble_patches(patches, var, n)
        if prep.prepared @ u_prepared != prep.prepared.substitute(var, 0):
            raise VerificationError("拼接后的矩阵没有消去变量")
        return prep.lift_back(u_prepared), patches
    raise RetryExhaustedError(f"变量 x{var + 1} 的消元在 {attempts} 次尝试后失败: {last_error}")


def eliminate_variable(F, var, seed=0, method="auto"):
    """返回单模矩阵 U_var，使 F·U_var = F|_{x_var = 0}

    method="auto" 先尝试列化简（F 与 F|var=0 都能化为 [I|0] 时直接组合），
    method="patch" 总是走局部矩阵拼接路线。
    """
    rng = make_rng(seed)
    n = F.nvars
    if var not in set().union(*(x.variables() for row in F.rows() for x in row)):
        return PolyMatrix.identity(F.ncols, n)
    F0 = F.substitute(var, 0)
    start = time.time()

    if F.nrows != 1:
        # 两行的情形：qs(F)·qs(F|var=0)⁻¹
        from .completion import qs_transform

        u = qs_transform(F, rng).U
        u0 = qs_transform(F0, rng).U
        result = u @ inverse_unimodular(u0)
    else:
        result = None
        if method == "auto":
            u = elementary_reduce(F)
            u0 = complete_constant(F0) if F0.is_constant else elementary_reduce(F0)
            if u is not None and u0 is not None:
                result = u @ inverse_unimodular(u0)
        if result is None:
            result, patches = _patch_route(F, var, rng)
            logger.info(f"变量 x{var + 1} 通过 {len(patches)} 个局部矩阵消去")

    if F @ result != F0:
        raise VerificationError(f"U 没有消去变量 x{var + 1}")
    logger.debug(f"变量 x{var + 1} 消元完成 ({time.time() - start:.3f}秒)")
    return result
