"""次数上界公式

所有公式都是闭式整数表达式，用 Python 的无界整数计算。公式 id 是报告里使用的稳定字符串。
"""
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional

from ..errors import MissingParameterError


class BoundFormula(Enum):
    QS_EXPLICIT = "QS_EXPLICIT"
    TILDE_M = "TILDE_M"
    UNIMOD_M = "UNIMOD_M"
    VIA_N = "VIA_N"
    MPRIME = "MPRIME"
    DELTA_M = "DELTA_M"
    DELTA_N_GENERIC = "DELTA_N_GENERIC"
    DELTA_N_ZERODIM = "DELTA_N_ZERODIM"
    MTT_1 = "MTT_1"
    MTT_2 = "MTT_2"
    CITAM = "CITAM"
    BEZOUT_25 = "BEZOUT_25"


@dataclass(frozen=True)
class DegreeBudget:
    n: Optional[int] = None
    m: Optional[int] = None
    r: Optional[int] = None
    s: Optional[int] = None
    d: Optional[int] = None
    delta_0: Optional[int] = None
    delta_a: Optional[int] = None
    delta_M: Optional[int] = None
    delta_N: Optional[int] = None

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value is not None and value < 0:
                raise ValueError(f"参数 {name} 必须非负，实际为 {value}")

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}


REQUIRED = {
    BoundFormula.QS_EXPLICIT: ("n", "r", "d"),
    BoundFormula.TILDE_M: ("n", "delta_M", "delta_0"),
    BoundFormula.UNIMOD_M: ("n", "delta_M", "delta_0"),
    BoundFormula.VIA_N: ("n", "m", "delta_0", "delta_N", "delta_M"),
    BoundFormula.MPRIME: ("n", "delta_N", "delta_M", "delta_0"),
    BoundFormula.DELTA_M: ("delta_0", "delta_a"),
    BoundFormula.DELTA_N_GENERIC: ("n", "delta_0", "delta_M"),
    BoundFormula.DELTA_N_ZERODIM: ("delta_0", "delta_a"),
    BoundFormula.MTT_1: ("n", "delta_0", "delta_a"),
    BoundFormula.MTT_2: ("n", "m", "delta_0", "delta_a"),
    BoundFormula.CITAM: ("delta_0", "delta_a"),
    BoundFormula.BEZOUT_25: ("n", "r", "d"),
}


def _qs_core(n, delta):
    """3n²4ⁿ(δ+1)^{2n}"""
    return 3 * n ** 2 * 4 ** n * (delta + 1) ** (2 * n)


def qs_explicit_bound(n, r, d):
    return 3 * n ** 2 * (r * (d + 1)) ** (2 * n)


def delta_m_bound(delta_0, delta_a):
    return delta_0 ** 2 + delta_a


def delta_n_zerodim_bound(delta_0, delta_a):
    return 2 * delta_a ** 2 + delta_a + delta_0


def via_n_bound(n, m, delta_0, delta_N, delta_M):
    return delta_0 + delta_N + delta_M + 3 * m * n ** 2 * 4 ** n * (delta_N + 1) ** (2 * n)


def _evaluate(formula, p):
    if formula is BoundFormula.QS_EXPLICIT:
        return qs_explicit_bound(p["n"], p["r"], p["d"])
    if formula is BoundFormula.TILDE_M:
        return _qs_core(p["n"], max(p["delta_M"], p["delta_0"]))
    if formula is BoundFormula.UNIMOD_M:
        return _qs_core(p["n"], p["delta_M"]) + p["delta_0"]
    if formula is BoundFormula.VIA_N:
        return via_n_bound(p["n"], p["m"], p["delta_0"], p["delta_N"], p["delta_M"])
    if formula is BoundFormula.MPRIME:
        return _qs_core(p["n"], p["delta_N"]) + p["delta_M"] + p["delta_N"] + p["delta_0"]
    if formula is BoundFormula.DELTA_M:
        return delta_m_bound(p["delta_0"], p["delta_a"])
    if formula is BoundFormula.DELTA_N_GENERIC:
        return _qs_core(p["n"], max(p["delta_0"], p["delta_M"]))
    if formula is BoundFormula.DELTA_N_ZERODIM:
        return delta_n_zerodim_bound(p["delta_0"], p["delta_a"])
    if formula is BoundFormula.MTT_1:
        return _qs_core(p["n"], p["delta_0"] ** 2 + p["delta_a"])
    if formula is BoundFormula.MTT_2:
        d0, da = p["delta_0"], p["delta_a"]
        tail = 3 * p["m"] * p["n"] ** 2 * 4 ** p["n"] * (2 * da ** 2 + da + d0 + 1) ** (2 * p["n"])
        return 2 * d0 + 2 * da + 2 * da ** 2 + d0 ** 2 + tail
    if formula is BoundFormula.CITAM:
        return 192 * (p["delta_0"] * p["delta_a"] + 1) ** 4
    if formula is BoundFormula.BEZOUT_25:
        return 2 * (p["r"] * (p["d"] + 1)) ** (2 * (p["n"] - 1))
    raise ValueError(f"未知的公式: {formula}")


def evaluate_bound(formula, budget):
    """按公式与参数求值；缺少参数时抛出 MissingParameterError"""
    formula = BoundFormula(formula) if isinstance(formula, str) else formula
    values = budget.to_dict()
    for name in REQUIRED[formula]:
        if name not in values:
            raise MissingParameterError(formula.value, name)
    return _evaluate(formula, values)


def applicable(formula, budget):
    values = budget.to_dict()
    return all(name in values for name in REQUIRED[formula])


def bound_table(budget):
    """参数齐全的所有公式：[(id, value)]"""
    return [
        (formula.value, _evaluate(formula, budget.to_dict()))
        for formula in BoundFormula
        if applicable(formula, budget)
    ]


def check_consistency_chain(n, m, delta_0, delta_a):
    """MTT_1 = TILDE_M(δ = δ_M)，MTT_2 = VIA_N(δ_N = DELTA_N_ZERODIM, δ_M = DELTA_M)"""
    delta_M = delta_m_bound(delta_0, delta_a)
    delta_N = delta_n_zerodim_bound(delta_0, delta_a)
    base = DegreeBudget(n=n, m=m, delta_0=delta_0, delta_a=delta_a)
    mtt_1 = evaluate_bound(BoundFormula.MTT_1, base)
    tilde = evaluate_bound(BoundFormula.TILDE_M, DegreeBudget(n=n, delta_M=delta_M, delta_0=delta_0))
    mtt_2 = evaluate_bound(BoundFormula.MTT_2, base)
    via_n = evaluate_bound(
        BoundFormula.VIA_N,
        DegreeBudget(n=n, m=m, delta_0=delta_0, delta_N=delta_N, delta_M=delta_M),
    )
    return mtt_1 == tilde and mtt_2 == via_n


def budget_for_instance(instance, pair=None, **overrides):
    """从实例（以及可选的转换矩阵）读出参数；overrides 中非 None 的值优先"""
    values = {
        "n": max(instance.n, 1),
        "m": instance.m,
        "delta_0": instance.delta_0,
        "delta_a": instance.delta_a,
    }
    if pair is not None:
        values["delta_M"] = pair.delta_M
        values["delta_N"] = pair.delta_N
    values.update({k: v for k, v in overrides.items() if v is not None})
    return DegreeBudget(**values)
