"""命令行：check / basis / bounds / verify / demo

退出码：0 全部通过，1 计算或校验失败，2 输入错误。
"""
import argparse
import sys
import time
from pathlib import Path

from ..algebra.ideal import GradeKind
from ..algebra.parsing import format_polynomial
from ..algebra.polymat import determinant, is_unimodular
from ..bounds import bound_table, budget_for_instance
from ..errors import InputError, SyzError, VerificationError
from ..syzygy import (
    AlignmentStatus,
    Strategy,
    aligned_bases_check,
    build_tilde_N_star,
    compute_syzygy_basis,
    derive_conversion,
    extend_tilde_M,
    prepare_instance,
    verify_basis,
)
from ..utils import config
from ..utils.logger import logger
from ..utils.timeout import timeout_decorator
from .instance_file import load_instance, load_matrix
from .report import STATUS_FAILED, Report

FIXTURE_DIR = Path(__file__).resolve().parents[2] / "fixtures"
COMMANDS = ("check", "basis", "bounds", "verify", "demo")
STRATEGY_CHOICES = ("tilde-m", "m", "n", "auto")
DEMO_FIXTURES = {
    "ex51": {"bases": ("ex51_uhat_star", "ex51_nhat"), "completion": None},
    "ex52": {"bases": ("ex52_uhat", "ex52_nhat"), "completion": "ex52_u"},
}
DEMO_STRATEGIES = (Strategy.VIA_TILDE_M, Strategy.VIA_M, Strategy.VIA_N)


def build_parser():
    parser = argparse.ArgumentParser(prog="syz", description="grade 2 理想的合冲模基计算与校验")
    parser.add_argument("command", choices=COMMANDS, help="要执行的命令")
    parser.add_argument("target", help="实例文件路径（demo 时为 ex51 或 ex52）")
    parser.add_argument("--strategy", choices=STRATEGY_CHOICES, default=None,
                        help="构造基的方法（默认读取 SYZ_STRATEGY，否则为 auto）")
    parser.add_argument("--seed", type=int, default=None, help="随机种子（默认读取 SYZ_SEED）")
    parser.add_argument("--strip-gcd", action="store_true", help="约去 p、q 的公因子")
    parser.add_argument("--basis", help="verify 命令要校验的矩阵文件")
    parser.add_argument("--json", action="store_true", help="输出 JSON")
    parser.add_argument("--output", help="把 JSON 报告写入文件")
    parser.add_argument("--timing", action="store_true", help="报告中包含耗时")
    for name in ("delta-0", "delta-a", "delta-M", "delta-N"):
        parser.add_argument(f"--{name}", type=int, default=None, help=f"bounds 命令中覆盖 {name}")
    return parser


def _resolve_seed(args):
    return args.seed if args.seed is not None else config.default_seed()


def _resolve_strategy(args):
    if args.strategy is not None:
        return Strategy.parse(args.strategy)
    value = config.default_strategy()
    try:
        return Strategy.parse(value)
    except ValueError:
        logger.warning(f"无效的 SYZ_STRATEGY 配置: {value}，使用默认值: auto")
        return Strategy.AUTO


def _fmt(poly, instance):
    return format_polynomial(poly, instance.variables)


def cmd_check(args):
    data = load_instance(args.target)
    instance = data.to_instance()
    report = Report("check", instance=args.target, variables=list(instance.variables))
    prepared, kind = prepare_instance(instance, args.strip_gcd)
    report.add_check("grade", True, kind.value)
    report.add_check("⟨a⟩ = ⟨p, q⟩", True)
    if kind is GradeKind.UNIT_IDEAL:
        report.notes.append("⟨p, q⟩ 是单位理想，basis 将直接对 (a) 做补全")
        return report
    pair = derive_conversion(prepared.a, prepared.p, prepared.q, prepared.M, prepared.N)
    report.notes.append(f"N 单模: {'是' if is_unimodular(pair.N) else '否（m、n 策略会先搜索单模的 N′）'}")
    report.add_check("M̃ 单模", is_unimodular(extend_tilde_M(pair.M, prepared.p, prepared.q)))
    report.notes.append(f"M 单模: {'是' if is_unimodular(pair.M) else '否'}")
    report.notes.append(f"e = {_fmt(pair.e, instance)}, f = {_fmt(pair.f, instance)}, M·N = I₂: {'是' if pair.is_orthogonal else '否'}")
    return report


def cmd_basis(args):
    data = load_instance(args.target)
    instance = data.to_instance()
    seed = _resolve_seed(args)
    strategy = _resolve_strategy(args)
    basis = compute_syzygy_basis(instance, strategy, seed, args.strip_gcd)
    return Report.from_basis("basis", basis, instance.variables, instance=args.target, seed=seed)


def cmd_bounds(args):
    data = load_instance(args.target)
    instance = data.to_instance()
    prepared, kind = prepare_instance(instance, args.strip_gcd)
    pair = None
    if kind is GradeKind.GRADE_TWO:
        pair = derive_conversion(prepared.a, prepared.p, prepared.q, prepared.M, prepared.N)
    overrides = {
        "delta_0": args.delta_0, "delta_a": args.delta_a,
        "delta_M": args.delta_M, "delta_N": args.delta_N,
    }
    budget = budget_for_instance(prepared, pair, **overrides)
    actual = budget_for_instance(prepared, pair)
    for name, value in overrides.items():
        real = getattr(actual, name)
        if value is not None and real is not None and value < real:
            logger.warning(f"⚠️ 覆盖的 {name} = {value} 小于实际次数 {real}，上界不再保证成立")
    report = Report("bounds", instance=args.target, variables=list(instance.variables))
    report.bounds = [{"formula": k, "value": v, "satisfied": None} for k, v in bound_table(budget)]
    report.notes.append("参数: " + ", ".join(f"{k}={v}" for k, v in budget.to_dict().items()))
    return report


def cmd_verify(args):
    if not args.basis:
        raise InputError("verify 命令需要 --basis 参数")
    data = load_instance(args.target)
    instance = data.to_instance()
    B = load_matrix(args.basis, instance.variables)
    result = verify_basis(instance.a, B)
    return Report.from_verification("verify", result, B, instance.variables, instance=args.target)


def _verify_fixture_basis(report, instance, name):
    B = load_matrix(FIXTURE_DIR / name, instance.variables)
    result = verify_basis(instance.a, B)
    report.add_check(f"{name} 是 Syz(a) 的基", result.ok, f"u = {result.unit}")


def _check_completion(report, instance, pair, name):
    U = load_matrix(FIXTURE_DIR / name, instance.variables)
    tilde = extend_tilde_M(pair.M, instance.p, instance.q)
    ok = (tilde @ U).is_identity_block() and bool(determinant(U).constant_value())
    report.add_check(f"M̃·{name} = [I₂ | 0]，det 为非零常数", ok)


def cmd_demo(args):
    name = args.target
    if name not in DEMO_FIXTURES:
        raise InputError(f"未知的 demo: {name}（可选: {', '.join(DEMO_FIXTURES)}）")
    seed = _resolve_seed(args)
    fixture = DEMO_FIXTURES[name]
    instance = load_instance(FIXTURE_DIR / name).to_instance()
    report = Report("demo", instance=name, seed=seed, variables=list(instance.variables))

    pair = derive_conversion(instance.a, instance.p, instance.q, instance.M, instance.N)
    report.notes.append(f"e = {_fmt(pair.e, instance)}, f = {_fmt(pair.f, instance)}")
    report.notes.append("M 单模" if is_unimodular(pair.M) else "M 不是单模矩阵，m 策略使用 M′")
    report.add_check("M̃ 单模", is_unimodular(extend_tilde_M(pair.M, instance.p, instance.q)))
    try:
        build_tilde_N_star(pair, instance.p, instance.q)
        report.add_check("M̃·Ñ* = [I₂ | 0]", True)
    except VerificationError as e:
        report.add_check("M̃·Ñ* = [I₂ | 0]", False, str(e))
    for basis_name in fixture["bases"]:
        _verify_fixture_basis(report, instance, basis_name)
    if fixture["completion"]:
        _check_completion(report, instance, pair, fixture["completion"])

    for strategy in DEMO_STRATEGIES:
        basis = compute_syzygy_basis(instance, strategy, seed)
        report.add_run(Report.from_basis("basis", basis, instance.variables, instance=name, seed=seed))

    status = aligned_bases_check(instance, pair, seed)
    if status is AlignmentStatus.SKIPPED:
        report.notes.append("M·N ≠ I₂，跳过对齐检查")
    else:
        report.add_check("对齐后 Û* = N̂", status is AlignmentStatus.ALIGNED, status.value)
    return report


HANDLERS = {
    "check": cmd_check,
    "basis": cmd_basis,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "demo": cmd_demo,
}


def execute(args):
    """执行命令并返回 Report；basis / demo 受 SYZ_TIMEOUT 限制"""
    handler = HANDLERS[args.command]
    if args.command in ("basis", "demo"):
        handler = timeout_decorator(config.run_timeout())(handler)
    start = time.time()
    report = handler(args)
    if args.timing:
        report.timing = time.time() - start
    return report


def _emit(report, args):
    text = report.to_json() if args.json or args.output else report.render()
    if args.output:
        Path(args.output).write_text(report.to_json() + "\n", encoding="utf-8")
        logger.info(f"报告已写入 {args.output}")
        if not args.json:
            print(report.render())
            return
    print(text)


def run(argv=None):
    """解析参数、执行命令、输出报告，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = execute(args)
    except SyzError as e:
        logger.error(f"❌ {e}")
        failed = Report(args.command, status=STATUS_FAILED, instance=args.target, notes=[str(e)])
        if args.json:
            print(failed.to_json())
        return e.exit_code
    except TimeoutError as e:
        logger.error(f"❌ {e}")
        return 1
    except Exception as e:
        logger.error(f"❌ 未预期的错误: {e}", exc_info=True)
        return 1
    _emit(report, args)
    return 0 if report.ok else 1


def main():
    sys.exit(run())
