"""命令的输出报告：JSON（机器可读，可无损读回）与对齐的文本表格"""
import json
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

from ..algebra.polymat import format_rows

STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass
class Report:
    command: str
    status: str = STATUS_OK
    instance: Optional[str] = None
    strategy: Optional[str] = None
    seed: Optional[int] = None
    variables: List[str] = field(default_factory=list)
    basis: Optional[List[List[str]]] = None
    syzygy_ok: List[bool] = field(default_factory=list)
    minors_ok: Optional[bool] = None
    unit: Optional[str] = None
    degrees: List[int] = field(default_factory=list)
    bounds: List[dict] = field(default_factory=list)
    checks: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    runs: List["Report"] = field(default_factory=list)
    timing: Optional[float] = None

    @property
    def ok(self):
        return self.status == STATUS_OK and all(run.ok for run in self.runs)

    def add_check(self, name, ok, detail=""):
        self.checks.append({"name": name, "ok": bool(ok), "detail": detail})
        if not ok:
            self.status = STATUS_FAILED

    def add_run(self, run):
        self.runs.append(run)
        if not run.ok:
            self.status = STATUS_FAILED

    @classmethod
    def from_verification(cls, command, report, B, variables, **extra):
        """由 VerificationReport 和基矩阵构造"""
        unit = None if report.unit is None else str(report.unit)
        return cls(
            command=command,
            status=STATUS_OK if report.ok else STATUS_FAILED,
            variables=list(variables),
            basis=format_rows(B, variables),
            syzygy_ok=list(report.syzygy_ok),
            minors_ok=report.minors_ok,
            unit=unit,
            degrees=list(report.degrees),
            bounds=[
                {"formula": b.formula, "value": b.value, "satisfied": b.satisfied}
                for b in report.bound_comparisons
            ],
            **extra,
        )

    @classmethod
    def from_basis(cls, command, basis, variables, **extra):
        report = cls.from_verification(
            command, basis.verification, basis.B, variables,
            strategy=basis.strategy.value, notes=list(basis.notes), **extra,
        )
        if basis.certificate is not None:
            report.notes.append(f"补全方法: {basis.certificate.method}")
        return report

    # ---- 机器可读 ----
    def to_dict(self):
        data = asdict(self)
        data["runs"] = [run.to_dict() for run in self.runs]
        if data["timing"] is None:
            del data["timing"]
        return data

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in data.items() if k in known}
        values["runs"] = [cls.from_dict(run) for run in data.get("runs", [])]
        return cls(**values)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    # ---- 人类可读 ----
    def render(self, indent=""):
        mark = "✅" if self.ok else "❌"
        title = f"{mark} {self.command}"
        if self.strategy:
            title += f" [{self.strategy}]"
        if self.instance:
            title += f" {self.instance}"
        lines = [indent + title]
        if self.seed is not None:
            lines.append(f"{indent}种子: {self.seed}")
        if self.basis:
            lines.append(f"{indent}基矩阵 ({len(self.basis)}×{len(self.basis[0])}):")
            lines += [indent + "  " + row for row in _table(self.basis)]
        if self.syzygy_ok:
            flags = " ".join("✓" if ok else "✗" for ok in self.syzygy_ok)
            lines.append(f"{indent}合冲检查: {flags}")
        if self.minors_ok is not None:
            lines.append(f"{indent}子式检查: {'通过' if self.minors_ok else '失败'}，u = {self.unit}")
        if self.degrees:
            lines.append(f"{indent}各列次数: {self.degrees}")
        if self.bounds:
            rows = [[b["formula"], str(b["value"]), _satisfied(b.get("satisfied"))] for b in self.bounds]
            lines += [indent + "  " + row for row in _table([["公式", "上界", "满足"]] + rows)]
        for check in self.checks:
            detail = f" ({check['detail']})" if check["detail"] else ""
            lines.append(f"{indent}{'✓' if check['ok'] else '✗'} {check['name']}{detail}")
        for note in self.notes:
            lines.append(f"{indent}• {note}")
        if self.timing is not None:
            lines.append(f"{indent}耗时: {self.timing:.3f}秒")
        for run in self.runs:
            lines.append("")
            lines.append(run.render(indent + "    "))
        return "\n".join(lines)


def _satisfied(value):
    if value is None:
        return "-"
    return "是" if value else "否"


def _table(rows):
    widths = [max(len(row[j]) for row in rows) for j in range(len(rows[0]))]
    return [" | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
