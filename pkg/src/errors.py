"""异常体系

所有库函数抛出 SyzError 的子类，CLI 负责捕获并映射为退出码：
- InputError -> 2（输入数据有问题）
- ComputationError -> 1（计算或校验失败）
"""


class SyzError(Exception):
    """所有错误的基类"""

    exit_code = 1


class InputError(SyzError):
    exit_code = 2


class ComputationError(SyzError):
    exit_code = 1


class ParseError(InputError):
    """带位置信息的解析错误"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"第 {line} 行"
            if column is not None:
                where += f" 第 {column} 列"
            where += ": "
        super().__init__(f"{where}{message}")


class VariableMismatchError(InputError):
    pass


class ShapeError(InputError):
    pass


class SingularMatrixError(InputError):
    pass


class IdealMismatchError(InputError):
    pass


class CommonFactorError(InputError):
    """gcd(p, q) 非常数，且未开启 strip_gcd"""

    def __init__(self, factor, message=None):
        self.factor = factor
        super().__init__(message or f"p 与 q 有公因子: {factor}")


class NotUnimodularError(InputError):
    """矩阵的最大子式不生成单位理想"""

    def __init__(self, message, minors=None):
        self.minors = minors or []
        super().__init__(message)


class MissingParameterError(InputError):
    def __init__(self, formula, parameter):
        self.formula = formula
        self.parameter = parameter
        super().__init__(f"公式 {formula} 缺少参数: {parameter}")


class RetryExhaustedError(ComputationError):
    pass


class VerificationError(ComputationError):
    pass


class InexactDivisionError(ComputationError):
    pass
