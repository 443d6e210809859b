"""多项式文本语法

语法：声明过的变量、`+ - * ^`、整数或 `a/b` 有理系数、括号，例如 `11 - 4*s + 3*s^2 + 4*t`。
表达式交给 sympy 解析，再转换成本项目的 Polynomial。
"""
import re
from fractions import Fraction

import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from ..errors import ParseError
from .poly import Polynomial, format_terms

_ALLOWED = re.compile(r"^[\sA-Za-z0-9_+\-*/^()]*$")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_BAD_EXPONENT = re.compile(r"\^\s*(?![0-9(\s])|\^\s*\(?\s*-|\^\s*\d+\s*/")
_TRANSFORMS = standard_transformations + (convert_xor,)


def _locate(text, pattern):
    match = re.search(pattern, text)
    return match.start() + 1 if match else None


def parse_polynomial(text, variables, line=None):
    """把文本解析为 Polynomial；错误带行号和列号"""
    stripped = text.strip()
    if not stripped:
        raise ParseError("多项式为空", line, 1)
    if "." in stripped:
        raise ParseError("不支持小数系数，请写成整数或 a/b", line, stripped.index(".") + 1)
    if not _ALLOWED.match(stripped):
        column = next(i + 1 for i, ch in enumerate(stripped) if not _ALLOWED.match(ch))
        raise ParseError(f"非法字符: {stripped[column - 1]!r}", line, column)
    for match in _IDENT.finditer(stripped):
        if match.group() not in variables:
            raise ParseError(f"未声明的变量: {match.group()}", line, match.start() + 1)
    if _BAD_EXPONENT.search(stripped):
        raise ParseError("指数必须是非负整数", line, _locate(stripped, r"\^"))

    symbols = {name: sp.Symbol(name) for name in variables}
    try:
        expr = parse_expr(stripped, local_dict=symbols, transformations=_TRANSFORMS, evaluate=True)
        poly = sp.Poly(sp.expand(expr), *[symbols[name] for name in variables], domain=sp.QQ) \
            if variables else None
    except (SyntaxError, TypeError, ValueError, sp.PolynomialError, sp.SympifyError) as e:
        raise ParseError(f"无法解析多项式 {stripped!r}: {e}", line)

    nvars = len(variables)
    if poly is None:
        value = sp.Rational(sp.nsimplify(expr))
        return Polynomial.constant(Fraction(int(value.p), int(value.q)), 0)
    terms = {}
    for exponents, coeff in poly.terms():
        coeff = sp.Rational(coeff)
        terms[tuple(int(e) for e in exponents)] = Fraction(int(coeff.p), int(coeff.q))
    return Polynomial(terms, nvars)


def format_polynomial(f, variables):
    """输出能被 parse_polynomial 原样读回的文本"""
    return format_terms(f, variables)


def to_sympy(f, variables):
    """转换为 sympy 表达式（测试中用作独立校验）"""
    symbols = [sp.Symbol(name) for name in variables]
    expr = sp.Integer(0)
    for exponents, coeff in f.terms.items():
        term = sp.Rational(coeff.numerator, coeff.denominator)
        for sym, k in zip(symbols, exponents):
            term *= sym ** k
        expr += term
    return expr


def from_sympy(expr, variables):
    symbols = [sp.Symbol(name) for name in variables]
    poly = sp.Poly(sp.expand(expr), *symbols, domain=sp.QQ)
    terms = {}
    for exponents, coeff in poly.terms():
        coeff = sp.Rational(coeff)
        terms[tuple(int(e) for e in exponents)] = Fraction(int(coeff.p), int(coeff.q))
    return Polynomial(terms, len(variables))
