#!/usr/bin/env python3
"""
测试多项式运算：加减乘、次数、代入、精确除法、gcd、结式、文本格式
"""
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from src.algebra.parsing import format_polynomial, from_sympy, parse_polynomial, to_sympy
from src.algebra.poly import (
    Polynomial,
    bareiss_determinant,
    divide_exact,
    evaluate,
    linear_change,
    multivariate_gcd,
    partial_substitute,
    resultant,
    resultant_with_cofactors,
    total_degree,
)
from src.errors import ParseError, VariableMismatchError
from src.syzygy.generator import random_polynomial

VARS = ("s", "t")


def test_ring_operations(poly):
    """(s+t) + (s−t) = 2s，(s−t)(s+t) = s²−t²，f + 0 = f"""
    s_plus_t, s_minus_t = poly("s + t"), poly("s - t")
    assert s_plus_t + s_minus_t == poly("2*s")
    assert s_minus_t * s_plus_t == poly("s^2 - t^2")
    f = poly("3*s^2 - t + 1/2")
    assert f + Polynomial.zero(2) == f
    assert f - f == Polynomial.zero(2)
    assert f ** 0 == Polynomial.one(2)


def test_ring_axioms_against_sympy():
    rng = np.random.default_rng(11)
    for _ in range(20):
        f, g, h = (random_polynomial(rng, 2, 3) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        expected = sp.expand(to_sympy(f, VARS) * to_sympy(g, VARS) - to_sympy(h, VARS))
        assert f * g - h == from_sympy(expected, VARS)


def test_total_degree(ex51, poly):
    assert total_degree(ex51.a[1]) == 2
    assert total_degree(Polynomial.zero(2)) == float("-inf")
    assert total_degree(poly("7")) == 0


def test_total_degree_is_additive():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f, g = random_polynomial(rng, 2, 3), random_polynomial(rng, 2, 2)
        if f.is_zero or g.is_zero:
            continue
        assert (f * g).total_degree() == f.total_degree() + g.total_degree()


def test_evaluate_and_substitute(ex52, poly):
    assert evaluate(poly("t + 2*s + 1"), [0, 0]) == 1
    assert evaluate(ex52.a[3], [1, 2]) == 0
    f = poly("s^2*t + s - t")
    assert partial_substitute(f, 1, 0) == poly("s")
    assert partial_substitute(f, 0, Fraction(1, 2)) == poly("-3/4*t + 1/2")
    assert f.substitute(1, poly("s")) == poly("s^3")


def test_evaluate_rejects_wrong_length(poly):
    with pytest.raises(VariableMismatchError):
        evaluate(poly("s + t"), [1])


def test_linear_change(poly):
    f = poly("s^2 + 3*t")
    assert linear_change(f, [[1, 0], [0, 1]]) == f
    assert linear_change(poly("s"), [[0, 1], [1, 0]]) == poly("t")
    assert linear_change(poly("s*t"), [[1, 0], [0, 1]], [1, -1]) == poly("s*t - s + t - 1")


def test_linear_change_round_trip():
    rng = np.random.default_rng(5)
    C = [[2, 1], [1, 1]]
    C_inv = [[1, -1], [-1, 2]]
    for _ in range(10):
        f = random_polynomial(rng, 2, 3)
        assert linear_change(linear_change(f, C), C_inv) == f


def test_divide_exact(poly):
    assert divide_exact(poly("s^2 - t^2"), poly("s - t")) == poly("s + t")
    f = poly("s^3 - 2*t")
    assert divide_exact(f, Polynomial.one(2)) == f
    assert divide_exact(poly("s + 1"), poly("s^2")) is None
    # 第二个例子中 K₂₁ / p 就是 e
    assert divide_exact(poly("2*s + t + 1"), poly("t + 2*s + 1")) == Polynomial.one(2)


def test_divide_exact_recovers_factor():
    rng = np.random.default_rng(8)
    for _ in range(15):
        f, g = random_polynomial(rng, 2, 2), random_polynomial(rng, 2, 2)
        if g.is_zero:
            continue
        assert divide_exact(f * g, g) == f


def test_divide_by_zero(poly):
    with pytest.raises(ZeroDivisionError):
        divide_exact(poly("s"), Polynomial.zero(2))


def test_gcd_examples(ex51, poly):
    assert multivariate_gcd(poly("s^2 - t^2"), poly("s - t")) == poly("s - t")
    assert multivariate_gcd(poly("2*s + 2"), Polynomial.zero(2)) == poly("s + 1")
    assert multivariate_gcd(ex51.p, ex51.q) == Polynomial.one(2)


def test_gcd_matches_sympy():
    rng = np.random.default_rng(17)
    for _ in range(15):
        common = random_polynomial(rng, 2, 1)
        f = random_polynomial(rng, 2, 2) * common
        g = random_polynomial(rng, 2, 2) * common
        if f.is_zero or g.is_zero:
            continue
        ours = multivariate_gcd(f, g)
        assert divide_exact(f, ours) is not None
        assert divide_exact(g, ours) is not None
        expected = sp.gcd(to_sympy(f, VARS), to_sympy(g, VARS))
        ratio = sp.simplify(to_sympy(ours, VARS) / expected)
        assert ratio.is_number and ratio != 0
        assert multivariate_gcd(g, f) == ours


def test_resultant_examples(poly):
    x_vars = ("x", "t")
    assert resultant(poly("x - t", x_vars), poly("x^2 + 1", x_vars), 0) == poly("t^2 + 1", x_vars)
    assert resultant(poly("x - t", x_vars), Polynomial.one(2), 0) == Polynomial.one(2)
    assert resultant(poly("t + 2*s + 1"), poly("-2*t - s"), 1) == poly("3*s + 2")


def test_resultant_vanishes_iff_common_factor():
    rng = np.random.default_rng(23)
    for _ in range(10):
        f = random_polynomial(rng, 2, 2)
        g = random_polynomial(rng, 2, 2)
        if f.degree_in(1) < 1 or g.degree_in(1) < 1:
            continue
        shares = multivariate_gcd(f, g).degree_in(1) > 0
        assert resultant(f, g, 1).is_zero == shares
        common = Polynomial.variable(1, 2) + Polynomial.variable(0, 2)
        assert resultant(f * common, g * common, 1).is_zero


def test_resultant_cofactors(poly):
    f, g = poly("s*t + 1"), poly("t^2 - s")
    res, u, v = resultant_with_cofactors(f, g, 1)
    assert u * f + v * g == res
    assert res == resultant(f, g, 1)


def test_bareiss_determinant(poly):
    rows = [[poly("s"), poly("1"), poly("0")],
            [poly("t"), poly("s"), poly("1")],
            [poly("1"), poly("0"), poly("t")]]
    expected = sp.Matrix([[to_sympy(x, VARS) for x in row] for row in rows]).det()
    assert bareiss_determinant(rows, 2) == from_sympy(expected, VARS)


def test_format_round_trip(ex51):
    for f in list(ex51.a) + [ex51.p, ex51.q, parse_polynomial("-2/5*s^2 + 1/5*s*t - 3", VARS)]:
        assert parse_polynomial(format_polynomial(f, VARS), VARS) == f
    assert format_polynomial(parse_polynomial("-2/5*s^2 + 1/5*s*t - 3", VARS), VARS) \
        == "-2/5*s^2 + 1/5*s*t - 3"


@pytest.mark.parametrize("text, column", [
    ("s + x", 5),
    ("s ^ -1", 3),
    ("s $ t", 3),
    ("0.1*s", 2),
    ("s + 2.5*t", 6),
    ("s^2.0", 4),
])
def test_parse_errors_are_positioned(text, column):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, VARS, line=4)
    assert info.value.line == 4
    assert info.value.column == column


def test_decimal_coefficients_rejected():
    """只接受整数或 a/b 系数，小数即使能精确换算也拒绝"""
    with pytest.raises(ParseError, match="小数"):
        parse_polynomial("0.1*s", VARS)
    assert dict(parse_polynomial("1/10*s", VARS).terms) == {(1, 0): Fraction(1, 10)}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
