import numpy as np
import pytest

from semiconvexity import DomainError, ExprError, parse_expression
from semiconvexity.fields import finite_difference_gradient


def test_product_value_and_gradient():
    f = parse_expression("x1*x2", 2)
    assert f.value([3.0, 2.0]) == 6.0
    np.testing.assert_allclose(f.gradient([3.0, 2.0]), [2.0, 3.0])


def test_log_product():
    f = parse_expression("log(x1)*x2", 2)
    assert abs(f.value([np.e, 1.0]) - 1.0) < 1e-15
    np.testing.assert_allclose(f.gradient([np.e, 1.0]), [1.0 / np.e, 1.0], rtol=1e-15)


def test_saddle_at_origin_pair():
    f = parse_expression("x1^2 - x2^2", 2)
    assert f.value([1.0, 1.0]) == 0.0
    np.testing.assert_allclose(f.gradient([1.0, 1.0]), [2.0, -2.0])


def test_integer_power_allows_negative_base():
    f = parse_expression("x1^2", 1)
    assert f.value([-3.0]) == 9.0
    np.testing.assert_allclose(f.gradient([-3.0]), [-6.0])
    g = parse_expression("x1^3", 1)
    np.testing.assert_allclose(g.gradient([-2.0]), [12.0])


def test_fractional_power_requires_positive_base():
    f = parse_expression("x1^1.5", 1)
    assert abs(f.value([4.0]) - 8.0) < 1e-12
    with pytest.raises(DomainError):
        f.value([-1.0])


def test_min_max_left_branch_ties():
    f = parse_expression("min(x1, x2)", 2)
    np.testing.assert_allclose(f.gradient([1.0, 1.0]), [1.0, 0.0])  # tie: left wins
    g = parse_expression("max(x1, 2*x1)", 1)
    np.testing.assert_allclose(g.gradient([0.0]), [1.0])
    np.testing.assert_allclose(g.gradient([1.0]), [2.0])


def test_abs_and_unary_minus():
    f = parse_expression("-x1^2 + abs(x2)", 2)
    assert f.value([2.0, -3.0]) == -1.0
    np.testing.assert_allclose(f.gradient([2.0, -3.0]), [-4.0, -1.0])


def test_division_and_precedence():
    f = parse_expression("1 + 2*x1/4 - x2", 2)
    assert f.value([2.0, 0.5]) == 1.5


def test_power_right_associative():
    f = parse_expression("2^x1^2", 1)  # 2^(x1^2)
    assert f.value([2.0]) == 16.0


def test_scientific_literals():
    f = parse_expression("1e-2*x1 + 2.5E3", 1)
    assert f.value([100.0]) == 2501.0


def test_parse_error_positions():
    with pytest.raises(ExprError) as err:
        parse_expression("x1 + @", 2)
    assert err.value.position == 5
    with pytest.raises(ExprError) as err:
        parse_expression("x1 * (x2", 2)
    assert "expected" in str(err.value)


def test_unknown_identifier_and_arity():
    with pytest.raises(ExprError):
        parse_expression("y1 + 1", 2)
    with pytest.raises(ExprError):
        parse_expression("x3", 2)
    with pytest.raises(ExprError):
        parse_expression("min(x1)", 2)
    with pytest.raises(ExprError):
        parse_expression("sqrt(x1, x2)", 2)


def test_empty_expression():
    with pytest.raises(ExprError):
        parse_expression("   ", 2)


def test_division_by_zero_guard():
    f = parse_expression("1/x1", 1)
    with pytest.raises(DomainError):
        f.value([0.0])


@pytest.mark.parametrize("src,n", [
    ("x1*x2", 2),
    ("log(x1)*x2", 2),
    ("0.5*(x1^2 - x2^2)", 2),
    ("x1^1.5/1.5", 1),
    ("sqrt(x1) + x2/x1", 2),
    ("max(x1, x2*x2) - min(x1, 0.5)", 2),
])
def test_forward_mode_matches_central_differences(src, n):
    f = parse_expression(src, n)
    rng = np.random.default_rng(3)
    pts = rng.uniform(0.5, 2.0, size=(50, n))
    for x in pts:
        ad = f.gradient(x)
        fd = finite_difference_gradient(f, x)
        np.testing.assert_allclose(ad, fd, rtol=1e-6, atol=1e-6)
