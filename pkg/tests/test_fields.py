import numpy as np
import pytest

from semiconvexity import (BallBody, DomainError, FiniteDifferenceField, LinearPrecomposeField,
                           PowerEta, StripBody, WedgeBody, catalog_field, eval_gradient,
                           parse_expression, restrict_to_line)
from semiconvexity.fields import field_from_spec, finite_difference_gradient

from helpers import battery


def test_restrict_strip_horizontal_line_is_unbounded():
    f = parse_expression("x1*x2", 2, domain=StripBody())
    line = restrict_to_line(f, [0.0, 0.5], [1.0, 0.0])
    assert line.t_lo == -np.inf and line.t_hi == np.inf
    assert line.value(3.0) == 1.5  # f(3, 1/2) = t/2


def test_restrict_wedge_vertical_interval():
    f = catalog_field("logwedge", domain=WedgeBody(PowerEta(0.5)))
    line = restrict_to_line(f, [2.0, 0.0], [0.0, 1.0])
    assert abs(line.t_hi - np.sqrt(2.0)) < 1e-8
    assert abs(line.t_lo + np.sqrt(2.0)) < 1e-8


def test_restrict_normalizes_direction():
    f = parse_expression("x1*x2", 2, domain=StripBody())
    unit = restrict_to_line(f, [0.0, 0.5], [1.0, 0.0])
    long = restrict_to_line(f, [0.0, 0.5], [5.0, 0.0])
    assert abs(long.value(2.0) - unit.value(2.0)) < 1e-12


def test_restrict_requires_interior_base():
    f = parse_expression("x1*x2", 2, domain=StripBody())
    with pytest.raises(DomainError):
        restrict_to_line(f, [0.0, 2.0], [1.0, 0.0])


def test_restriction_matches_direct_evaluation():
    f = parse_expression("0.5*(x1^2 - x2^2)", 2, domain=BallBody([0.0, 0.0], 2.0, 2))
    line = restrict_to_line(f, [0.1, -0.2], [3.0, 4.0])
    ts = np.linspace(-0.5, 0.5, 11)
    direct = f.values(line.points(ts), check_domain=False)
    np.testing.assert_allclose(line.values(ts), direct, rtol=1e-12)


def test_dual_gradient_linf():
    f = parse_expression("x1^2 - x2^2", 2)
    grad, dual = eval_gradient(f, [1.0, 1.0], p="inf")
    np.testing.assert_allclose(grad, [2.0, -2.0])
    assert dual == 4.0  # l1 norm, dual to sup


def test_gradient_at_origin():
    f = parse_expression("x1*x2", 2)
    np.testing.assert_allclose(f.gradient([0.0, 0.0]), [0.0, 0.0])


def test_fd_gradient_log_product():
    f = parse_expression("log(x1)*x2", 2)
    fd = finite_difference_gradient(f, [2.0, 1.0])
    np.testing.assert_allclose(fd, [0.5, np.log(2.0)], atol=1e-6)


@pytest.mark.parametrize("name,field,body,_m", battery(), ids=[e[0] for e in battery()])
def test_forward_gradients_match_differences_on_interior(name, field, body, _m):
    from semiconvexity.sampling import SamplerSpec, sample_points

    pts = sample_points(body, SamplerSpec(seed=17, count=1000))
    ad = field.gradients(pts)
    # batched central differences as the independent oracle
    h = 1e-6 * (1.0 + np.linalg.norm(pts, axis=1))
    fd = np.empty_like(ad)
    for j in range(field.n):
        e = np.zeros(field.n)
        e[j] = 1.0
        step = h[:, None] * e
        fd[:, j] = (field.values(pts + step, check_domain=False)
                    - field.values(pts - step, check_domain=False)) / (2.0 * h)
    np.testing.assert_allclose(ad, fd, rtol=1e-6, atol=1e-6)


def test_field_rejects_points_outside_body():
    f = parse_expression("x1*x2", 2, domain=StripBody())
    with pytest.raises(DomainError):
        f.value([0.0, 2.0])


def test_precompose_chain_rule():
    base = parse_expression("x1*x2", 2)
    L = np.array([[1.0, 0.0, 2.0], [0.0, 1.0, 0.0]])
    lifted = LinearPrecomposeField(base, L)
    x = np.array([1.0, 2.0, 0.5])
    assert abs(lifted.value(x) - ((1.0 + 1.0) * 2.0)) < 1e-12
    fd = finite_difference_gradient(lifted, x)
    np.testing.assert_allclose(lifted.gradient(x), fd, atol=1e-6)


def test_finite_difference_field_boundary_guard():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = FiniteDifferenceField(lambda x: x[0] * x[1], 2, domain=body)
    np.testing.assert_allclose(f.gradient([0.1, 0.2]), [0.2, 0.1], atol=1e-8)
    with pytest.raises(DomainError):
        f.gradients(np.array([[0.9999999, 0.0]]))


def test_field_spec_roundtrip():
    f = catalog_field("saddle", c=3.0)
    spec = f.to_spec()
    g = field_from_spec(spec)
    x = np.array([0.3, -0.7])
    assert abs(f.value(x) - g.value(x)) < 1e-15
    h = field_from_spec({"type": "expr", "src": "x1+x2", "n": 2})
    assert h.value([1.0, 2.0]) == 3.0
