"""Shared fixtures: the six-field catalog used by the implication battery."""

import numpy as np

from semiconvexity import (BallBody, HRepBody, LinearModulus, PowerEta, PowerModulus, StripBody,
                           WedgeBody, build_integral_modulus, catalog_field, parse_expression,
                           scale_modulus)
from semiconvexity.witness import _grid_sup_constant


def unit_interval_body():
    return HRepBody(np.array([[1.0], [-1.0]]), np.array([1.0, 0.0]))


def unit_square():
    return HRepBody([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0])


def half_strip():
    return HRepBody([[-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [-1.0, 1.0, 1.0])


def half_strip_x_interval():
    from semiconvexity import ProductBody

    return ProductBody([half_strip(), unit_interval_body()])


def battery():
    """(name, field, body, natural modulus) entries; each passes its own margin suite."""
    entries = []
    ball = BallBody([0.0, 0.0], 1.0, 2)
    entries.append(("saddle", catalog_field("saddle", c=1.0, domain=ball), ball, LinearModulus(0.5)))

    strip = StripBody()
    entries.append(("half-product", catalog_field("product", scale=0.5, domain=strip), strip,
                    PowerModulus(0.5)))

    entries.append(("affine", parse_expression("1 + 2*x1 - 3*x2", 2, domain=ball), ball,
                    PowerModulus(0.5)))

    interval = unit_interval_body()
    entries.append(("powerfrac", parse_expression("x1^1.5 / 1.5", 1, domain=interval), interval,
                    PowerModulus(0.5)))

    eta = PowerEta(0.5)
    wedge = WedgeBody(eta)
    om = build_integral_modulus(eta)
    C = 9.0 * _grid_sup_constant(eta, om) + 1.0
    entries.append(("logwedge", catalog_field("logwedge", domain=wedge), wedge,
                    scale_modulus(om, C)))

    hess_norm = 1.0 + np.sqrt(2.0)
    entries.append(("quadratic", parse_expression("x1^2 + x1*x2", 2, domain=ball), ball,
                    LinearModulus(hess_norm / 2.0)))
    return entries
