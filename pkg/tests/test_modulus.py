import math

import numpy as np
import pytest

from semiconvexity import (ConstructionError, DomainError, IntegralModulus, LinearModulus,
                           PiecewiseLinearEta, PowerEta, PowerModulus, SqrtLogModulus,
                           TabulatedModulus, ULEta, ZeroModulus, asymptotics_probe,
                           build_integral_modulus, check_modulus_axioms, eval_modulus,
                           scale_modulus)
from semiconvexity.boundary import ConstBoundary, DifferenceBoundary


def catalog_moduli():
    return [
        ZeroModulus(),
        LinearModulus(1.0),
        LinearModulus(0.5),
        PowerModulus(0.5),
        PowerModulus(0.75, 2.0),
        SqrtLogModulus(),
        scale_modulus(PowerModulus(0.5), 3.0),
        build_integral_modulus(PowerEta(0.5)),
        TabulatedModulus([(0.0, 0.0), (1.0, 1.0), (5.0, 2.0)]),
    ]


# ---------------------------------------------------------------------------
# eval_modulus
# ---------------------------------------------------------------------------

def test_eval_examples():
    assert eval_modulus(LinearModulus(1.0), 0.0) == 0.0
    assert eval_modulus(PowerModulus(0.5), 4.0) == 2.0


def test_eval_rejects_bad_arguments():
    m = LinearModulus(1.0)
    with pytest.raises(DomainError):
        m(-1.0)
    with pytest.raises(DomainError):
        m(float("nan"))
    with pytest.raises(DomainError):
        m(float("inf"))


def test_integral_modulus_sqrt_eta_closed_form():
    # independent oracle: base(t) = 3 - 2/sqrt(t) for t >= 1, from the exact integral
    om = build_integral_modulus(PowerEta(0.5))
    expected = 2.0 + math.sqrt(math.log(5.0))
    assert abs(om(4.0) - expected) < 1e-8
    ts = np.geomspace(1.0, 1e6, 200)
    closed = 3.0 - 2.0 / np.sqrt(ts) + np.sqrt(np.log1p(ts))
    assert np.max(np.abs(om(ts) - closed)) < 1e-10  # quad_tol


# ---------------------------------------------------------------------------
# build_integral_modulus
# ---------------------------------------------------------------------------

def test_integral_modulus_at_one():
    om = build_integral_modulus(PowerEta(0.5))
    assert om.base(1.0) == 1.0
    assert abs(om(1.0) - (1.0 + math.sqrt(math.log(2.0)))) < 1e-12


def test_integral_modulus_piecewise_linear_exact_integral():
    # eta = 2t on [0, 2], constant 4 beyond; exact integral gives
    # base(t) = 1 + (1/2) * (2 ln 2 + 4 (1/2 - 1/t)) = 2 + ln 2 - 2/t for t >= 2
    eta = PiecewiseLinearEta([(0.0, 0.0), (2.0, 4.0)])
    om = build_integral_modulus(eta)
    for t in (2.0, 5.0, 10.0, 1e3):
        expected = 2.0 + math.log(2.0) - 2.0 / t
        assert abs(om.base(t) - expected) < 1e-10
    assert abs(om.base(10.0) - 2.493147180559945) < 1e-9


def test_integral_modulus_lower_bound_min_1_t():
    om = build_integral_modulus(PowerEta(0.5))
    grid = np.linspace(0.0, 100.0, 100)
    vals = om(grid)
    lower = np.minimum(1.0, grid)
    small = grid <= 1.0
    assert np.all(vals[small] - lower[small] >= 0.0)  # exact on [0, 1]
    assert np.all(vals - lower >= -1e-9)


def test_integral_modulus_flags_and_concavity():
    om = build_integral_modulus(PowerEta(0.5))
    assert om.concave and om.unbounded
    grid = np.geomspace(1.0, 1e6, 300)
    vals = om(grid)
    slopes = np.diff(vals) / np.diff(grid)
    assert np.max(np.diff(slopes)) <= 1e-9


def test_integral_modulus_log_decay_and_divergence():
    om = build_integral_modulus(PowerEta(0.5))
    assert om(1e6) / math.log(1e6) < om(1e3) / math.log(1e3)
    assert om(1e12) > om(1e6) > om(1e3)  # unbounded growth


def test_integral_modulus_rejects_flat_eta():
    with pytest.raises(ConstructionError):
        build_integral_modulus(PiecewiseLinearEta([(0.0, 0.0), (1.0, 0.0)]))


def test_integral_modulus_rejects_linear_eta():
    class LinearEta(PowerEta):
        def __init__(self):
            self.alpha = 1.0

        def _eval(self, t):
            return t

        def to_spec(self):
            return {"kind": "power", "alpha": 1.0}

    with pytest.raises(ConstructionError):
        build_integral_modulus(LinearEta())


def test_ul_eta_shape():
    h = DifferenceBoundary(ConstBoundary(1.0), ConstBoundary(-1.0))
    eta = ULEta(2.0, 2.0, h)
    assert eta(1.0) == 2.0
    assert eta(2.0) == 4.0
    assert eta(10.0) == 4.0
    eta.validate()


# ---------------------------------------------------------------------------
# scale_modulus
# ---------------------------------------------------------------------------

def test_scale_examples():
    assert scale_modulus(LinearModulus(1.0), 3.0)(2.0) == 6.0
    assert scale_modulus(PowerModulus(0.5), 2.0)(9.0) == 6.0


def test_scale_identity_and_composition():
    grid = np.linspace(0.0, 10.0, 50)
    m = PowerModulus(0.5, 1.5)
    np.testing.assert_allclose(scale_modulus(m, 1.0)(grid), m(grid), rtol=1e-15)
    comp = scale_modulus(scale_modulus(m, 2.0), 3.0)
    direct = scale_modulus(m, 6.0)
    np.testing.assert_allclose(comp(grid), direct(grid), rtol=1e-12)


def test_scale_rejects_nonpositive():
    with pytest.raises(DomainError):
        scale_modulus(LinearModulus(1.0), 0.0)
    with pytest.raises(DomainError):
        scale_modulus(LinearModulus(1.0), -2.0)


# ---------------------------------------------------------------------------
# check_modulus_axioms
# ---------------------------------------------------------------------------

def test_axioms_linear_pass():
    rep = check_modulus_axioms(LinearModulus(1.0), np.array([0.0, 1.0, 2.0]))
    assert rep.passed
    assert rep.min_margin == 1.0


def test_axioms_sqrt_log_geometric_grid():
    rep = check_modulus_axioms(SqrtLogModulus(), np.geomspace(1e-6, 1e6, 200))
    assert rep.passed


def test_axioms_tabulated_violation_has_witness():
    m = TabulatedModulus([(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)])
    rep = check_modulus_axioms(m, np.linspace(0.0, 2.0, 21))
    assert not rep.passed
    assert rep.min_margin < 0
    assert 1.0 <= rep.witness["t"][0] <= 2.0


def test_tabulated_concavity_flag():
    assert TabulatedModulus([(0.0, 0.0), (1.0, 1.0), (3.0, 1.5)]).concave
    assert not TabulatedModulus([(0.0, 0.0), (1.0, 0.1), (2.0, 2.0)]).concave


@pytest.mark.parametrize("m", catalog_moduli(), ids=lambda m: m.kind + str(id(m))[-3:])
def test_monotone_on_random_grids(m):
    rng = np.random.default_rng(12)
    for _ in range(5):
        grid = np.sort(rng.uniform(0.0, 50.0, size=40))
        grid = np.unique(grid)
        vals = m(grid)
        scale = 1.0 + np.max(np.abs(vals))
        assert np.all(np.diff(vals) >= -1e-12 * scale)


# ---------------------------------------------------------------------------
# asymptotics_probe
# ---------------------------------------------------------------------------

def test_asymptotics_power():
    grid = np.geomspace(1e-6, 1e6, 121)  # endpoints land exactly on the probe points
    probe = asymptotics_probe(PowerModulus(0.5), grid)
    assert probe["classification"] == "sub-linear-at-inf"
    assert abs(probe["ratio_t"][-1] - 1e-3) < 1e-12
    assert abs(probe["ratio_t"][0] - 1e3) < 1e-6


def test_asymptotics_linear():
    probe = asymptotics_probe(LinearModulus(1.0), np.geomspace(1e-7, 1e7, 100))
    assert probe["classification"] == "linear-like"
    assert all(abs(r - 1.0) < 1e-9 for r in probe["ratio_t"])


def test_asymptotics_integral_modulus_log_decay():
    om = build_integral_modulus(PowerEta(0.5))
    probe = asymptotics_probe(om, np.geomspace(1e-7, 1e7, 100))
    assert probe["classification"] == "super-log-decay"
    assert probe["ratio_log"]["1e6"] < probe["ratio_log"]["1e3"]


def test_asymptotics_requires_wide_grid():
    with pytest.raises(DomainError):
        asymptotics_probe(LinearModulus(1.0), np.geomspace(1.0, 100.0, 10))


# ---------------------------------------------------------------------------
# eta validation
# ---------------------------------------------------------------------------

def test_eta_validation_rejects_bad_alpha():
    with pytest.raises(ConstructionError):
        PowerEta(1.5)
    with pytest.raises(ConstructionError):
        PowerEta(0.0)


def test_eta_piecewise_requires_origin_knot():
    with pytest.raises(ConstructionError):
        PiecewiseLinearEta([(1.0, 1.0), (2.0, 2.0)])


def test_quadrature_tolerance_scales():
    loose = IntegralModulus(PowerEta(0.5), quad_tol=1e-6)
    tight = IntegralModulus(PowerEta(0.5), quad_tol=1e-12)
    ts = np.geomspace(1.0, 1e4, 37)
    closed = 3.0 - 2.0 / np.sqrt(ts) + np.sqrt(np.log1p(ts))
    assert np.max(np.abs(tight(ts) - closed)) < 1e-11
    assert np.max(np.abs(loose(ts) - closed)) < 1e-5
