import numpy as np
import pytest

from semiconvexity import (BallBody, LinearModulus, PowerModulus, PreconditionError, SamplerSpec,
                           SpaceBody, StripBody, ZeroModulus, catalog_field, check_inscribed_ball_bound,
                           check_directional_gap, check_envelope, check_semiconcave,
                           check_semiconvex, check_semiconvex_on_lines, check_derivative_bounds,
                           estimate_derivative_modulus, parse_expression, scale_modulus)

from helpers import battery, unit_interval_body

SPEC = SamplerSpec(seed=42, count=10000)
SMALL = SamplerSpec(seed=42, count=2000)


# ---------------------------------------------------------------------------
# check_semiconvex / check_semiconcave
# ---------------------------------------------------------------------------

def test_convex_square_passes_zero_modulus():
    f = parse_expression("x1^2", 1, domain=unit_interval_body())
    body = f.domain
    rep = check_semiconvex(f, body, ZeroModulus(), SMALL)
    assert rep.passed


def test_strip_half_product_sqrt_modulus():
    body = StripBody()
    f = catalog_field("product", scale=0.5, domain=body)
    rep = check_semiconvex(f, body, PowerModulus(0.5), SPEC)
    assert rep.passed
    rep2 = check_semiconcave(f, body, PowerModulus(0.5), SPEC)
    assert rep2.passed


def test_power_fraction_semiconcavity_and_scaled_failure():
    # f = x^p / p with p = 1.5: semiconcave with t^(p-1), not with 0.1 * t^(p-1)
    body = unit_interval_body()
    f = parse_expression("x1^1.5/1.5", 1, domain=body)
    m = PowerModulus(0.5)
    assert check_semiconvex(f, body, m, SPEC).passed  # convex: any modulus works
    assert check_semiconcave(f, body, m, SPEC).passed
    rep = check_semiconcave(f, body, scale_modulus(m, 0.1), SPEC)
    assert not rep.passed
    assert rep.witness["x"]  # violation witness recorded


def test_semiconvex_symmetry_in_the_pair():
    # margin(x, y, lam) == margin(y, x, 1 - lam) by hand on fixed triples
    from semiconvexity import kernels

    rng = np.random.default_rng(0)
    f = catalog_field("saddle", c=1.0)
    X = rng.uniform(-1, 1, (200, 2))
    Y = rng.uniform(-1, 1, (200, 2))
    lam = rng.uniform(0, 1, 200)
    m = LinearModulus(0.5)

    def margins(X, Y, lam):
        mid = lam[:, None] * X + (1 - lam[:, None]) * Y
        d = kernels.row_norms(X - Y, 2)
        return kernels.semiconvex_margins(
            f.values(X), f.values(Y), f.values(mid), d, lam, m(d)
        )

    a = margins(X, Y, lam)
    b = margins(Y, X, 1.0 - lam)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_negation_duality_bitwise():
    body = StripBody()
    f = catalog_field("product", scale=0.5, domain=body)
    m = PowerModulus(0.5)
    concave_rep = check_semiconcave(f, body, m, SMALL)
    negated_rep = check_semiconvex(f.negated(), body, m, SMALL)
    assert concave_rep.min_margin == negated_rep.min_margin
    assert concave_rep.witness == negated_rep.witness


# ---------------------------------------------------------------------------
# check_envelope
# ---------------------------------------------------------------------------

def test_envelope_affine_always_passes():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = parse_expression("1 + 2*x1 - 3*x2", 2, domain=body)
    for m in (ZeroModulus(), PowerModulus(0.5), LinearModulus(2.0)):
        assert check_envelope(f, body, m, SMALL).passed


def test_envelope_strip_product():
    body = StripBody()
    f = catalog_field("product", domain=body)
    assert check_envelope(f, body, PowerModulus(0.5), SPEC).passed


def test_envelope_saddle_linear_modulus():
    body = BallBody([0.0, 0.0], 1.0, 2)
    for c in (0.5, 1.0, 3.0):
        f = catalog_field("saddle", c=c, domain=body)
        assert check_envelope(f, body, LinearModulus(c / 2.0), SPEC).passed


# ---------------------------------------------------------------------------
# check_directional_gap
# ---------------------------------------------------------------------------

def test_gap_affine_identically_zero():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = parse_expression("4 - x1 + 2*x2", 2, domain=body)
    rep = check_directional_gap(f, body, ZeroModulus(), SMALL)
    assert rep.passed and abs(rep.min_margin) < 1e-12


def test_gap_square_tight_equality():
    body = unit_interval_body()
    f = parse_expression("x1^2", 1, domain=body)
    rep = check_directional_gap(f, body, LinearModulus(2.0), SMALL)
    assert rep.passed
    assert abs(rep.min_margin) < 1e-10  # equality case


def test_gap_logwedge_with_wedge_constant():
    name, f, body, m = battery()[4]
    rep = check_directional_gap(f, body, m, SPEC)
    assert rep.passed


# ---------------------------------------------------------------------------
# estimate_derivative_modulus
# ---------------------------------------------------------------------------

def test_estimate_saddle_exact_lipschitz():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = catalog_field("saddle", c=3.0, domain=body)
    est = estimate_derivative_modulus(f, body, SPEC, candidate=LinearModulus(3.0))
    assert 1.0 - 1e-2 <= est["sup_ratio"] <= 1.0 + 1e-2


def test_estimate_product_swap_spectral_norm():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = catalog_field("product", domain=body)
    est = estimate_derivative_modulus(f, body, SPEC, candidate=LinearModulus(1.0))
    assert 0.99 <= est["sup_ratio"] <= 1.0 + 1e-9


def test_estimate_affine_zero_gaps():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = parse_expression("1 + x1", 2, domain=body)
    est = estimate_derivative_modulus(f, body, SMALL)
    assert np.max(est["grad_gaps"]) == 0.0


# ---------------------------------------------------------------------------
# check_inscribed_ball_bound
# ---------------------------------------------------------------------------

def test_inscribed_ball_product_example():
    body = BallBody([0.0, 0.0], 2.0, 2)
    f = catalog_field("product", domain=body)
    rep = check_inscribed_ball_bound(f, body, LinearModulus(0.5), [0.0, 0.0], 1.0, [1.0, 0.0])
    assert rep.passed
    assert abs(rep.min_margin - 1.0) < 1e-12  # RHS 2, gap 1


def test_inscribed_ball_degenerate_probe_point():
    body = BallBody([0.0, 0.0], 2.0, 2)
    f = catalog_field("product", domain=body)
    rep = check_inscribed_ball_bound(f, body, LinearModulus(0.5), [0.0, 0.0], 1.0, [0.0, 0.0])
    assert rep.passed and rep.min_margin >= 0.0


def test_inscribed_ball_saddle_example():
    body = BallBody([0.0, 0.0], 2.0, 2)
    f = catalog_field("saddle", c=1.0, domain=body)
    rep = check_inscribed_ball_bound(f, body, LinearModulus(0.5), [0.0, 0.0], 1.0, [0.5, 0.0])
    assert abs(rep.witness["gap"] - 0.5) < 1e-12
    assert abs(rep.witness["bound"] - 1.125) < 1e-12


def test_inscribed_ball_ball_not_contained():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = catalog_field("product", domain=body)
    with pytest.raises(PreconditionError):
        check_inscribed_ball_bound(f, body, LinearModulus(0.5), [0.5, 0.0], 1.0, [0.0, 0.0])


# ---------------------------------------------------------------------------
# check_derivative_bounds
# ---------------------------------------------------------------------------

def test_derivative_bounds_bounded_product():
    body = BallBody([0.0, 0.0], 1.0, 2)
    f = catalog_field("product", domain=body)
    rep = check_derivative_bounds(f, body, LinearModulus(0.5), SPEC)
    assert rep.passed
    assert rep.extra["channels"][0]["bound"] == 12.0  # 6 e_G with e_G = 2
    assert abs(rep.extra["sup_ratio"] - 2.0) < 1e-9


def test_derivative_bounds_whole_space_lipschitz_channel():
    body = SpaceBody(2)
    f = catalog_field("saddle", c=1.0, domain=body)
    rep = check_derivative_bounds(f, body, LinearModulus(0.5), SamplerSpec(seed=42, count=10000, window_scale=50.0))
    assert rep.passed
    assert rep.extra["lipschitz"]["lipschitz_constant"] == 1.0
    assert abs(rep.extra["lipschitz"]["observed_lipschitz"] - 1.0) < 1e-9


def test_derivative_bounds_cone_containing_channel():
    from semiconvexity import HRepBody

    quad = HRepBody([[-1.0, 0.0], [0.0, -1.0]], [0.0, 0.0])
    f = parse_expression("1 + x1 - x2", 2, domain=quad)
    rep = check_derivative_bounds(f, quad, PowerModulus(0.5), SMALL)
    assert rep.passed
    assert rep.extra["channels"][0]["name"] == "q2-cone"
    r = rep.extra["ball_chain"]["r"]
    assert abs(rep.extra["channels"][0]["bound"] - 12.0 * (1 + 1 / r)) < 1e-12


def test_derivative_bounds_degenerate_reports_no_theorem():
    body = StripBody()
    f = catalog_field("product", scale=0.5, domain=body)
    rep = check_derivative_bounds(f, body, PowerModulus(0.5), SMALL)
    assert rep.passed is None
    assert rep.extra["status"] == "no-theorem-applies"


# ---------------------------------------------------------------------------
# implication battery (same seed, tol 1e-9)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name,field,body,m", battery(), ids=[e[0] for e in battery()])
def test_implication_chain(name, field, body, m):
    tol = 1e-9
    spec = SamplerSpec(seed=42, count=4000)
    double = scale_modulus(m, 2.0)
    for mod in (m, double):
        sc = check_semiconvex(field, body, mod, spec, tol=tol).passed
        scc = check_semiconcave(field, body, mod, spec, tol=tol).passed
        env = check_envelope(field, body, mod, spec, tol=tol).passed
        gap = check_directional_gap(field, body, mod, spec, tol=tol).passed
        sc2 = check_semiconvex(field, body, scale_modulus(mod, 2.0), spec, tol=tol).passed
        scc2 = check_semiconcave(field, body, scale_modulus(mod, 2.0), spec, tol=tol).passed
        # both semiconvex and semiconcave -> first-order envelope
        if sc and scc:
            assert env, f"{name}: envelope must follow from two-sided semiconvexity"
        # envelope -> both with the doubled modulus
        if env:
            assert sc2 and scc2, f"{name}: doubled-modulus semiconvexity must follow from the envelope"
        # directional gap -> both, same modulus
        if gap:
            assert sc and scc, f"{name}: semiconvexity must follow from the directional gap"


@pytest.mark.parametrize("name,field,body,m",
                         [e for e in battery() if e[3].linear],
                         ids=[e[0] for e in battery() if e[3].linear])
def test_linear_modulus_envelope_converse(name, field, body, m):
    # for linear moduli the envelope gives semiconvexity with the SAME modulus
    spec = SamplerSpec(seed=42, count=4000)
    if check_envelope(field, body, m, spec).passed:
        assert check_semiconvex(field, body, m, spec).passed
        assert check_semiconcave(field, body, m, spec).passed


def test_battery_passes_natural_moduli():
    spec = SamplerSpec(seed=42, count=4000)
    for name, field, body, m in battery():
        assert check_semiconvex(field, body, m, spec).passed, name
        assert check_semiconcave(field, body, m, spec).passed, name


# ---------------------------------------------------------------------------
# line equivalence
# ---------------------------------------------------------------------------

def test_line_equivalence_on_catalog():
    spec = SamplerSpec(seed=42, count=2000)
    for name, field, body, m in battery()[:3]:
        full = check_semiconvex(field, body, m, spec).passed
        lines = check_semiconvex_on_lines(field, body, m, spec, n_lines=12).passed
        assert full == lines, name


def test_line_equivalence_detects_failure_both_ways():
    body = unit_interval_body()
    f = parse_expression("x1^1.5/1.5", 1, domain=body)
    bad = scale_modulus(PowerModulus(0.5), 0.05)
    spec = SamplerSpec(seed=42, count=4000)
    full = check_semiconcave(f, body, bad, spec).passed
    lines = check_semiconvex_on_lines(f.negated(), body, bad, spec, n_lines=12).passed
    assert full is False and lines is False
