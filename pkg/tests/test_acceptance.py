"""Acceptance suite: one test per criterion, each printing its pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Tolerances are fixed here, not configurable.
"""

import math
import time

import numpy as np
import pytest

from semiconvexity import (BallBody, HRepBody, LinearModulus, PowerEta, SamplerSpec,
                           StripBody, build_integral_modulus, build_strip_witness, catalog_field,
                           check_envelope, check_semiconcave, check_semiconvex,
                           check_directional_gap, construct_witness, eccentricity,
                           estimate_derivative_modulus, parse_expression, recession_cone,
                           recession_oracle_report, refute_c1omega, scale_modulus)

from helpers import battery, half_strip, half_strip_x_interval, unit_square


class _Timer:
    def __init__(self, label, budget_s):
        self.label = label
        self.budget = budget_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        status = "PASS" if exc_type is None else "FAIL"
        print(f"ACCEPTANCE {self.label}: {status} ({elapsed:.2f} s, budget {self.budget:.0f} s)")
        if exc_type is None:
            assert elapsed < self.budget, f"{self.label} exceeded its runtime budget: {elapsed:.2f} s"


def test_criterion_1_linf_optimality():
    with _Timer("1 (sup-norm optimality of the factor 4)", 5.0):
        f = parse_expression("x1^2 - x2^2", 2)
        g1 = f.gradient([1.0, 1.0])
        g0 = f.gradient([0.0, 0.0])
        gap_l1 = float(np.sum(np.abs(g1 - g0)))  # dual of the sup norm
        assert abs(gap_l1 - 4.0) <= 1e-12
        body = BallBody([0.0, 0.0], 1.0, "inf")
        field = parse_expression("x1^2 - x2^2", 2, domain=body)
        rep = check_envelope(field, body, LinearModulus(1.0),
                             SamplerSpec(seed=42, count=10000), p="inf", tol=1e-9)
        assert rep.passed, rep.min_margin


def test_criterion_2_linear_modulus_exact_lipschitz():
    with _Timer("2 (linear-modulus saddles: exact Lipschitz constants)", 10.0):
        body = BallBody([0.0, 0.0], 1.0, 2)
        spec = SamplerSpec(seed=42, count=10000)
        for C in (0.5, 1.0, 3.0):
            field = catalog_field("saddle", c=C, domain=body)
            m = LinearModulus(C / 2.0)
            assert check_semiconvex(field, body, m, spec, tol=1e-9).passed
            assert check_semiconcave(field, body, m, spec, tol=1e-9).passed
            est = estimate_derivative_modulus(field, body, spec, candidate=LinearModulus(1.0),
                                              include_axis_pairs=True)
            lipschitz = est["sup_ratio"]
            assert C * (1.0 - 1e-2) <= lipschitz <= C * (1.0 + 1e-2), lipschitz


def test_criterion_3_bounded_body_bound_and_eccentricity():
    with _Timer("3 (bounded-body derivative bound, eccentricity)", 10.0):
        body = BallBody([0.0, 0.0], 1.0, 2)
        field = catalog_field("product", domain=body)
        e_g = eccentricity(body)
        assert e_g == 2.0
        est = estimate_derivative_modulus(field, body, SamplerSpec(seed=42, count=10000),
                                          candidate=LinearModulus(0.5))
        assert est["sup_ratio"] <= 6.0 * e_g
        assert 1.9 <= est["sup_ratio"] <= 2.0 + 1e-9  # observed ~ 2
        assert abs(eccentricity(unit_square()) - 2.0 * math.sqrt(2.0)) <= 1e-9


def test_criterion_4_integral_modulus_construction():
    with _Timer("4 (integral modulus construction)", 5.0):
        om = build_integral_modulus(PowerEta(0.5))
        closed_form = 2.0 + math.sqrt(math.log(5.0))
        assert abs(om(4.0) - closed_form) <= 1e-8
        grid = np.linspace(0.0, 100.0, 100)
        assert np.all(om(grid) - np.minimum(1.0, grid) >= -1e-9)
        log_grid = np.geomspace(1.0, 1e6, 400)
        vals = om(log_grid)
        slopes = np.diff(vals) / np.diff(log_grid)
        assert np.max(np.diff(slopes)) <= 1e-9
        assert om(1e6) / math.log(1e6) < om(1e3) / math.log(1e3)


def test_criterion_5_strip_counterexample_end_to_end():
    with _Timer("5 (strip counterexample end to end)", 10.0):
        w = build_strip_witness()
        spec = SamplerSpec(seed=42, count=10000)
        scaled = scale_modulus(w.modulus, w.C)
        assert check_semiconvex(w.field, w.body, scaled, spec, tol=1e-9).passed
        assert check_semiconcave(w.field, w.body, scaled, spec, tol=1e-9).passed
        assert check_envelope(w.field, w.body, scaled, spec, tol=1e-9).passed
        rep = refute_c1omega(w, schedule=[float(2 ** k) for k in range(11)])
        assert not rep.undefeated
        for entry in rep.entries:
            predicted = 4.0 * entry.D ** 2
            assert predicted / 2.0 <= entry.t2 <= 2.0 * predicted


def test_criterion_6_recursive_construction_three_bodies():
    with _Timer("6 (recursive construction on three catalog bodies)", 60.0):
        cases = [
            (StripBody(), 1024.0),
            (half_strip(), 16.0),
            (half_strip_x_interval(), 16.0),
        ]
        for body, dmax in cases:
            w = construct_witness(body, suite_count=10000, suite_seed=42, tol=1e-9)
            suite = w.margin_suite(count=10000, seed=42, tol=1e-9)
            assert suite["semiconvex"].passed and suite["semiconcave"].passed
            rep = refute_c1omega(w)
            assert not rep.undefeated
            assert rep.largest_defeated == dmax
        # the three-dimensional case must have exercised the lifting machinery
        w3 = construct_witness(half_strip_x_interval(), suite_count=10000, suite_seed=42, tol=1e-9)
        lift_steps = [t for t in w3.trace if t["step"] == "lift"]
        assert lift_steps, "expected a lifting step in the 3D trace"
        assert lift_steps[0]["alpha"] > 0.0
        assert lift_steps[0]["beta"] >= 1.0


def test_criterion_7_equivalence_battery():
    with _Timer("7 (equivalence battery, factors 1 and 2)", 30.0):
        spec = SamplerSpec(seed=42, count=10000)
        tol = 1e-9
        for name, field, body, m in battery():
            sc = check_semiconvex(field, body, m, spec, tol=tol).passed
            scc = check_semiconcave(field, body, m, spec, tol=tol).passed
            env = check_envelope(field, body, m, spec, tol=tol).passed
            gap = check_directional_gap(field, body, m, spec, tol=tol).passed
            sc2 = check_semiconvex(field, body, scale_modulus(m, 2.0), spec, tol=tol).passed
            scc2 = check_semiconcave(field, body, scale_modulus(m, 2.0), spec, tol=tol).passed
            assert sc and scc, name
            # (i) two-sided semiconvexity -> envelope, factor 1
            assert env, name
            # (ii) envelope -> two-sided with factor 2
            assert sc2 and scc2, name
            # (iii) directional gap -> two-sided, factor 1
            if gap:
                assert sc and scc, name
            # (iv) linear moduli: envelope -> two-sided with factor 1
            if m.linear and env:
                assert sc and scc, name


def test_criterion_8_recession_oracle_agreement():
    with _Timer("8 (recession cones vs sampling oracle)", 20.0):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 20:
            n = int(rng.integers(2, 4))
            m = int(rng.integers(3, 9))
            A = rng.standard_normal((m, n))
            b = rng.uniform(0.5, 2.0, m)
            body = HRepBody(A, b)
            cone = recession_cone(body, validate=False)
            rep = recession_oracle_report(body, cone, n_probes=1000, seed=checked)
            assert rep.passed, rep.witness
            checked += 1
