import numpy as np
import pytest

from semiconvexity import BallBody, DomainError, SamplerSpec, StripBody
from semiconvexity.sampling import sample_lines, sample_pairs, sample_points, sample_triples

from helpers import unit_square


def test_points_deterministic_and_inside():
    body = unit_square()
    spec = SamplerSpec(seed=42, count=500)
    a = sample_points(body, spec)
    b = sample_points(body, spec)
    np.testing.assert_array_equal(a, b)
    assert np.all(body.contains(a))


def test_seed_changes_stream():
    body = unit_square()
    a = sample_points(body, SamplerSpec(seed=1, count=100))
    b = sample_points(body, SamplerSpec(seed=2, count=100))
    assert not np.array_equal(a, b)


def test_triples_contain_fixed_lambda_block():
    body = unit_square()
    X, Y, lam = sample_triples(body, SamplerSpec(seed=3, count=200))
    assert X.shape == Y.shape == (200, 2)
    fixed = lam[:50]
    assert set(np.round(fixed, 12)) == {0.25, 0.5, 0.75}
    assert np.all((lam >= 0) & (lam <= 1))


def test_pairs_inside_with_log_uniform_radii():
    body = StripBody()
    spec = SamplerSpec(seed=5, count=400)
    X, Y = sample_pairs(body, spec)
    assert np.all(body.contains(X)) and np.all(body.contains(Y))
    r = np.linalg.norm(Y - X, axis=1)
    assert r.min() > 0
    # both small and large separations appear (log-uniform coverage)
    assert (r < 0.1).any() and (r > 10.0).any()


def test_pairs_axis_block_prepended():
    body = BallBody([0.0, 0.0], 1.0, 2)
    X, Y = sample_pairs(body, SamplerSpec(seed=6, count=300), axis_block=True)
    H = Y[:8] - X[:8]
    # axis-aligned: one coordinate ~0 in each of the first rows
    assert np.all(np.min(np.abs(H), axis=1) < 1e-14)


def test_window_override_validation():
    body = unit_square()
    with pytest.raises(DomainError):
        sample_points(body, SamplerSpec(seed=1, count=10, window=([0.0, 0.0], [0.0, 1.0])))


def test_rejection_starvation_raises():
    body = unit_square()
    # window far away from the body: no acceptance
    spec = SamplerSpec(seed=1, count=50, window=(np.array([10.0, 10.0]), np.array([11.0, 11.0])))
    with pytest.raises(DomainError):
        sample_points(body, spec)


def test_sample_lines_shapes():
    body = unit_square()
    bases, dirs = sample_lines(body, SamplerSpec(seed=4, count=100), n_lines=8)
    assert bases.shape == (8, 2) and dirs.shape == (8, 2)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, rtol=1e-12)
