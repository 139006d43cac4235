"""Seeded, reproducible samplers over convex bodies.

All randomness flows from one 64-bit seed through numpy's PCG64 generator,
so re-running any check with the same spec reproduces its report.  Pair
separations are drawn log-uniformly to exercise both modulus regimes, and the
triple weights always include the deterministic block {1/4, 1/2, 3/4}.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError


@dataclass
class SamplerSpec:
    seed: int = 42
    count: int = 10000
    window: tuple | None = None  # ((lo...), (hi...)) overriding the body default
    window_scale: float = 100.0

    def resolve_window(self, body):
        if self.window is not None:
            lo = np.asarray(self.window[0], dtype=np.float64)
            hi = np.asarray(self.window[1], dtype=np.float64)
            if lo.shape != (body.n,) or hi.shape != (body.n,) or np.any(hi <= lo):
                raise DomainError("sampler window must give lo < hi per coordinate")
            return lo, hi
        return body.default_window(self.window_scale)

    def to_dict(self):
        out = {"seed": self.seed, "count": self.count, "window_scale": self.window_scale}
        if self.window is not None:
            out["window"] = [list(map(float, self.window[0])), list(map(float, self.window[1]))]
        return out


def rng_for(spec, stream=0):
    return np.random.default_rng(np.random.SeedSequence(entropy=spec.seed, spawn_key=(stream,)))


def sphere_directions(rng, count, n):
    d = rng.standard_normal((count, n))
    norms = kernels.row_norms(d, 2)
    norms[norms == 0] = 1.0
    return d / norms[:, None]


def sample_points(body, spec, rng=None, count=None, max_rounds=200):
    """Uniform rejection sampling in body-and-window."""
    rng = rng or rng_for(spec, stream=0)
    count = count or spec.count
    lo, hi = spec.resolve_window(body)
    out = np.empty((count, body.n))
    have = 0
    attempts = 0
    for _ in range(max_rounds):
        draw = rng.uniform(lo, hi, size=(max(2 * (count - have), 64), body.n))
        attempts += draw.shape[0]
        keep = draw[body.contains(draw)]
        take = min(count - have, keep.shape[0])
        out[have:have + take] = keep[:take]
        have += take
        if have == count:
            return out
        if attempts > 4000 and have < attempts / 5000:
            break
    raise DomainError("rejection sampling starved: window barely meets the body (degenerate setup)")


def sample_pairs(body, spec, p=2, min_frac=1e-4, interior_margin=0.0, axis_block=False):
    """(X, Y) pairs in the body with log-uniform separations.

    interior_margin > 0 additionally keeps a margin-ball inside the window for
    finite-difference stencils.  axis_block prepends deterministic axis-aligned
    separations (adversarial pairs for derivative-modulus estimates).
    """
    rng = rng_for(spec, stream=1)
    count = spec.count
    lo, hi = spec.resolve_window(body)
    scale = float(np.linalg.norm(hi - lo))
    r_lo, r_hi = min_frac * scale, scale

    X = sample_points(body, spec, rng=rng, count=count)
    Y = np.empty_like(X)
    pending = np.arange(count)
    r_shrink = np.ones(count)
    for round_idx in range(60):
        if pending.size == 0:
            break
        dirs = sphere_directions(rng, pending.size, body.n)
        radii = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), size=pending.size)) * r_shrink[pending]
        cand = X[pending] + radii[:, None] * dirs
        ok = body.contains(cand)
        if interior_margin > 0:
            ok &= np.all((cand - lo >= interior_margin) & (hi - cand >= interior_margin), axis=1)
        Y[pending[ok]] = cand[ok]
        pending = pending[~ok]
        if round_idx >= 10:
            r_shrink[pending] *= 0.5
    if pending.size:
        raise DomainError("pair sampler could not place separations inside the body")

    if axis_block:
        k = min(count, 8 * body.n)
        radii = np.geomspace(r_lo, min(1.0, r_hi), max(k // (2 * body.n), 1))
        rows_x, rows_y = [], []
        base = X[0]
        for r in radii:
            for j in range(body.n):
                for s in (1.0, -1.0):
                    e = np.zeros(body.n)
                    e[j] = s * r
                    if body.contains_point(base + e):
                        rows_x.append(base)
                        rows_y.append(base + e)
        if rows_x:
            m = len(rows_x)
            X = np.vstack([np.array(rows_x), X[m:]])
            Y = np.vstack([np.array(rows_y), Y[m:]])
    return X, Y


def sample_triples(body, spec):
    """(X, Y, lam): independent body points and mixture weights."""
    rng = rng_for(spec, stream=2)
    count = spec.count
    X = sample_points(body, spec, rng=rng, count=count)
    Y = sample_points(body, spec, rng=rng, count=count)
    n_fixed = max(3, count // 4)
    fixed = np.tile(np.array([0.25, 0.5, 0.75]), n_fixed // 3 + 1)[:n_fixed]
    lam = np.concatenate([fixed, rng.uniform(0.0, 1.0, size=count - n_fixed)])
    return X, Y, lam


def sample_lines(body, spec, n_lines=32):
    """(base, direction) pairs for line-restriction checks."""
    rng = rng_for(spec, stream=3)
    bases = sample_points(body, spec, rng=rng, count=n_lines)
    dirs = sphere_directions(rng, n_lines, body.n)
    return bases, dirs
