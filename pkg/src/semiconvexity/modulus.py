"""Moduli of continuity: nondecreasing omega on [0, inf) with omega(0+) = 0.

Kinds cover the catalog used elsewhere (zero, linear, power, sqrt-log,
tabulated, scaled) plus the two-piece integral construction that turns a
concave sublinear eta into a concave unbounded modulus:

    base(t) = t                                   on [0, 1]
    base(t) = 1 + (1/eta(1)) * int_1^t eta(u)/u^2 du   for t >= 1
    omega(t) = base(t) + sqrt(log(1 + t))

The integral is evaluated by adaptive Simpson quadrature (vectorized over
query points) to a relative tolerance; closed forms for specific eta live in
the tests as independent oracles.
"""

import math

import numpy as np

from .errors import ConstructionError, DomainError, NumericError
from .reporting import MarginReport

LIMIT_PROBE_KS = tuple(range(1, 13))  # omega(10^-k) probes certifying the limit at 0+
LIMIT_TOL = 1e-6


def _as_t_array(t):
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("modulus arguments must be finite")
    if np.any(arr < 0):
        raise DomainError("modulus arguments must be nonnegative")
    return arr


# ---------------------------------------------------------------------------
# Eta: concave sublinear input functions for the integral construction
# ---------------------------------------------------------------------------

class Eta:
    """Continuous nondecreasing nonconstant concave eta with eta(0)=0, eta(t)/t -> 0."""

    kind = "eta"

    def _eval(self, t):
        raise NotImplementedError

    def __call__(self, t):
        arr = _as_t_array(t)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def to_spec(self):
        raise NotImplementedError

    def validate(self, tol=1e-9):
        """Grid-check the hypotheses; raises ConstructionError with the failing point."""
        grid = np.concatenate([np.linspace(0.0, 2.0, 41), np.geomspace(2.0, 1e6, 120)[1:]])
        vals = self(grid)
        if abs(vals[0]) > tol:
            raise ConstructionError("eta(0) must be 0")
        diffs = np.diff(vals)
        if np.any(diffs < -tol * (1.0 + np.abs(vals[:-1]))):
            i = int(np.argmin(diffs))
            raise ConstructionError(f"eta not nondecreasing near t={grid[i]:.6g}")
        slopes = diffs / np.diff(grid)
        dslope = np.diff(slopes)
        if np.any(dslope > tol * (1.0 + np.abs(slopes[:-1]))):
            i = int(np.argmax(dslope))
            raise ConstructionError(f"eta not concave near t={grid[i + 1]:.6g}")
        if vals[-1] <= tol:
            raise ConstructionError("eta is constant zero")
        ratio_grid = np.geomspace(1.0, 1e6, 25)
        ratios = self(ratio_grid) / ratio_grid
        if not ratios[-1] < 0.99 * ratios[0]:
            raise ConstructionError("eta(t)/t does not decay on the geometric grid (eta not sublinear)")
        return True


class PowerEta(Eta):
    kind = "power"

    def __init__(self, alpha):
        if not (0.0 < alpha < 1.0):
            raise ConstructionError("power eta needs alpha in (0, 1)")
        self.alpha = float(alpha)

    def _eval(self, t):
        return np.power(t, self.alpha)

    def to_spec(self):
        return {"kind": "power", "alpha": self.alpha}


class PiecewiseLinearEta(Eta):
    """Linear interpolation through knots; constant (final slope 0) beyond the last."""

    kind = "piecewise-linear"

    def __init__(self, knots):
        pts = [(float(t), float(v)) for t, v in knots]
        if len(pts) < 2:
            raise ConstructionError("piecewise-linear eta needs at least two knots")
        ts = np.array([p[0] for p in pts])
        vs = np.array([p[1] for p in pts])
        if ts[0] != 0.0 or vs[0] != 0.0:
            raise ConstructionError("piecewise-linear eta must start at the knot (0, 0)")
        if np.any(np.diff(ts) <= 0):
            raise ConstructionError("piecewise-linear eta knots must be strictly increasing in t")
        self.ts = ts
        self.vs = vs

    def _eval(self, t):
        return np.interp(t, self.ts, self.vs)

    def to_spec(self):
        return {"kind": "piecewise-linear", "knots": [[t, v] for t, v in zip(self.ts, self.vs)]}


class ULEta(Eta):
    """Wedge profile built from boundary functions: a*x on [0, 2], h(x) + b beyond."""

    kind = "ul-profile"

    def __init__(self, a, b, h, h_spec=None):
        if a <= 0 or b <= 0:
            raise ConstructionError("ul eta needs positive a and b")
        self.a = float(a)
        self.b = float(b)
        self.h = h
        self.h_spec = h_spec

    def _eval(self, t):
        t = np.atleast_1d(t)
        out = self.a * t
        big = t > 2.0
        if np.any(big):
            out = out.copy()
            out[big] = self.h(t[big]) + self.b
        return out

    def to_spec(self):
        if self.h_spec is None:
            raise ConstructionError("this ul eta wraps an opaque callable and cannot be serialized")
        return {"kind": "ul-profile", "a": self.a, "b": self.b, "h": self.h_spec}


# ---------------------------------------------------------------------------
# Modulus kinds
# ---------------------------------------------------------------------------

class Modulus:
    kind = "modulus"
    concave = False
    unbounded = False
    linear = False

    def _eval(self, t):
        raise NotImplementedError

    def __call__(self, t):
        arr = _as_t_array(t)
        out = self._eval(np.atleast_1d(arr).astype(np.float64))
        return float(out[0]) if arr.ndim == 0 else out

    def scaled(self, c):
        return scale_modulus(self, c)

    def to_spec(self):
        raise NotImplementedError


class ZeroModulus(Modulus):
    kind = "zero"
    concave = True
    linear = True

    def _eval(self, t):
        return np.zeros_like(t)

    def to_spec(self):
        return {"kind": "zero"}


class LinearModulus(Modulus):
    kind = "linear"
    concave = True
    linear = True

    def __init__(self, slope):
        if slope < 0:
            raise DomainError("linear modulus needs slope >= 0")
        self.slope = float(slope)
        self.unbounded = slope > 0

    def _eval(self, t):
        return self.slope * t

    def to_spec(self):
        return {"kind": "linear", "slope": self.slope}


class PowerModulus(Modulus):
    kind = "power"
    concave = True

    def __init__(self, alpha, scale=1.0):
        if not (0.0 < alpha <= 1.0):
            raise DomainError("power modulus needs alpha in (0, 1]")
        if scale <= 0:
            raise DomainError("power modulus needs scale > 0")
        self.alpha = float(alpha)
        self.scale = float(scale)
        self.unbounded = True
        self.linear = alpha == 1.0

    def _eval(self, t):
        return self.scale * np.power(t, self.alpha)

    def to_spec(self):
        return {"kind": "power", "alpha": self.alpha, "scale": self.scale}


class SqrtLogModulus(Modulus):
    kind = "sqrt-log"
    concave = True
    unbounded = True

    def _eval(self, t):
        return np.sqrt(np.log1p(t))

    def to_spec(self):
        return {"kind": "sqrt-log"}


class ScaledModulus(Modulus):
    kind = "scaled"

    def __init__(self, base, factor):
        if factor <= 0 or not math.isfinite(factor):
            raise DomainError("scale factor must be a positive finite real")
        self.base = base
        self.factor = float(factor)
        self.concave = base.concave
        self.unbounded = base.unbounded
        self.linear = base.linear

    def _eval(self, t):
        return self.factor * self.base._eval(t)

    def to_spec(self):
        return {"kind": "scaled", "base": self.base.to_spec(), "factor": self.factor}


class TabulatedModulus(Modulus):
    """Linear interpolation through (t, omega) knots.

    Left of the first knot the graph is joined to the origin; right of the
    last knot the value is held constant.  The concave flag is set only when
    the knot slopes verify it.
    """

    kind = "tabulated"

    def __init__(self, knots):
        pts = [(float(t), float(v)) for t, v in knots]
        if len(pts) < 1:
            raise DomainError("tabulated modulus needs at least one knot")
        ts = np.array([p[0] for p in pts])
        vs = np.array([p[1] for p in pts])
        if np.any(ts < 0):
            raise DomainError("tabulated knots must have t >= 0")
        if np.any(np.diff(ts) <= 0):
            raise DomainError("tabulated knots must be strictly increasing in t")
        if ts[0] > 0:
            ts = np.concatenate([[0.0], ts])
            vs = np.concatenate([[0.0], vs])
        self.ts = ts
        self.vs = vs
        slopes = np.diff(vs) / np.diff(ts)
        self.concave = bool(slopes.size == 0 or np.all(np.diff(slopes) <= 1e-12))
        self.unbounded = False

    def _eval(self, t):
        return np.interp(t, self.ts, self.vs)

    def to_spec(self):
        return {"kind": "tabulated", "knots": [[t, v] for t, v in zip(self.ts, self.vs)]}


# ---------------------------------------------------------------------------
# Vectorized adaptive Simpson quadrature
# ---------------------------------------------------------------------------

def _adaptive_simpson_segments(fn, lo, hi, rel_tol, max_rounds=64):
    """Integrate fn over each [lo_i, hi_i] with per-segment relative tolerance.

    Worklist scheme: every segment is Simpson-estimated, split in half, and a
    half is retired once the Richardson error estimate clears its share of the
    tolerance.  fn must accept numpy arrays; the integrand is assumed finite.
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    totals = np.zeros(lo.shape[0])
    if lo.size == 0:
        return totals

    a = lo.copy()
    b = hi.copy()
    owner = np.arange(lo.shape[0])
    fa = fn(a)
    fb = fn(b)
    fm = fn(0.5 * (a + b))
    S = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    for _ in range(max_rounds):
        if a.size == 0:
            return totals
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = fn(lm)
        frm = fn(rm)
        Sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        Sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        S2 = Sl + Sr
        err = (S2 - S) / 15.0
        width_floor = (b - a) <= 1e-14 * (1.0 + np.abs(a))
        done = (np.abs(err) <= rel_tol * np.abs(S2) + 1e-300) | width_floor
        if np.any(done):
            np.add.at(totals, owner[done], S2[done] + err[done])
        keep = ~done
        if not np.any(keep):
            return totals
        # split surviving segments into their two halves
        a = np.concatenate([a[keep], m[keep]])
        b = np.concatenate([m[keep], b[keep]])
        fa = np.concatenate([fa[keep], fm[keep]])
        fb = np.concatenate([fm[keep], fb[keep]])
        fm = np.concatenate([flm[keep], frm[keep]])
        Sn = np.concatenate([Sl[keep], Sr[keep]])
        owner = np.concatenate([owner[keep], owner[keep]])
        S = Sn
    raise NumericError("adaptive Simpson quadrature did not converge")


def _decade_split(bounds):
    """Insert intermediate boundaries so no segment spans more than one decade."""
    out = [bounds[0]]
    for hi in bounds[1:]:
        lo = out[-1]
        while hi / lo > 10.0:
            lo = lo * 10.0
            out.append(lo)
        out.append(hi)
    return np.array(out)


class IntegralModulus(Modulus):
    kind = "integral"
    concave = True
    unbounded = True

    def __init__(self, eta, quad_tol=1e-10):
        if quad_tol <= 0:
            raise DomainError("quad_tol must be positive")
        eta.validate()
        eta1 = eta(1.0)
        if eta1 <= 0:
            raise ConstructionError("integral construction needs eta(1) > 0")
        self.eta = eta
        self.eta1 = float(eta1)
        self.quad_tol = float(quad_tol)

    def _integrand(self, u):
        # (eta(u)/u)/u avoids overflow of u**2 for u beyond ~1e154
        return (self.eta(u) / u) / u

    def _integral_to(self, ts):
        """int_1^t eta(u)/u^2 du for each t >= 1, via shared cumulative segments."""
        uniq, inverse = np.unique(ts, return_inverse=True)
        bounds = _decade_split(np.concatenate([[1.0], uniq]))
        segs = _adaptive_simpson_segments(self._integrand, bounds[:-1], bounds[1:], self.quad_tol)
        cum = np.concatenate([[0.0], np.cumsum(segs)])
        at_uniq = cum[np.searchsorted(bounds, uniq)]
        return at_uniq[inverse]

    def base(self, t):
        """The two-piece concave part (without the sqrt-log summand)."""
        arr = _as_t_array(t)
        flat = np.atleast_1d(arr).astype(np.float64)
        out = flat.copy()
        big = flat > 1.0
        if np.any(big):
            out[big] = 1.0 + self._integral_to(flat[big]) / self.eta1
        return float(out[0]) if arr.ndim == 0 else out

    def _eval(self, t):
        out = t.copy()
        big = t > 1.0
        if np.any(big):
            out[big] = 1.0 + self._integral_to(t[big]) / self.eta1
        return out + np.sqrt(np.log1p(t))

    def to_spec(self):
        return {"kind": "integral", "eta": self.eta.to_spec(), "quad_tol": self.quad_tol}


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def eval_modulus(m, t):
    """omega(t) with domain validation (t >= 0, finite)."""
    return m(t)


def build_integral_modulus(eta, quad_tol=1e-10):
    """Construct the concave unbounded modulus from a valid eta."""
    return IntegralModulus(eta, quad_tol=quad_tol)


def scale_modulus(m, c):
    """Pointwise c * omega; preserves flags. c must be positive."""
    if not (c > 0 and math.isfinite(c)):
        raise DomainError("scale factor must be a positive finite real")
    if isinstance(m, ScaledModulus):
        return ScaledModulus(m.base, m.factor * float(c))
    return ScaledModulus(m, float(c))


def check_modulus_axioms(m, grid, tol=1e-9, limit_tol=LIMIT_TOL):
    """Monotonicity margin on the grid plus the fixed probe schedule at 0+.

    Pass requires min consecutive difference >= -tol*(1+scale) and
    omega(10^-12) < limit_tol.  Concavity (slope decrease) is reported as an
    extra margin when the modulus declares the flag.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise DomainError("axioms check needs a nonempty grid")
    if np.any(np.diff(grid) <= 0) or np.any(grid < 0):
        raise DomainError("axioms grid must be increasing and nonnegative")
    vals = m(grid)
    scale = 1.0 + float(np.max(np.abs(vals)))
    diffs = np.diff(vals) if grid.size > 1 else np.array([np.inf])
    mono_margin = float(np.min(diffs)) if diffs.size else np.inf
    worst = {}
    if diffs.size and np.isfinite(mono_margin):
        i = int(np.argmin(diffs))
        worst = {"index": i, "t": [float(grid[i]), float(grid[i + 1])], "values": [float(vals[i]), float(vals[i + 1])]}
    tail = [float(m(10.0 ** (-k))) for k in LIMIT_PROBE_KS]
    passed = mono_margin >= -tol * scale and tail[-1] < limit_tol
    extra = {"limit_probes": tail, "limit_tol": limit_tol}
    if m.concave and grid.size > 2:
        slopes = diffs / np.diff(grid)
        extra["concavity_margin"] = float(np.max(np.diff(slopes))) if slopes.size > 1 else 0.0
    return MarginReport(
        check="modulus-axioms",
        n_samples=int(grid.size),
        min_margin=mono_margin,
        witness=worst,
        seed=0,
        tol=tol,
        passed=bool(passed),
        config={"kind": m.kind, "grid_span": [float(grid[0]), float(grid[-1])]},
        extra=extra,
    )


def asymptotics_probe(m, t_grid):
    """omega(t)/t and omega(t)/log t ratio tables plus a three-way classification.

    Classes: 'linear-like' (omega/t flat across the span), 'super-log-decay'
    (omega/log t falls from 1e3 to 1e6 — the class admitting log-beating
    refutations), else 'sub-linear-at-inf'.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid[0] > 1e-6 or t_grid[-1] < 1e6:
        raise DomainError("asymptotics probe grid must span at least [1e-6, 1e6]")
    vals = m(t_grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_t = vals / t_grid
    log_pts = np.array([1e3, 1e6])
    log_ratios = m(log_pts) / np.log(log_pts)
    r_small = float(np.interp(1e-6, t_grid, ratio_t))
    r_large = float(np.interp(1e6, t_grid, ratio_t))
    if r_small > 0 and abs(r_large / r_small - 1.0) <= 1e-2:
        classification = "linear-like"
    elif log_ratios[1] < log_ratios[0] * (1.0 - 1e-9):
        classification = "super-log-decay"
    else:
        classification = "sub-linear-at-inf"
    return {
        "t": t_grid.tolist(),
        "ratio_t": [float(r) for r in ratio_t],
        "ratio_log": {"1e3": float(log_ratios[0]), "1e6": float(log_ratios[1])},
        "classification": classification,
    }


def modulus_from_spec(spec):
    """Inverse of Modulus.to_spec for the JSON scene schema."""
    from .errors import SceneError

    if not isinstance(spec, dict) or "kind" not in spec:
        raise SceneError("modulus spec must be an object with a 'kind'")
    kind = spec["kind"]
    known = {
        "zero": set(),
        "linear": {"slope"},
        "power": {"alpha", "scale"},
        "sqrt-log": set(),
        "scaled": {"base", "factor"},
        "tabulated": {"knots"},
        "integral": {"eta", "quad_tol"},
    }
    if kind not in known:
        raise SceneError(f"unknown modulus kind {kind!r}")
    stray = set(spec) - known[kind] - {"kind"}
    if stray:
        raise SceneError(f"unknown keys in modulus spec: {sorted(stray)}")
    if kind == "zero":
        return ZeroModulus()
    if kind == "linear":
        return LinearModulus(spec["slope"])
    if kind == "power":
        return PowerModulus(spec["alpha"], spec.get("scale", 1.0))
    if kind == "sqrt-log":
        return SqrtLogModulus()
    if kind == "scaled":
        return ScaledModulus(modulus_from_spec(spec["base"]), spec["factor"])
    if kind == "tabulated":
        return TabulatedModulus(spec["knots"])
    return IntegralModulus(eta_from_spec(spec["eta"]), quad_tol=spec.get("quad_tol", 1e-10))


def eta_from_spec(spec):
    from .errors import SceneError

    if not isinstance(spec, dict) or "kind" not in spec:
        raise SceneError("eta spec must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "power":
        _reject_stray(spec, {"alpha"}, "eta")
        return PowerEta(spec["alpha"])
    if kind == "piecewise-linear":
        _reject_stray(spec, {"knots"}, "eta")
        return PiecewiseLinearEta(spec["knots"])
    if kind == "ul-profile":
        _reject_stray(spec, {"a", "b", "h"}, "eta")
        from .boundary import boundary_from_spec

        h = boundary_from_spec(spec["h"])
        return ULEta(spec["a"], spec["b"], h, h_spec=spec["h"])
    raise SceneError(f"unknown eta kind {kind!r}")


def _reject_stray(spec, allowed, what):
    from .errors import SceneError

    stray = set(spec) - allowed - {"kind"}
    if stray:
        raise SceneError(f"unknown keys in {what} spec: {sorted(stray)}")
