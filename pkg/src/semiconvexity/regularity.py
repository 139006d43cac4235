"""Sampled verification of the defining inequalities and quantitative bounds.

Every check draws a seeded sample, computes a margin per sample (nonnegative
means the inequality holds there), and reports the minimum with its witness.
Pass tolerance is margin >= -tol * (1 + value scale): the inequalities are
exact, the slack only absorbs floating point.
"""

import numpy as np

from . import kernels
from .errors import PreconditionError
from .geometry import Classification, classify_body, dual_exponent, eccentricity
from .reporting import MarginReport
from .sampling import SamplerSpec, rng_for, sample_lines, sample_pairs, sample_triples, sphere_directions

DEFAULT_TOL = 1e-9


def _config(spec, p, **kw):
    out = {"sampler": spec.to_dict(), "norm": p if p != "inf" else "inf"}
    out.update(kw)
    return out


def check_semiconvex(field, body, modulus, spec=None, p=2, tol=DEFAULT_TOL, _check_id="semiconvex"):
    """Midpoint inequality with penalty lam(1-lam) |x-y| omega(|x-y|) over sampled triples."""
    spec = spec or SamplerSpec()
    X, Y, lam = sample_triples(body, spec)
    mid = lam[:, None] * X + (1.0 - lam[:, None]) * Y
    fx = field.values(X, check_domain=False)
    fy = field.values(Y, check_domain=False)
    fm = field.values(mid, check_domain=False)
    dist = kernels.row_norms(X - Y, p)
    om = modulus(dist)
    margins = kernels.semiconvex_margins(fx, fy, fm, dist, lam, om)
    i = int(np.argmin(margins))
    scale = 1.0 + float(max(np.max(np.abs(fx)), np.max(np.abs(fy)), np.max(np.abs(fm))))
    return MarginReport(
        check=_check_id,
        n_samples=len(margins),
        min_margin=float(margins[i]),
        witness={
            "x": X[i].tolist(),
            "y": Y[i].tolist(),
            "lam": float(lam[i]),
            "values": [float(fx[i]), float(fy[i]), float(fm[i])],
            "dist": float(dist[i]),
        },
        seed=spec.seed,
        tol=tol,
        passed=bool(margins[i] >= -tol * scale),
        config=_config(spec, p, modulus=modulus.to_spec(), scale=scale),
    )


def check_semiconcave(field, body, modulus, spec=None, p=2, tol=DEFAULT_TOL):
    """Same inequality for -f; identical sample stream, so reports mirror exactly."""
    return check_semiconvex(field.negated(), body, modulus, spec, p, tol, _check_id="semiconcave")


def check_envelope(field, body, modulus, spec=None, p=2, tol=DEFAULT_TOL):
    """First-order envelope |f(y) - f(x) - grad f(x).(y-x)| <= |h| omega(|h|)."""
    spec = spec or SamplerSpec()
    X, Y = sample_pairs(body, spec, p=p)
    fx = field.values(X, check_domain=False)
    fy = field.values(Y, check_domain=False)
    H = Y - X
    gdot = np.einsum("ij,ij->i", field.gradients(X, check_domain=False), H)
    dist = kernels.row_norms(H, p)
    om = modulus(dist)
    margins = kernels.envelope_margins(fy, fx, gdot, dist, om)
    i = int(np.argmin(margins))
    scale = 1.0 + float(max(np.max(np.abs(fx)), np.max(np.abs(fy))))
    return MarginReport(
        check="envelope",
        n_samples=len(margins),
        min_margin=float(margins[i]),
        witness={"x": X[i].tolist(), "y": Y[i].tolist(), "dist": float(dist[i]),
                 "residual": float(abs(fy[i] - fx[i] - gdot[i]))},
        seed=spec.seed,
        tol=tol,
        passed=bool(margins[i] >= -tol * scale),
        config=_config(spec, p, modulus=modulus.to_spec(), scale=scale),
    )


def check_directional_gap(field, body, modulus, spec=None, p=2, tol=DEFAULT_TOL):
    """|(grad f(y) - grad f(x)).(y-x)| <= |h| omega(|h|) over sampled pairs."""
    spec = spec or SamplerSpec()
    X, Y = sample_pairs(body, spec, p=p)
    H = Y - X
    gx = field.gradients(X, check_domain=False)
    gy = field.gradients(Y, check_domain=False)
    gdot_diff = np.einsum("ij,ij->i", gy - gx, H)
    dist = kernels.row_norms(H, p)
    om = modulus(dist)
    margins = kernels.gap_margins(gdot_diff, dist, om)
    i = int(np.argmin(margins))
    scale = 1.0 + float(np.max(np.abs(gdot_diff)))
    return MarginReport(
        check="gap",
        n_samples=len(margins),
        min_margin=float(margins[i]),
        witness={"x": X[i].tolist(), "y": Y[i].tolist(), "dist": float(dist[i]),
                 "directional_gap": float(abs(gdot_diff[i]))},
        seed=spec.seed,
        tol=tol,
        passed=bool(margins[i] >= -tol * scale),
        config=_config(spec, p, modulus=modulus.to_spec(), scale=scale),
    )


def estimate_derivative_modulus(field, body, spec=None, p=2, candidate=None, include_axis_pairs=True):
    """Empirical (|h|, |grad f(x+h) - grad f(x)|_dual) table and sup ratio against a candidate.

    Axis-aligned pairs are prepended deterministically: they are the adversarial
    directions for the quadratic catalog fields.
    """
    spec = spec or SamplerSpec()
    X, Y = sample_pairs(body, spec, p=p, axis_block=include_axis_pairs)
    q = dual_exponent(p)
    gx = field.gradients(X, check_domain=False)
    gy = field.gradients(Y, check_domain=False)
    gaps = kernels.row_norms(gy - gx, q)
    dist = kernels.row_norms(Y - X, p)
    out = {"h_norms": dist, "grad_gaps": gaps, "n_samples": len(dist)}
    if candidate is not None:
        om = candidate(dist)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(om > 0, gaps / np.where(om > 0, om, 1.0), np.where(gaps > 0, np.inf, 0.0))
        i = int(np.argmax(ratios))
        out.update(sup_ratio=float(ratios[i]),
                   argmax={"x": X[i].tolist(), "y": Y[i].tolist(), "dist": float(dist[i]), "gap": float(gaps[i])})
    return out


def check_inscribed_ball_bound(field, body, modulus, y, r, z, p=2, tol=DEFAULT_TOL, n_boundary=256):
    """Derivative-gap bound from an inscribed ball:
    |grad f(z) - grad f(y)|_dual <= 2 (1 + |z-y|/r) omega(r/2 + |z-y|/2)."""
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if r <= 0:
        raise PreconditionError("ball radius must be positive")
    rng = rng_for(SamplerSpec(seed=0), stream=7)
    dirs = sphere_directions(rng, n_boundary, body.n)
    boundary = y + r * dirs
    inside = body.contains(boundary)
    if not np.all(inside):
        bad = boundary[~inside][0]
        raise PreconditionError("closed ball around y is not contained in the body", witness=bad)
    q = dual_exponent(p)
    gap = float(kernels.row_norms((field.gradient(z) - field.gradient(y)).reshape(1, -1), q)[0])
    dzy = float(kernels.row_norms((z - y).reshape(1, -1), p)[0])
    rhs = 2.0 * (1.0 + dzy / r) * float(modulus(0.5 * r + 0.5 * dzy))
    margin = rhs - gap
    return MarginReport(
        check="zodh",
        n_samples=n_boundary,
        min_margin=margin,
        witness={"y": y.tolist(), "z": z.tolist(), "r": r, "gap": gap, "bound": rhs},
        seed=0,
        tol=tol,
        passed=bool(margin >= -tol * (1.0 + rhs)),
        config={"norm": p, "modulus": modulus.to_spec()},
    )


def check_derivative_bounds(field, body, modulus, spec=None, p=2, tol=DEFAULT_TOL):
    """Quantitative derivative-modulus bounds gated on the body classification.

    bounded           -> sup |grad gap| / omega(|h|) <= 6 e_G
    cone-containing   -> <= 12 (1 + 1/r) for the computed ball chain (a, v, r)
    whole space       -> <= 4; for a linear modulus on a Euclidean body also <= 2,
                         reported as the exact Lipschitz channel with constant 2*slope
    degenerate        -> nothing is asserted ("no theorem applies")
    """
    spec = spec or SamplerSpec()
    cls = classify_body(body)
    channels = []
    extra = {"classification": cls.kind}
    if body.is_whole_space:
        channels.append({"name": "cepr-whole-space", "bound": 4.0})
        if modulus.linear and p == 2:
            slope = modulus(1.0)
            channels.append({"name": "lipschitz-linear", "bound": 2.0})
            extra["lipschitz"] = {"lipschitz_constant": 2.0 * slope}
    elif cls.kind == Classification.BOUNDED:
        e_g = eccentricity(body, p=p)
        channels.append({"name": "q1-bounded", "bound": 6.0 * e_g})
        extra["e_G"] = e_g
    elif cls.kind == Classification.CONE_CONTAINING:
        channels.append({"name": "q2-cone", "bound": 12.0 * (1.0 + 1.0 / cls.radius)})
        extra["ball_chain"] = {"a": cls.base.tolist(), "v": cls.direction.tolist(), "r": float(cls.radius)}
    else:
        return MarginReport(
            check="theorem-q",
            n_samples=0,
            min_margin=0.0,
            witness={},
            seed=spec.seed,
            tol=tol,
            passed=None,
            config=_config(spec, p, modulus=modulus.to_spec()),
            extra={"status": "no-theorem-applies", "classification": cls.kind},
        )
    est = estimate_derivative_modulus(field, body, spec, p=p, candidate=modulus)
    sup = est["sup_ratio"]
    for ch in channels:
        ch["observed"] = sup
        ch["pass"] = bool(sup <= ch["bound"] + tol * (1.0 + sup))
    if "lipschitz" in extra:
        slope = modulus(1.0)
        extra["lipschitz"]["observed_lipschitz"] = sup * slope
    margin = min(ch["bound"] - sup for ch in channels)
    extra["channels"] = channels
    extra["sup_ratio"] = sup
    return MarginReport(
        check="theorem-q",
        n_samples=est["n_samples"],
        min_margin=float(margin),
        witness=est.get("argmax", {}),
        seed=spec.seed,
        tol=tol,
        passed=bool(all(ch["pass"] for ch in channels)),
        config=_config(spec, p, modulus=modulus.to_spec()),
        extra=extra,
    )


def check_semiconvex_on_lines(field, body, modulus, spec=None, n_lines=24, per_line=None, tol=DEFAULT_TOL):
    """Midpoint inequality restricted to sampled lines (1D triples on each)."""
    from .fields import restrict_to_line

    spec = spec or SamplerSpec()
    bases, dirs = sample_lines(body, spec, n_lines=n_lines)
    per_line = per_line or max(spec.count // n_lines, 16)
    lo, hi = spec.resolve_window(body)
    window = float(np.linalg.norm(hi - lo))
    worst = None
    total = 0
    for idx, (a, v) in enumerate(zip(bases, dirs)):
        line = restrict_to_line(field, a, v)
        line_field = line.as_field(window=window)
        sub = SamplerSpec(seed=spec.seed + idx + 1, count=per_line)
        rep = check_semiconvex(line_field, line_field.domain, modulus, sub, p=2, tol=tol)
        total += rep.n_samples
        if worst is None or rep.min_margin < worst[0]:
            worst = (rep.min_margin, {"line_base": a.tolist(), "line_dir": v.tolist(), **rep.witness}, rep.config["scale"])
    return MarginReport(
        check="semiconvex-on-lines",
        n_samples=total,
        min_margin=worst[0],
        witness=worst[1],
        seed=spec.seed,
        tol=tol,
        passed=bool(worst[0] >= -tol * worst[2]),
        config=_config(spec, 2, modulus=modulus.to_spec(), n_lines=n_lines),
    )
