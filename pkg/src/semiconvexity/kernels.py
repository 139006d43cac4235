"""Hot numeric kernels: numba-jitted loops with a pure-numpy fallback.

The numpy implementations are the reference semantics.  When numba is
importable and the environment variable SEMICONVEXITY_PURE_NUMPY is unset
(or not "1"), the jitted twins are bound to the public names instead.
``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

import numpy as np

ENV_FLAG = "SEMICONVEXITY_PURE_NUMPY"

_P_INF = -1  # integer code for the sup norm


def _pcode(p):
    if p in (1, 2):
        return int(p)
    if p in ("inf", np.inf, float("inf")):
        return _P_INF
    raise ValueError(f"unsupported norm exponent {p!r}; use 1, 2 or 'inf'")


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def _np_semiconvex_margins(fx, fy, fm, dist, lam, om):
    return lam * fx + (1.0 - lam) * fy + lam * (1.0 - lam) * dist * om - fm


def _np_envelope_margins(fy, fx, gdot, dist, om):
    return dist * om - np.abs(fy - fx - gdot)


def _np_gap_margins(gdot_diff, dist, om):
    return dist * om - np.abs(gdot_diff)


def _np_hrep_margins(A, b, X):
    return (X @ A.T - b).max(axis=1)


def _np_row_norms(X, pcode):
    if pcode == 2:
        return np.sqrt((X * X).sum(axis=1))
    if pcode == 1:
        return np.abs(X).sum(axis=1)
    return np.abs(X).max(axis=1)


def _np_first_violation(gaps, bounds):
    idx = np.nonzero(gaps > bounds)[0]
    return int(idx[0]) if idx.size else -1


_NUMPY_IMPLS = {
    "semiconvex_margins": _np_semiconvex_margins,
    "envelope_margins": _np_envelope_margins,
    "gap_margins": _np_gap_margins,
    "hrep_margins": _np_hrep_margins,
    "row_norms": _np_row_norms,
    "first_violation": _np_first_violation,
}

# ---------------------------------------------------------------------------
# numba twins
# ---------------------------------------------------------------------------

_NUMBA_IMPLS = None

if os.environ.get(ENV_FLAG, "") != "1":
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - exercised only without numba
        njit = None

    if njit is not None:

        @njit(cache=True)
        def _nb_semiconvex_margins(fx, fy, fm, dist, lam, om):
            out = np.empty(fx.shape[0])
            for i in range(fx.shape[0]):
                li = lam[i]
                out[i] = li * fx[i] + (1.0 - li) * fy[i] + li * (1.0 - li) * dist[i] * om[i] - fm[i]
            return out

        @njit(cache=True)
        def _nb_envelope_margins(fy, fx, gdot, dist, om):
            out = np.empty(fy.shape[0])
            for i in range(fy.shape[0]):
                out[i] = dist[i] * om[i] - abs(fy[i] - fx[i] - gdot[i])
            return out

        @njit(cache=True)
        def _nb_gap_margins(gdot_diff, dist, om):
            out = np.empty(gdot_diff.shape[0])
            for i in range(gdot_diff.shape[0]):
                out[i] = dist[i] * om[i] - abs(gdot_diff[i])
            return out

        @njit(cache=True)
        def _nb_hrep_margins(A, b, X):
            m = X.shape[0]
            out = np.empty(m)
            for i in range(m):
                worst = -np.inf
                for r in range(A.shape[0]):
                    s = -b[r]
                    for j in range(A.shape[1]):
                        s += A[r, j] * X[i, j]
                    if s > worst:
                        worst = s
                out[i] = worst
            return out

        @njit(cache=True)
        def _nb_row_norms(X, pcode):
            m = X.shape[0]
            out = np.empty(m)
            for i in range(m):
                if pcode == 2:
                    s = 0.0
                    for j in range(X.shape[1]):
                        s += X[i, j] * X[i, j]
                    out[i] = np.sqrt(s)
                elif pcode == 1:
                    s = 0.0
                    for j in range(X.shape[1]):
                        s += abs(X[i, j])
                    out[i] = s
                else:
                    s = 0.0
                    for j in range(X.shape[1]):
                        a = abs(X[i, j])
                        if a > s:
                            s = a
                    out[i] = s
            return out

        @njit(cache=True)
        def _nb_first_violation(gaps, bounds):
            for i in range(gaps.shape[0]):
                if gaps[i] > bounds[i]:
                    return i
            return -1

        _NUMBA_IMPLS = {
            "semiconvex_margins": _nb_semiconvex_margins,
            "envelope_margins": _nb_envelope_margins,
            "gap_margins": _nb_gap_margins,
            "hrep_margins": _nb_hrep_margins,
            "row_norms": _nb_row_norms,
            "first_violation": _nb_first_violation,
        }

BACKEND = "numba" if _NUMBA_IMPLS is not None else "numpy"
_ACTIVE = _NUMBA_IMPLS if _NUMBA_IMPLS is not None else _NUMPY_IMPLS


def _c64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def semiconvex_margins(fx, fy, fm, dist, lam, om):
    """Per-triple slack of the midpoint inequality with penalty lam(1-lam)*d*omega(d)."""
    return _ACTIVE["semiconvex_margins"](_c64(fx), _c64(fy), _c64(fm), _c64(dist), _c64(lam), _c64(om))


def envelope_margins(fy, fx, gdot, dist, om):
    """Per-pair slack of d*omega(d) - |f(y) - f(x) - grad(x).h|."""
    return _ACTIVE["envelope_margins"](_c64(fy), _c64(fx), _c64(gdot), _c64(dist), _c64(om))


def gap_margins(gdot_diff, dist, om):
    """Per-pair slack of d*omega(d) - |(grad(y) - grad(x)).(y - x)|."""
    return _ACTIVE["gap_margins"](_c64(gdot_diff), _c64(dist), _c64(om))


def hrep_margins(A, b, X):
    """max_i (a_i.x - b_i) per sample row; negative means strictly inside."""
    X = np.atleast_2d(_c64(X))
    if A.size == 0:
        return np.full(X.shape[0], -np.inf)
    return _ACTIVE["hrep_margins"](_c64(A), _c64(b), X)


def row_norms(X, p=2):
    """p-norm of each row, p in {1, 2, 'inf'}."""
    return _ACTIVE["row_norms"](np.atleast_2d(_c64(X)), _pcode(p))


def first_violation(gaps, bounds):
    """Index of the first position with gaps > bounds, or -1."""
    return int(_ACTIVE["first_violation"](_c64(gaps), _c64(bounds)))


def warmup():
    """Trigger jit compilation of every kernel on tiny inputs."""
    one = np.array([1.0])
    semiconvex_margins(one, one, one, one, np.array([0.5]), one)
    envelope_margins(one, one, one, one, one)
    gap_margins(one, one, one)
    hrep_margins(np.eye(2), np.ones(2), np.zeros((1, 2)))
    for p in (1, 2, "inf"):
        row_norms(np.zeros((1, 2)), p)
    first_violation(one, one)
    return BACKEND
