"""Open convex bodies in R^n, their recession cones, and the linear-map utilities.

Bodies are open (strict H-representation inequalities); recession cones are
closed.  Polyhedral computations (Chebyshev centers, implicit equalities,
Fourier-Motzkin projections, vertex enumeration) are desk-scale: dimensions
up to 8, a few dozen constraints.
"""

import itertools

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import DomainError, NumericError, PreconditionError
from .reporting import MarginReport

_BOX = 1e3  # default bounding box for LPs over unbounded feasible sets


def vec_norm(x, p=2):
    return float(kernels.row_norms(np.asarray(x, dtype=np.float64).reshape(1, -1), p)[0])


def dual_exponent(p):
    if p == 2:
        return 2
    if p == 1:
        return "inf"
    if p in ("inf", np.inf, float("inf")):
        return 1
    raise DomainError(f"unsupported norm exponent {p!r}")


def _lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    return res


# ---------------------------------------------------------------------------
# Bodies
# ---------------------------------------------------------------------------

class ConvexBody:
    n: int
    is_whole_space = False

    def contains(self, X):
        """Boolean mask for a batch of points (m, n)."""
        raise NotImplementedError

    def contains_point(self, x):
        return bool(self.contains(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])

    def default_window(self, scale=100.0):
        """Axis-aligned sampling box (lo, hi) meeting the body in positive measure."""
        raise NotImplementedError

    def interior_point(self):
        raise NotImplementedError

    def to_spec(self):
        raise NotImplementedError


class HRepBody(ConvexBody):
    """Open polyhedron {x : A x < b}."""

    def __init__(self, A, b):
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        b = np.atleast_1d(np.asarray(b, dtype=np.float64))
        if A.size == 0:
            raise DomainError("HRep needs at least one row; use SpaceBody for the whole space")
        if A.shape[0] != b.shape[0]:
            raise DomainError("HRep row count mismatch between A and b")
        self.A = A
        self.b = b
        self.n = A.shape[1]
        self._cheb = None

    def contains(self, X):
        return kernels.hrep_margins(self.A, self.b, X) < 0.0

    def chebyshev(self, box=_BOX):
        if self._cheb is None:
            self._cheb = chebyshev_center(self.A, self.b, box=box)
        return self._cheb

    def interior_point(self):
        x, r = self.chebyshev()
        if r <= 1e-12:
            raise DomainError("empty (or lower-dimensional) polyhedron")
        return x

    def bbox(self):
        """Coordinate bounds of the closure; entries are +-inf when unbounded."""
        lo = np.empty(self.n)
        hi = np.empty(self.n)
        for j in range(self.n):
            c = np.zeros(self.n)
            c[j] = 1.0
            res = _lp(c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.n)
            lo[j] = res.fun if res.status == 0 else -np.inf
            res = _lp(-c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.n)
            hi[j] = -res.fun if res.status == 0 else np.inf
        return lo, hi

    def default_window(self, scale=100.0):
        lo, hi = self.bbox()
        if np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)):
            return lo, hi
        p = self.interior_point()
        lo = np.where(np.isfinite(lo), lo, p - scale)
        hi = np.where(np.isfinite(hi), hi, p + scale)
        return lo, hi

    def to_spec(self):
        return {"type": "hrep", "A": self.A.tolist(), "b": self.b.tolist()}


class BallBody(ConvexBody):
    def __init__(self, center, radius, p=2):
        self.center = np.asarray(center, dtype=np.float64)
        if radius <= 0:
            raise DomainError("ball radius must be positive")
        if p not in (1, 2, "inf"):
            raise DomainError("ball norm must be 1, 2 or 'inf'")
        self.radius = float(radius)
        self.p = p
        self.n = self.center.shape[0]

    def contains(self, X):
        return kernels.row_norms(np.atleast_2d(X) - self.center, self.p) < self.radius

    def interior_point(self):
        return self.center.copy()

    def default_window(self, scale=100.0):
        return self.center - self.radius, self.center + self.radius

    def to_spec(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius, "p": self.p}


class SpaceBody(ConvexBody):
    """The whole space, kept as an explicit flag for the quantitative-bound checks."""

    is_whole_space = True

    def __init__(self, n):
        self.n = int(n)

    def contains(self, X):
        return np.ones(np.atleast_2d(X).shape[0], dtype=bool)

    def interior_point(self):
        return np.zeros(self.n)

    def default_window(self, scale=100.0):
        return -scale * np.ones(self.n), scale * np.ones(self.n)

    def to_spec(self):
        return {"type": "space", "n": self.n}


class StripBody(ConvexBody):
    """R x (0, 1)."""

    n = 2

    def contains(self, X):
        X = np.atleast_2d(X)
        return (X[:, 1] > 0.0) & (X[:, 1] < 1.0)

    def interior_point(self):
        return np.array([0.0, 0.5])

    def default_window(self, scale=100.0):
        return np.array([-scale, 0.0]), np.array([scale, 1.0])

    def to_spec(self):
        return {"type": "strip"}


class WedgeBody(ConvexBody):
    """{x1 > 1, |x2| < eta(x1)} for a concave sublinear eta."""

    n = 2

    def __init__(self, eta):
        self.eta = eta

    def contains(self, X):
        X = np.atleast_2d(X)
        ok = X[:, 0] > 1.0
        out = np.zeros(X.shape[0], dtype=bool)
        if np.any(ok):
            out[ok] = np.abs(X[ok, 1]) < self.eta(X[ok, 0])
        return out

    def interior_point(self):
        return np.array([2.0, 0.0])

    def default_window(self, scale=100.0):
        hi_x = 1.0 + scale
        m = float(self.eta(hi_x))
        return np.array([1.0, -m]), np.array([hi_x, m])

    def to_spec(self):
        return {"type": "wedge", "eta": self.eta.to_spec()}


class ULBody(ConvexBody):
    """{x > 1, l(x) < y < u(x)}: u positive nondecreasing concave, l negative nonincreasing convex."""

    n = 2

    def __init__(self, u, l):
        from .boundary import as_boundary

        self.u = as_boundary(u)
        self.l = as_boundary(l)

    def contains(self, X):
        X = np.atleast_2d(X)
        ok = X[:, 0] > 1.0
        out = np.zeros(X.shape[0], dtype=bool)
        if np.any(ok):
            xs = X[ok, 0]
            out[ok] = (X[ok, 1] < self.u(xs)) & (X[ok, 1] > self.l(xs))
        return out

    def interior_point(self):
        return np.array([2.0, 0.5 * (float(self.u(2.0)) + float(self.l(2.0)))])

    def default_window(self, scale=100.0):
        hi_x = 1.0 + scale
        grid = np.linspace(1.0 + 1e-9, hi_x, 64)
        return np.array([1.0, float(np.min(self.l(grid)))]), np.array([hi_x, float(np.max(self.u(grid)))])

    def to_spec(self):
        return {"type": "ul", "u": self.u.to_spec(), "l": self.l.to_spec()}


class ProductBody(ConvexBody):
    def __init__(self, factors):
        if len(factors) < 2:
            raise DomainError("product body needs at least two factors")
        self.factors = list(factors)
        self.n = sum(f.n for f in factors)

    def _split(self, X):
        X = np.atleast_2d(X)
        out = []
        j = 0
        for f in self.factors:
            out.append(X[:, j:j + f.n])
            j += f.n
        return out

    def contains(self, X):
        parts = self._split(X)
        mask = self.factors[0].contains(parts[0])
        for f, part in zip(self.factors[1:], parts[1:]):
            mask = mask & f.contains(part)
        return mask

    def interior_point(self):
        return np.concatenate([f.interior_point() for f in self.factors])

    def default_window(self, scale=100.0):
        los, his = zip(*[f.default_window(scale) for f in self.factors])
        return np.concatenate(los), np.concatenate(his)

    def to_spec(self):
        return {"type": "product", "factors": [f.to_spec() for f in self.factors]}


class AffineBody(ConvexBody):
    """{T u + c : u in base} for an invertible T."""

    def __init__(self, base, T, c):
        T = np.asarray(T, dtype=np.float64)
        c = np.asarray(c, dtype=np.float64)
        if T.shape != (base.n, base.n):
            raise DomainError("affine matrix shape mismatch")
        if abs(np.linalg.det(T)) < 1e-12:
            raise DomainError("affine map must be a bijection (nonsingular matrix)")
        self.base = base
        self.T = T
        self.c = c
        self.Tinv = np.linalg.inv(T)
        self.n = base.n

    def contains(self, X):
        U = (np.atleast_2d(X) - self.c) @ self.Tinv.T
        return self.base.contains(U)

    def interior_point(self):
        return self.T @ self.base.interior_point() + self.c

    def default_window(self, scale=100.0):
        lo, hi = self.base.default_window(scale)
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        mapped = corners @ self.T.T + self.c
        return mapped.min(axis=0), mapped.max(axis=0)

    def to_spec(self):
        return {"type": "affine", "base": self.base.to_spec(), "matrix": self.T.tolist(), "offset": self.c.tolist()}


class MembershipImageBody(ConvexBody):
    """Image L(G) kept as a fiber-probing membership oracle (codimension-1 fibers only)."""

    def __init__(self, base, L):
        L = np.asarray(L, dtype=np.float64)
        if base.n - L.shape[0] != 1:
            raise PreconditionError("membership-oracle images support one eliminated dimension only")
        self.base = base
        self.L = L
        self.n = L.shape[0]
        self.pinv = np.linalg.pinv(L)
        null = np.linalg.svd(L)[2][L.shape[0]:]
        self.null_dir = null[0]
        self._probe_ts = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 40), -np.geomspace(1e-3, 1e3, 40)])

    def contains(self, X):
        X = np.atleast_2d(X)
        out = np.zeros(X.shape[0], dtype=bool)
        for i, y in enumerate(X):
            fiber = self.pinv @ y + np.outer(self._probe_ts, self.null_dir)
            out[i] = bool(np.any(self.base.contains(fiber)))
        return out

    def interior_point(self):
        return self.L @ self.base.interior_point()

    def default_window(self, scale=100.0):
        lo, hi = self.base.default_window(scale)
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        mapped = corners @ self.L.T
        return mapped.min(axis=0), mapped.max(axis=0)

    def to_spec(self):
        return {"type": "image", "base": self.base.to_spec(), "matrix": self.L.tolist()}


def to_hrep(body):
    """HRep equivalent when one exists (used by projections and eccentricity)."""
    if isinstance(body, HRepBody):
        return body
    if isinstance(body, BallBody):
        n, c, r = body.n, body.center, body.radius
        if body.p == "inf":
            A = np.vstack([np.eye(n), -np.eye(n)])
            b = np.concatenate([c + r, -(c - r)])
            return HRepBody(A, b)
        if body.p == 1:
            signs = np.array(list(itertools.product([-1.0, 1.0], repeat=n)))
            return HRepBody(signs, signs @ c + r)
        return None
    if isinstance(body, StripBody):
        return HRepBody([[0.0, 1.0], [0.0, -1.0]], [1.0, 0.0])
    if isinstance(body, ProductBody):
        parts = [to_hrep(f) for f in body.factors]
        if any(p is None for p in parts):
            return None
        n = body.n
        rows, offs = [], []
        j = 0
        for p in parts:
            block = np.zeros((p.A.shape[0], n))
            block[:, j:j + p.n] = p.A
            rows.append(block)
            offs.append(p.b)
            j += p.n
        return HRepBody(np.vstack(rows), np.concatenate(offs))
    if isinstance(body, AffineBody):
        base = to_hrep(body.base)
        if base is None:
            return None
        M = base.A @ body.Tinv
        return HRepBody(M, base.b + M @ body.c)
    return None


# ---------------------------------------------------------------------------
# LP helpers
# ---------------------------------------------------------------------------

def chebyshev_center(A, b, box=_BOX, p=2):
    """Center/radius of the largest inscribed p-ball (closure semantics)."""
    m, n = A.shape
    q = dual_exponent(p)
    row_norms = kernels.row_norms(A, q)
    c = np.zeros(n + 1)
    c[n] = -1.0
    A_ub = np.hstack([A, row_norms[:, None]])
    bounds = [(-box, box)] * n + [(0.0, 2.0 * box)]
    res = _lp(c, A_ub=A_ub, b_ub=b, bounds=bounds)
    if res.status == 2:
        raise DomainError("empty body (infeasible H-representation)")
    if res.status != 0:
        raise NumericError(f"Chebyshev LP failed with status {res.status}")
    return res.x[:n], float(res.x[n])


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

class Cone:
    """Closed convex cone {y : A y <= 0}; A may have zero rows (whole space)."""

    def __init__(self, A, n):
        A = np.asarray(A, dtype=np.float64).reshape(-1, n)
        keep = kernels.row_norms(A, 2) > 1e-14 if A.size else np.zeros(0, dtype=bool)
        self.A = A[keep]
        self.n = int(n)
        self._dim = None

    def contains(self, Y, tol=1e-9):
        Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
        if self.A.shape[0] == 0:
            return np.ones(Y.shape[0], dtype=bool)
        scale = 1.0 + kernels.row_norms(Y, 2)
        return kernels.hrep_margins(self.A, np.zeros(self.A.shape[0]), Y) <= tol * scale

    def contains_point(self, y, tol=1e-9):
        return bool(self.contains(np.asarray(y).reshape(1, -1), tol)[0])

    def lineality_dim(self):
        if self.A.shape[0] == 0:
            return self.n
        return self.n - int(np.linalg.matrix_rank(self.A, tol=1e-9))

    def lineality_basis(self):
        if self.A.shape[0] == 0:
            return np.eye(self.n)
        _, s, vh = np.linalg.svd(self.A)
        rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if s.size else 1.0)))
        return vh[rank:]

    def is_pointed(self):
        return self.lineality_dim() == 0

    def dim(self):
        """Dimension of span(cone) = n - rank of the implicit-equality rows."""
        if self._dim is not None:
            return self._dim
        if self.A.shape[0] == 0:
            self._dim = self.n
            return self._dim
        implicit = []
        bounds = [(-1.0, 1.0)] * self.n
        for i in range(self.A.shape[0]):
            res = _lp(self.A[i], A_ub=self.A, b_ub=np.zeros(self.A.shape[0]), bounds=bounds)
            if res.status != 0:
                raise NumericError(f"cone LP failed with status {res.status}")
            if -res.fun <= 1e-9:  # max of -a_i.y over the cone is ~0: implicit equality
                implicit.append(i)
        if not implicit:
            self._dim = self.n
        else:
            self._dim = self.n - int(np.linalg.matrix_rank(self.A[implicit], tol=1e-9))
        return self._dim

    def generators(self):
        """(rays, lines) spanning the cone; exact for n <= 3."""
        lines = self.lineality_basis()
        if self.A.shape[0] == 0:
            return np.zeros((0, self.n)), lines
        if self.n > 3:
            raise NumericError("generator enumeration implemented for n <= 3 only")
        cands = []
        for a in self.A:
            cands.append(-a)
        if self.n == 2:
            for a in self.A:
                cands.append(np.array([-a[1], a[0]]))
                cands.append(np.array([a[1], -a[0]]))
        elif self.n == 3:
            for a, b2 in itertools.combinations(self.A, 2):
                cr = np.cross(a, b2)
                cands.append(cr)
                cands.append(-cr)
        elif self.n == 1:
            cands.extend([np.array([1.0]), np.array([-1.0])])
        rays = []
        for d in cands:
            nrm = np.linalg.norm(d)
            if nrm < 1e-12:
                continue
            d = d / nrm
            if not self.contains_point(d, tol=1e-9):
                continue
            # skip directions inside the lineality space
            if lines.shape[0] and np.linalg.norm(d - lines.T @ (lines @ d)) < 1e-9:
                continue
            if not any(np.linalg.norm(d - r) < 1e-9 for r in rays):
                rays.append(d)
        return np.array(rays).reshape(-1, self.n), lines

    def interior_direction(self):
        """(v, r) with the unit v and r > 0 such that the r-ball around v sits in the cone."""
        if self.A.shape[0] == 0:
            v = np.zeros(self.n)
            v[0] = 1.0
            return v, 1.0
        norms = kernels.row_norms(self.A, 2)
        c = np.zeros(self.n + 1)
        c[-1] = -1.0
        A_ub = np.hstack([self.A, norms[:, None]])
        bounds = [(-1.0, 1.0)] * self.n + [(0.0, 2.0)]
        res = _lp(c, A_ub=A_ub, b_ub=np.zeros(self.A.shape[0]), bounds=bounds)
        if res.status != 0 or res.x[-1] <= 1e-12:
            raise NumericError("cone has empty interior")
        y = res.x[:-1]
        s = np.linalg.norm(y)
        return y / s, float(res.x[-1] / s)

    def to_spec(self):
        return {"A": self.A.tolist(), "n": self.n}


def cone_dimension(cone):
    return cone.dim()


# ---------------------------------------------------------------------------
# Recession cones
# ---------------------------------------------------------------------------

def _zero_cone(n):
    return Cone(np.vstack([np.eye(n), -np.eye(n)]), n)


def _rule_recession_cone(body):
    if isinstance(body, HRepBody):
        body.interior_point()  # raises on empty bodies
        return Cone(body.A, body.n)
    if isinstance(body, BallBody):
        return _zero_cone(body.n)
    if isinstance(body, SpaceBody):
        return Cone(np.zeros((0, body.n)), body.n)
    if isinstance(body, StripBody):
        return Cone([[0.0, 1.0], [0.0, -1.0]], 2)
    if isinstance(body, (WedgeBody, ULBody)):
        return Cone([[0.0, 1.0], [0.0, -1.0], [-1.0, 0.0]], 2)
    if isinstance(body, ProductBody):
        cones = [_rule_recession_cone(f) for f in body.factors]
        n = body.n
        rows = []
        j = 0
        for f, cn in zip(body.factors, cones):
            if cn.A.shape[0]:
                block = np.zeros((cn.A.shape[0], n))
                block[:, j:j + f.n] = cn.A
                rows.append(block)
            j += f.n
        return Cone(np.vstack(rows) if rows else np.zeros((0, n)), n)
    if isinstance(body, AffineBody):
        base = _rule_recession_cone(body.base)
        return Cone(base.A @ body.Tinv, body.n)
    raise DomainError(f"no recession-cone rule for {type(body).__name__}")


def star_sample(body, count, rng, cap=50.0):
    """Interior samples along random rays from an interior point (any convex body)."""
    p = body.interior_point()
    dirs = rng.standard_normal((count, body.n))
    dirs /= kernels.row_norms(dirs, 2)[:, None]
    out = np.empty((count, body.n))
    for i, d in enumerate(dirs):
        lo, hi = 0.0, cap
        if body.contains_point(p + cap * d):
            hi = cap
        else:
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if body.contains_point(p + mid * d):
                    lo = mid
                else:
                    hi = mid
            hi = lo
        out[i] = p + rng.uniform(0.0, 0.95) * hi * d
    return out


def sample_cone_directions(cone, count, rng):
    """Unit directions in the cone: generator combinations for n <= 3, else
    lineality directions plus sphere rejection (may return fewer for thin cones)."""
    try:
        rays, lines = cone.generators()
    except NumericError:
        lines = cone.lineality_basis()
        dirs = [s * g for g in lines for s in (1.0, -1.0)]
        draw = rng.standard_normal((64 * count, cone.n))
        draw /= kernels.row_norms(draw, 2)[:, None]
        for d in draw[cone.contains(draw, tol=1e-9)]:
            dirs.append(d)
            if len(dirs) >= count:
                break
        return np.array(dirs[:count]).reshape(-1, cone.n)
    k_r, k_l = rays.shape[0], lines.shape[0]
    if k_r == 0 and k_l == 0:
        return np.zeros((0, cone.n))
    dirs = []
    for g in rays:
        dirs.append(g)
    for g in lines:
        dirs.append(g)
        dirs.append(-g)
    while len(dirs) < count:
        d = np.zeros(cone.n)
        if k_r:
            d = d + np.abs(rng.standard_normal(k_r)) @ rays
        if k_l:
            d = d + rng.standard_normal(k_l) @ lines
        nrm = np.linalg.norm(d)
        if nrm > 1e-12:
            dirs.append(d / nrm)
    return np.array(dirs[:count])


def recession_cone(body, validate=True, probes=32, seed=0):
    """Recession cone of the body, sanity-checked by membership probes."""
    cone = _rule_recession_cone(body)
    if validate and not isinstance(body, MembershipImageBody):
        rng = np.random.default_rng(seed)
        xs = star_sample(body, probes, rng)
        ys = sample_cone_directions(cone, probes, rng)
        if ys.shape[0]:
            for lam in (1.0, 10.0, 100.0):
                for i in range(min(len(xs), len(ys))):
                    pt = xs[i] + lam * ys[i]
                    if not body.contains_point(pt):
                        raise NumericError(
                            f"recession-cone self-check failed: x={xs[i].tolist()}, y={ys[i].tolist()}, lam={lam}"
                        )
    return cone


def recession_oracle_report(body, cone=None, n_probes=1000, seed=0, lambdas=(1.0, 10.0, 100.0)):
    """Sampling oracle: cone directions must stay in the body, non-directions must escape."""
    if cone is None:
        cone = recession_cone(body, validate=False)
    rng = np.random.default_rng(seed)
    n_pos = n_probes // 2
    n_neg = n_probes - n_pos
    xs = star_sample(body, max(n_pos, 1), rng)
    ys = sample_cone_directions(cone, max(n_pos, 1), rng)
    disagreements = []
    tested = 0
    if ys.shape[0]:
        for i in range(n_pos):
            x, y = xs[i % len(xs)], ys[i % len(ys)]
            tested += 1
            for lam in lambdas:
                if not body.contains_point(x + lam * y):
                    disagreements.append({"side": "positive", "x": x.tolist(), "y": y.tolist(), "lam": lam})
                    break
    sphere = rng.standard_normal((4 * n_neg, body.n))
    sphere /= kernels.row_norms(sphere, 2)[:, None]
    outside = sphere[~cone.contains(sphere, tol=1e-7)][:n_neg]
    x0 = body.interior_point()
    hrep = to_hrep(body)
    for y in outside:
        tested += 1
        escaped = False
        if hrep is not None:
            # exact escape: a violated row a.y > 0 forces exit at lam = (b - a.x)/(a.y)
            dots = hrep.A @ y
            rows = np.nonzero(dots > 1e-12)[0]
            if rows.size:
                lam_star = np.min((hrep.b[rows] - hrep.A[rows] @ x0) / dots[rows])
                escaped = not body.contains_point(x0 + 2.0 * max(lam_star, 1e-9) * y)
        else:
            for lam in np.geomspace(1.0, 1e8, 17):
                if not body.contains_point(x0 + lam * y):
                    escaped = True
                    break
        if not escaped:
            disagreements.append({"side": "negative", "x": x0.tolist(), "y": y.tolist()})
    return MarginReport(
        check="recession-oracle",
        n_samples=tested,
        min_margin=-float(len(disagreements)),
        witness=disagreements[0] if disagreements else {},
        seed=seed,
        tol=0.0,
        passed=not disagreements,
        config={"lambdas": list(lambdas), "n_probes": n_probes},
        extra={"n_disagreements": len(disagreements)},
    )


# ---------------------------------------------------------------------------
# Classification and eccentricity
# ---------------------------------------------------------------------------

class Classification:
    BOUNDED = "bounded"
    CONE_CONTAINING = "cone-containing"
    DEGENERATE = "degenerate-unbounded"

    def __init__(self, kind, base=None, direction=None, radius=None):
        self.kind = kind
        self.base = base
        self.direction = direction
        self.radius = radius

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == self.CONE_CONTAINING:
            out.update(
                base=self.base.tolist(), direction=self.direction.tolist(), radius=float(self.radius)
            )
        return out


def classify_body(body):
    """Bounded / contains a translated solid cone / degenerate unbounded."""
    cone = recession_cone(body, validate=False)
    d = cone.dim()
    if d == 0:
        return Classification(Classification.BOUNDED)
    if d == body.n:
        v, r = cone.interior_direction()
        return Classification(Classification.CONE_CONTAINING, base=body.interior_point(), direction=v, radius=r)
    return Classification(Classification.DEGENERATE)


def hrep_vertices(A, b, tol=1e-9):
    """All vertices of {Ax <= b} by basis enumeration (n <= 3, m <= 64)."""
    m, n = A.shape
    if n > 3 or m > 64:
        raise NumericError("vertex enumeration supports n <= 3 and m <= 64")
    combos = np.array(list(itertools.combinations(range(m), n)))
    subs = A[combos]
    dets = np.abs(np.linalg.det(subs))
    scale = np.max(np.abs(A)) + 1.0
    good = dets > 1e-10 * scale**n
    verts = []
    if np.any(good):
        sols = np.linalg.solve(subs[good], b[combos[good]][..., None])[..., 0]
        feas = kernels.hrep_margins(A, b, sols) <= tol * (1.0 + np.abs(b).max())
        verts = sols[feas]
    if len(verts) == 0:
        return np.zeros((0, n))
    rounded = np.round(np.asarray(verts) / max(tol, 1e-12)) * max(tol, 1e-12)
    _, idx = np.unique(rounded, axis=0, return_index=True)
    return np.asarray(verts)[np.sort(idx)]


def eccentricity_report(body, p=2):
    """diameter / inradius for a bounded body, with the method recorded."""
    cls = classify_body(body)
    if cls.kind != Classification.BOUNDED:
        raise DomainError("eccentricity is defined for bounded bodies only")
    if isinstance(body, BallBody) and body.p == p:
        return {"value": 2.0, "diameter": 2.0 * body.radius, "inradius": body.radius, "method": "exact-ball"}
    if isinstance(body, AffineBody) and isinstance(body.base, BallBody) and body.base.p == 2 and p == 2:
        sv = np.linalg.svd(body.T, compute_uv=False)
        return {
            "value": 2.0 * float(sv[0] / sv[-1]),
            "diameter": 2.0 * body.base.radius * float(sv[0]),
            "inradius": body.base.radius * float(sv[-1]),
            "method": "ellipsoid-svd",
        }
    hrep = to_hrep(body)
    if hrep is None:
        raise DomainError("eccentricity needs an H-representable or ball-like body")
    _, inr = chebyshev_center(hrep.A, hrep.b, p=p)
    if inr <= 0:
        raise DomainError("empty or lower-dimensional body")
    method = "vertex-enumeration"
    if hrep.n <= 3 and hrep.A.shape[0] <= 64:
        verts = hrep_vertices(hrep.A, hrep.b)
        if verts.shape[0] < 2:
            raise NumericError("vertex enumeration found fewer than two vertices")
        diffs = verts[:, None, :] - verts[None, :, :]
        diam = float(kernels.row_norms(diffs.reshape(-1, hrep.n), p).max())
    else:
        rng = np.random.default_rng(0)
        pts = star_sample(hrep, 512, rng, cap=10.0 * _BOX)
        diffs = pts[:, None, :] - pts[None, :, :]
        diam = float(kernels.row_norms(diffs.reshape(-1, hrep.n), p).max())
        method = "sampled-lower-bound"
    return {"value": diam / inr, "diameter": diam, "inradius": float(inr), "method": method}


def eccentricity(body, p=2):
    return float(eccentricity_report(body, p)["value"])


# ---------------------------------------------------------------------------
# Linear images (Fourier-Motzkin) and the image-cone check
# ---------------------------------------------------------------------------

def _fm_eliminate_last(A, b, strict=True):
    col = A[:, -1]
    scale = np.abs(A).max() + 1.0
    zero = np.abs(col) <= 1e-12 * scale
    pos = (~zero) & (col > 0)
    neg = (~zero) & (col < 0)
    rows = [A[zero, :-1]]
    offs = [b[zero]]
    if np.any(pos) and np.any(neg):
        Ai = A[pos, :-1] / col[pos, None]
        bi = b[pos] / col[pos]
        Aj = A[neg, :-1] / col[neg, None]
        bj = b[neg] / col[neg]
        comb_A = Ai[:, None, :] - Aj[None, :, :]
        comb_b = bi[:, None] - bj[None, :]
        rows.append(comb_A.reshape(-1, A.shape[1] - 1))
        offs.append(comb_b.reshape(-1))
    A2 = np.vstack(rows)
    b2 = np.concatenate(offs)
    return _prune_rows(A2, b2, strict=strict)


def _prune_rows(A, b, max_keep=48, strict=True):
    norms = kernels.row_norms(A, 2)
    keep = norms > 1e-12
    # rows with ~zero normal read "0 < b" (or "0 <= b"): drop when satisfied
    trivially_bad = b < -1e-12 if not strict else b <= 1e-12
    if np.any((~keep) & trivially_bad):
        raise DomainError("projection produced an empty set")
    A, b, norms = A[keep], b[keep], norms[keep]
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0), b
    A = A / norms[:, None]
    b = b / norms
    stacked = np.round(np.column_stack([A, b]) / 1e-9) * 1e-9
    _, idx = np.unique(stacked, axis=0, return_index=True)
    A, b = A[np.sort(idx)], b[np.sort(idx)]
    if A.shape[0] > max_keep:
        keep_rows = []
        for i in range(A.shape[0]):
            others = keep_rows + list(range(i + 1, A.shape[0]))
            if not others:
                keep_rows.append(i)
                continue
            res = _lp(-A[i], A_ub=A[others], b_ub=b[others], bounds=[(-1e7, 1e7)] * A.shape[1])
            if res.status != 0 or -res.fun > b[i] - 1e-9:
                keep_rows.append(i)
        A, b = A[keep_rows], b[keep_rows]
    return A, b


def _project_hrep_arrays(A, b, L, strict=True):
    """{L x : A x < b} as an H-representation (exact Fourier-Motzkin projection)."""
    k, n = L.shape
    _, s, vh = np.linalg.svd(L)
    null = vh[k:]
    T = np.vstack([L, null])
    Tinv = np.linalg.inv(T)
    A2 = A @ Tinv
    b2 = b.copy()
    for _ in range(n - k):
        A2, b2 = _fm_eliminate_last(A2, b2, strict=strict)
    return A2, b2


def linear_image(body, L):
    """Image body L(G); exact H-rep for polyhedral inputs, membership oracle otherwise."""
    L = np.atleast_2d(np.asarray(L, dtype=np.float64))
    k, n = L.shape
    if n != body.n:
        raise PreconditionError("map/body dimension mismatch")
    if np.linalg.matrix_rank(L, tol=1e-10) != k:
        raise PreconditionError("linear map must be surjective (full row rank)")
    if k == n and np.allclose(L, np.eye(n)):
        return body
    hrep = to_hrep(body)
    if hrep is not None:
        A2, b2 = _project_hrep_arrays(hrep.A, hrep.b, L)
        if A2.shape[0] == 0:
            return SpaceBody(k)
        return HRepBody(A2, b2)
    return MembershipImageBody(body, L)


def image_cone(cone, L):
    """L(cone) computed by exact projection of the homogeneous system."""
    if cone.A.shape[0] == 0:
        return Cone(np.zeros((0, L.shape[0])), L.shape[0])
    A2, _ = _project_hrep_arrays(cone.A, np.zeros(cone.A.shape[0]), np.atleast_2d(L), strict=False)
    return Cone(A2, L.shape[0])


def kernel_meets_cone(cone, L, tol=1e-9):
    """Nonzero witness in ker(L) & cone, or None."""
    L = np.atleast_2d(L)
    inter = Cone(np.vstack([cone.A, L, -L]) if cone.A.size else np.vstack([L, -L]), cone.n)
    if inter.dim() == 0:
        return None
    rng = np.random.default_rng(0)
    for _ in range(16):
        c = rng.standard_normal(cone.n)
        res = _lp(-c, A_ub=inter.A, b_ub=np.zeros(inter.A.shape[0]), bounds=[(-1.0, 1.0)] * cone.n)
        if res.status == 0 and np.linalg.norm(res.x) > tol:
            return res.x / np.linalg.norm(res.x)
    raise NumericError("intersection cone is nontrivial but no witness direction was found")


def check_image_recession(body, L, seed=0, n_dirs=256):
    """Sampled two-sided comparison of rec(L(G)) with L(rec(G))."""
    L = np.atleast_2d(np.asarray(L, dtype=np.float64))
    cone = recession_cone(body, validate=False)
    witness = kernel_meets_cone(cone, L)
    if witness is not None:
        raise PreconditionError(
            "kernel of the map meets the recession cone nontrivially", witness=witness
        )
    img = linear_image(body, L)
    rec_img = recession_cone(img, validate=False)
    mapped = image_cone(cone, L)
    rng = np.random.default_rng(seed)
    k = L.shape[0]
    dirs = rng.standard_normal((n_dirs, k))
    dirs /= kernels.row_norms(dirs, 2)[:, None]
    extra_a = sample_cone_directions(mapped, 32, rng)
    extra_b = sample_cone_directions(rec_img, 32, rng)
    batches = [dirs]
    if extra_a.shape[0]:
        batches.append(extra_a)
    if extra_b.shape[0]:
        batches.append(extra_b)
    D = np.vstack(batches)
    in_img = rec_img.contains(D, tol=1e-7)
    in_map = mapped.contains(D, tol=1e-7)
    agree = in_img == in_map
    n_mismatch = int(np.sum(~agree))
    witness_dir = D[~agree][0].tolist() if n_mismatch else {}
    return MarginReport(
        check="image-recession",
        n_samples=D.shape[0],
        min_margin=-float(n_mismatch),
        witness={"direction": witness_dir} if n_mismatch else {},
        seed=seed,
        tol=0.0,
        passed=n_mismatch == 0,
        config={"map": L.tolist()},
        extra={"rec_image_dim": rec_img.dim(), "mapped_dim": mapped.dim()},
    )


# ---------------------------------------------------------------------------
# Transversal directions (two-dimensional pointed cones)
# ---------------------------------------------------------------------------

def find_transversal(cone, plane=None):
    """Unit w in the plane with span{w} meeting the cone only at 0.

    The cone is intersected with the plane (given as an orthonormal n x 2
    basis; identity for planar cones).  Tie rule: rotate the angular bisector
    of the cone by +90 degrees; sweep in 1-degree steps if that fails.
    """
    if plane is None:
        if cone.n != 2:
            raise PreconditionError("a plane basis is required for cones in dimension > 2")
        V = np.eye(2)
    else:
        V = np.asarray(plane, dtype=np.float64).reshape(cone.n, 2)
    M = cone.A @ V if cone.A.size else np.zeros((0, 2))
    keep = kernels.row_norms(M, 2) > 1e-12 if M.size else np.zeros(0, dtype=bool)
    M = M[keep]

    def feasible(theta):
        d = np.array([np.cos(theta), np.sin(theta)])
        return bool(np.all(M @ d <= 1e-12)) if M.shape[0] else True

    if M.shape[0] == 0:
        raise PreconditionError("cone meets the plane in the whole plane (not pointed)")
    cands = []
    for row in M:
        perp = np.array([-row[1], row[0]])
        perp /= np.linalg.norm(perp)
        for d in (perp, -perp, -row / np.linalg.norm(row)):
            if np.all(M @ d <= 1e-10):
                cands.append(np.arctan2(d[1], d[0]) % (2 * np.pi))
    if not cands:
        raise PreconditionError("cone meets the plane only at the origin (not two-dimensional)")
    angles = np.sort(np.unique(np.round(np.array(cands), 12)))
    # every candidate is feasible, so the feasible set is the single arc running
    # through the feasible gaps between consecutive candidates
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
    mids = (angles + gaps / 2.0) % (2 * np.pi)
    feas_gap = np.array([feasible(t) for t in mids])
    if np.all(feas_gap):
        raise PreconditionError("cone meets the plane in the whole plane (not pointed)")
    if len(angles) == 1:
        start = end = angles[0]
    else:
        bad = int(np.argmax(gaps * (~feas_gap)))  # the infeasible gap is the arc's complement
        start = angles[(bad + 1) % len(angles)] % (2 * np.pi)
        end = angles[bad] % (2 * np.pi)
    span = (end - start) % (2 * np.pi) if len(angles) > 1 else 0.0
    if span >= np.pi - 1e-9:
        raise PreconditionError("cone meets the plane in a half-plane or more (not pointed)")
    bisector = (start + span / 2.0) % (2 * np.pi)
    theta = bisector + np.pi / 2.0
    for k in range(0, 360):
        cand = theta + np.deg2rad(k)
        d = np.array([np.cos(cand), np.sin(cand)])
        if not feasible(np.arctan2(d[1], d[0])) and not feasible(np.arctan2(-d[1], -d[0])):
            w2 = d
            break
    else:
        raise NumericError("no transversal direction found")
    w = V @ w2
    return w / np.linalg.norm(w)


# ---------------------------------------------------------------------------
# Linear maps with derived constants
# ---------------------------------------------------------------------------

class LinearMapSpec:
    """A k x n matrix with the derived constants used by witness lifting."""

    def __init__(self, matrix):
        self.L = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        self.k, self.n = self.L.shape
        self.rank = int(np.linalg.matrix_rank(self.L, tol=1e-10))

    def is_surjective(self):
        return self.rank == self.k

    def beta(self, p=2):
        """Smallest constant with beta * |phi o L| >= |phi| for all dual phi (p = 2)."""
        if p != 2:
            raise DomainError("beta is implemented for the Euclidean norm only")
        if not self.is_surjective():
            raise PreconditionError("beta needs a surjective map")
        smin = np.linalg.svd(self.L, compute_uv=False)[-1]
        return float(1.0 / smin)

    @staticmethod
    def alpha(v_tilde, v, p=2):
        return vec_norm(v_tilde, p) / vec_norm(v, p)

    def to_spec(self):
        return {"matrix": self.L.tolist()}


def householder_aligning(v, axis, n):
    """Orthogonal Q with Q v proportional (positively) to the given axis unit vector."""
    v = np.asarray(v, dtype=np.float64)
    e = np.zeros(n)
    e[axis] = 1.0
    nv = np.linalg.norm(v)
    if nv < 1e-14:
        raise DomainError("cannot align the zero vector")
    u = v / nv - e
    if np.linalg.norm(u) < 1e-14:
        return np.eye(n)
    u = u / np.linalg.norm(u)
    return np.eye(n) - 2.0 * np.outer(u, u)


def affine_image(body, R, c):
    """Image {R u + c : u in body}; pushes through H-representations when possible."""
    R = np.asarray(R, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    hrep = to_hrep(body)
    if hrep is not None:
        M = hrep.A @ np.linalg.inv(R)
        return HRepBody(M, hrep.b + M @ c)
    return AffineBody(body, R, c)
