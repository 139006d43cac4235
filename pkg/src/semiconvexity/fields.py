"""Scalar fields on bodies: expression-backed, composed, or finite-differenced.

Batch evaluation is the primitive: values(X) on an (m, n) array and
gradients(X) of shape (m, n).  Fields attached to a body refuse evaluation
outside it (the inequalities under test are only claimed there).
"""

import numpy as np

from . import kernels
from .errors import DomainError
from .expr import evaluate_with_gradient, parse_ast
from .geometry import dual_exponent

_FD_STEP = float(np.finfo(np.float64).eps) ** (1.0 / 3.0)


class ScalarField:
    n: int

    def __init__(self, n, domain=None, tag="field"):
        self.n = int(n)
        self.domain = domain
        self.tag = tag

    # subclasses implement the unchecked batch primitives
    def _values(self, X):
        raise NotImplementedError

    def _gradients(self, X):
        raise NotImplementedError

    has_analytic_gradient = True

    def _check_domain(self, X):
        if self.domain is None:
            return
        mask = self.domain.contains(X)
        if not np.all(mask):
            i = int(np.argmin(mask))
            raise DomainError(f"point outside the field's body: index {i}, x={X[i].tolist()}")

    def values(self, X, check_domain=True):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if check_domain:
            self._check_domain(X)
        return self._values(X)

    def gradients(self, X, check_domain=True):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if check_domain:
            self._check_domain(X)
        return self._gradients(X)

    def value(self, x):
        return float(self.values(np.asarray(x).reshape(1, -1))[0])

    def gradient(self, x):
        return self.gradients(np.asarray(x).reshape(1, -1))[0]

    def negated(self):
        return NegatedField(self)

    def with_domain(self, body):
        clone = self.__class__.__new__(self.__class__)
        clone.__dict__.update(self.__dict__)
        clone.domain = body
        return clone

    def to_spec(self):
        raise DomainError(f"field {self.tag!r} cannot be serialized")


class ExprField(ScalarField):
    def __init__(self, src, n, domain=None, tag=None):
        super().__init__(n, domain, tag or f"expr:{src}")
        self.src = src
        self.ast = parse_ast(src, n)

    def _values(self, X):
        vals, _ = evaluate_with_gradient(self.ast, X)
        return vals

    def _gradients(self, X):
        _, grads = evaluate_with_gradient(self.ast, X)
        return grads

    def to_spec(self):
        return {"type": "expr", "src": self.src}


class CatalogField(ExprField):
    _TEMPLATES = {
        "saddle": ("0.5*{c}*(x1^2 - x2^2)", 2),
        "product": ("{scale}*x1*x2", 2),
        "logwedge": ("{scale}*log(x1)*x2", 2),
    }

    def __init__(self, cat_id, domain=None, **params):
        if cat_id not in self._TEMPLATES:
            raise DomainError(f"unknown catalog field {cat_id!r}")
        template, n = self._TEMPLATES[cat_id]
        defaults = {"c": 1.0, "scale": 1.0}
        defaults.update(params)
        self.cat_id = cat_id
        self.params = {k: float(v) for k, v in defaults.items() if "{" + k + "}" in template}
        src = template.format(**defaults)
        super().__init__(src, n, domain, tag=f"catalog:{cat_id}")

    def to_spec(self):
        out = {"type": "catalog", "id": self.cat_id}
        out.update(self.params)
        return out


def catalog_field(cat_id, domain=None, **params):
    return CatalogField(cat_id, domain=domain, **params)


class NegatedField(ScalarField):
    def __init__(self, base):
        super().__init__(base.n, base.domain, f"neg({base.tag})")
        self.base = base
        self.has_analytic_gradient = base.has_analytic_gradient

    def _values(self, X):
        return -self.base._values(X)

    def _gradients(self, X):
        return -self.base._gradients(X)


class LinearPrecomposeField(ScalarField):
    """f(M x + c): chain-rule gradient M^T grad f.  Covers lifts (c = 0) and affine transports."""

    def __init__(self, base, M, c=None, domain=None, tag=None):
        M = np.atleast_2d(np.asarray(M, dtype=np.float64))
        if M.shape[0] != base.n:
            raise DomainError("precompose matrix must map into the base field's dimension")
        super().__init__(M.shape[1], domain, tag or f"compose({base.tag})")
        self.base = base
        self.M = M
        self.c = np.zeros(M.shape[0]) if c is None else np.asarray(c, dtype=np.float64)
        self.has_analytic_gradient = base.has_analytic_gradient

    def _inner(self, X):
        return X @ self.M.T + self.c

    def _values(self, X):
        return self.base._values(self._inner(X))

    def _gradients(self, X):
        return self.base._gradients(self._inner(X)) @ self.M

    def to_spec(self):
        return {
            "type": "precompose",
            "base": self.base.to_spec(),
            "matrix": self.M.tolist(),
            "offset": self.c.tolist(),
        }


class FiniteDifferenceField(ScalarField):
    """Wraps a plain callable; central differences with h = eps^(1/3) (1 + |x|)."""

    has_analytic_gradient = False

    def __init__(self, fn, n, domain=None, tag="fd-field"):
        super().__init__(n, domain, tag)
        self.fn = fn

    def _values(self, X):
        return np.array([float(self.fn(x)) for x in X])

    def _gradients(self, X):
        out = np.empty_like(X)
        for i, x in enumerate(X):
            h = _FD_STEP * (1.0 + np.linalg.norm(x))
            if self.domain is not None:
                stencil = np.vstack([x + 2 * h * np.eye(self.n), x - 2 * h * np.eye(self.n)])
                if not np.all(self.domain.contains(stencil)):
                    raise DomainError(f"point too close to the boundary for the difference stencil: {x.tolist()}")
            for j in range(self.n):
                e = np.zeros(self.n)
                e[j] = h
                out[i, j] = (self.fn(x + e) - self.fn(x - e)) / (2.0 * h)
        return out


def parse_expression(src, n, domain=None):
    """Compile the expression grammar into a field with forward-mode gradients."""
    return ExprField(src, n, domain=domain)


def finite_difference_gradient(field, x, rel_step=None):
    """Independent central-difference gradient for cross-checking analytic ones."""
    x = np.asarray(x, dtype=np.float64)
    h = (rel_step or _FD_STEP) * (1.0 + np.linalg.norm(x))
    out = np.empty(field.n)
    for j in range(field.n):
        e = np.zeros(field.n)
        e[j] = h
        out[j] = (field.values(x + e, check_domain=False)[0] - field.values(x - e, check_domain=False)[0]) / (2.0 * h)
    return out


def eval_gradient(field, x, p=2):
    """(gradient, dual norm) at an interior point; the dual pairs l2<->l2, linf<->l1."""
    x = np.asarray(x, dtype=np.float64)
    g = field.gradient(x)
    q = dual_exponent(p)
    return g, float(kernels.row_norms(g.reshape(1, -1), q)[0])


class LineRestriction:
    """One-dimensional slice t -> f(a + t v) on the open interval where a + t v stays inside."""

    def __init__(self, field, a, v, t_lo, t_hi):
        self.field = field
        self.a = np.asarray(a, dtype=np.float64)
        self.v = np.asarray(v, dtype=np.float64)
        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)

    def points(self, T):
        T = np.atleast_1d(np.asarray(T, dtype=np.float64))
        return self.a + T[:, None] * self.v

    def values(self, T):
        return self.field.values(self.points(T), check_domain=False)

    def derivatives(self, T):
        return self.field.gradients(self.points(T), check_domain=False) @ self.v

    def value(self, t):
        return float(self.values([t])[0])

    def as_field(self, window=1e4):
        """Re-package as a 1-D field on an interval body, for the line-equivalence checks."""
        from .geometry import HRepBody

        lo = max(self.t_lo, -window)
        hi = min(self.t_hi, window)
        body = HRepBody(np.array([[1.0], [-1.0]]), np.array([hi, -lo]))
        outer = self

        class _LineField(ScalarField):
            has_analytic_gradient = outer.field.has_analytic_gradient

            def _values(self, X):
                return outer.values(X[:, 0])

            def _gradients(self, X):
                return outer.derivatives(X[:, 0])[:, None]

        f = _LineField(1, domain=body, tag=f"line({outer.field.tag})")
        return f


def restrict_to_line(field, a, v, t_cap=1e12, tol=1e-10):
    """Restriction with the interval endpoints located by bisection against membership."""
    if field.domain is None:
        raise DomainError("line restriction needs a field with a body")
    a = np.asarray(a, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise DomainError("direction must be nonzero")
    v = v / nv
    body = field.domain
    if not body.contains_point(a):
        raise DomainError("base point must lie in the body")

    def endpoint(sign):
        t = 1.0
        while body.contains_point(a + sign * t * v):
            t *= 2.0
            if t > t_cap:
                return np.inf
        lo, hi = t / 2.0 if t > 1.0 else 0.0, t
        while hi - lo > tol * (1.0 + hi):
            mid = 0.5 * (lo + hi)
            if body.contains_point(a + sign * mid * v):
                lo = mid
            else:
                hi = mid
        return lo

    t_hi = endpoint(1.0)
    t_lo = -endpoint(-1.0)
    return LineRestriction(field, a, v, t_lo, t_hi)


def field_from_spec(spec, n=None, domain=None):
    from .errors import SceneError

    if not isinstance(spec, dict) or "type" not in spec:
        raise SceneError("field spec must be an object with a 'type'")
    kind = spec["type"]
    if kind == "expr":
        stray = set(spec) - {"type", "src", "n"}
        if stray:
            raise SceneError(f"unknown keys in field spec: {sorted(stray)}")
        dim = spec.get("n", n)
        if dim is None:
            raise SceneError("expression field needs a dimension")
        return ExprField(spec["src"], int(dim), domain=domain)
    if kind == "catalog":
        params = {k: v for k, v in spec.items() if k not in ("type", "id")}
        return CatalogField(spec["id"], domain=domain, **params)
    if kind == "precompose":
        base = field_from_spec(spec["base"])
        return LinearPrecomposeField(base, spec["matrix"], spec.get("offset"), domain=domain)
    raise SceneError(f"unknown field type {kind!r}")
