"""Serializable one-dimensional boundary functions for wedge-like bodies.

Upper boundaries are concave (min of affine pieces when polyhedral), lower
boundaries convex (max of affine pieces).  Arbitrary callables are accepted
everywhere but cannot be serialized.
"""

import numpy as np

from .errors import ConstructionError, SceneError


class BoundaryFunction:
    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def _eval(self, x):
        raise NotImplementedError

    def to_spec(self):
        raise ConstructionError("this boundary function cannot be serialized")

    def right_derivative(self, x, h=1e-6):
        return (self(x + h) - self(x)) / h


class ConstBoundary(BoundaryFunction):
    def __init__(self, value):
        self.value = float(value)

    def _eval(self, x):
        return np.full_like(x, self.value)

    def right_derivative(self, x, h=1e-6):
        return 0.0

    def to_spec(self):
        return {"type": "const", "value": self.value}


class MinAffine(BoundaryFunction):
    """min_i (slope_i * x + intercept_i): concave piecewise-linear."""

    def __init__(self, pieces):
        if not pieces:
            raise ConstructionError("min-affine needs at least one piece")
        self.pieces = [(float(s), float(c)) for s, c in pieces]

    def _eval(self, x):
        vals = np.stack([s * x + c for s, c in self.pieces])
        return vals.min(axis=0)

    def to_spec(self):
        return {"type": "min-affine", "pieces": [[s, c] for s, c in self.pieces]}


class MaxAffine(BoundaryFunction):
    """max_i (slope_i * x + intercept_i): convex piecewise-linear."""

    def __init__(self, pieces):
        if not pieces:
            raise ConstructionError("max-affine needs at least one piece")
        self.pieces = [(float(s), float(c)) for s, c in pieces]

    def _eval(self, x):
        vals = np.stack([s * x + c for s, c in self.pieces])
        return vals.max(axis=0)

    def to_spec(self):
        return {"type": "max-affine", "pieces": [[s, c] for s, c in self.pieces]}


class PowerBoundary(BoundaryFunction):
    """scale * x**alpha (concave for alpha in (0, 1])."""

    def __init__(self, scale=1.0, alpha=0.5):
        self.scale = float(scale)
        self.alpha = float(alpha)

    def _eval(self, x):
        return self.scale * np.power(np.maximum(x, 0.0), self.alpha)

    def to_spec(self):
        return {"type": "power", "scale": self.scale, "alpha": self.alpha}


class DifferenceBoundary(BoundaryFunction):
    """u - l, used for the wedge half-height profile."""

    def __init__(self, u, l):
        self.u = u
        self.l = l

    def _eval(self, x):
        return np.atleast_1d(self.u(x)) - np.atleast_1d(self.l(x))

    def to_spec(self):
        return {"type": "difference", "u": self.u.to_spec(), "l": self.l.to_spec()}


class CallableBoundary(BoundaryFunction):
    def __init__(self, fn):
        self.fn = fn

    def _eval(self, x):
        return np.asarray(self.fn(x), dtype=np.float64)


def as_boundary(obj):
    if isinstance(obj, BoundaryFunction):
        return obj
    if callable(obj):
        return CallableBoundary(obj)
    if isinstance(obj, (int, float)):
        return ConstBoundary(obj)
    raise ConstructionError(f"cannot interpret {obj!r} as a boundary function")


def boundary_from_spec(spec):
    if not isinstance(spec, dict) or "type" not in spec:
        raise SceneError("boundary spec must be an object with a 'type'")
    kind = spec["type"]
    if kind == "const":
        return ConstBoundary(spec["value"])
    if kind == "min-affine":
        return MinAffine(spec["pieces"])
    if kind == "max-affine":
        return MaxAffine(spec["pieces"])
    if kind == "power":
        return PowerBoundary(spec.get("scale", 1.0), spec.get("alpha", 0.5))
    if kind == "difference":
        return DifferenceBoundary(boundary_from_spec(spec["u"]), boundary_from_spec(spec["l"]))
    raise SceneError(f"unknown boundary type {kind!r}")
