"""Scene files: the JSON surface shared by the CLI and the witness round-trip.

A scene bundles a body, optionally a field and a modulus, the norm, the
sampler configuration, and the pass tolerance.  Validation is strict: unknown
keys are rejected so that typos fail loudly instead of silently changing a
check.
"""

import json
from dataclasses import dataclass

import numpy as np

from .boundary import boundary_from_spec
from .errors import SceneError
from .fields import field_from_spec
from .geometry import (AffineBody, BallBody, HRepBody, MembershipImageBody, ProductBody, SpaceBody,
                       StripBody, ULBody, WedgeBody)
from .modulus import eta_from_spec, modulus_from_spec
from .sampling import SamplerSpec

_BODY_KEYS = {
    "hrep": {"A", "b"},
    "ball": {"center", "radius", "p"},
    "space": {"n"},
    "strip": set(),
    "wedge": {"eta"},
    "ul": {"u", "l"},
    "product": {"factors"},
    "affine": {"base", "matrix", "offset"},
    "image": {"base", "matrix"},
}


def _check_keys(spec, allowed, what, key="type"):
    stray = set(spec) - allowed - {key}
    if stray:
        raise SceneError(f"unknown keys in {what} spec: {sorted(stray)}")


def body_from_spec(spec):
    if not isinstance(spec, dict) or "type" not in spec:
        raise SceneError("body spec must be an object with a 'type'")
    kind = spec["type"]
    if kind not in _BODY_KEYS:
        raise SceneError(f"unknown body type {kind!r}")
    _check_keys(spec, _BODY_KEYS[kind], "body")
    if kind == "hrep":
        return HRepBody(spec["A"], spec["b"])
    if kind == "ball":
        p = spec.get("p", 2)
        if p == "inf":
            pass
        elif p not in (1, 2):
            raise SceneError("ball norm must be 1, 2 or 'inf'")
        return BallBody(spec["center"], spec["radius"], p)
    if kind == "space":
        return SpaceBody(spec["n"])
    if kind == "strip":
        return StripBody()
    if kind == "wedge":
        return WedgeBody(eta_from_spec(spec["eta"]))
    if kind == "ul":
        return ULBody(boundary_from_spec(spec["u"]), boundary_from_spec(spec["l"]))
    if kind == "product":
        return ProductBody([body_from_spec(f) for f in spec["factors"]])
    if kind == "affine":
        return AffineBody(body_from_spec(spec["base"]), spec["matrix"], spec["offset"])
    base = body_from_spec(spec["base"])
    return MembershipImageBody(base, spec["matrix"])


def _norm_from_spec(value):
    if value in (1, 2):
        return value
    if value == "inf":
        return "inf"
    raise SceneError("norm must be 1, 2 or 'inf'")


@dataclass
class Scene:
    body: object
    field: object | None
    modulus: object | None
    p: object
    sampler: SamplerSpec
    tol: float
    raw: dict

    def to_dict(self):
        return self.raw


_SCENE_KEYS = {"body", "field", "modulus", "norm", "sampler", "tol"}
_SAMPLER_KEYS = {"seed", "count", "window", "window_scale"}


def scene_from_dict(data, require_field=False, require_modulus=False):
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    _check_keys(data, _SCENE_KEYS, "scene", key="__none__")
    if "body" not in data:
        raise SceneError("scene needs a body")
    body = body_from_spec(data["body"])
    field = None
    if "field" in data:
        field = field_from_spec(data["field"], n=body.n, domain=body)
        if field.n != body.n:
            raise SceneError(f"field dimension {field.n} does not match body dimension {body.n}")
    elif require_field:
        raise SceneError("this command needs a field in the scene")
    modulus = None
    if "modulus" in data:
        modulus = modulus_from_spec(data["modulus"])
    elif require_modulus:
        raise SceneError("this command needs a modulus in the scene")
    p = _norm_from_spec(data.get("norm", 2))
    samp = data.get("sampler", {})
    if not isinstance(samp, dict):
        raise SceneError("sampler must be an object")
    _check_keys(samp, _SAMPLER_KEYS, "sampler", key="__none__")
    window = samp.get("window")
    if window is not None:
        window = (np.asarray(window[0], dtype=np.float64), np.asarray(window[1], dtype=np.float64))
    sampler = SamplerSpec(
        seed=int(samp.get("seed", 42)),
        count=int(samp.get("count", 10000)),
        window=window,
        window_scale=float(samp.get("window_scale", 100.0)),
    )
    tol = float(data.get("tol", 1e-9))
    return Scene(body=body, field=field, modulus=modulus, p=p, sampler=sampler, tol=tol, raw=data)


def load_scene(path, require_field=False, require_modulus=False):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene file is not valid JSON: {exc}") from exc
    return scene_from_dict(data, require_field=require_field, require_modulus=require_modulus)
