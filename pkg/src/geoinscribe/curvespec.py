"""Declarative curve descriptions (versioned JSON) and their sampling.

A curve file is a JSON object checked against ``data/curve.schema.json``::

    {"version": 1, "surface": "hyperbolic", "chart": "poincare-disk",
     "family": "fourier-radial", "samples": 1024,
     "params": {"center": [0, 0], "radius": 0.5, "cos": [0, 0, 0.05]}}

Families:

* ``circle``: ``center`` and ``radius``.
* ``fourier-radial``: ``r(t) = radius + sum_k cos[k-1] cos(2 pi k t) + sin[k-1] sin(2 pi k t)``.
* ``point-list``: explicit ``points`` in chart coordinates, used as the samples.

In two-dimensional charts the first two families are polar curves about
``center`` in chart coordinates.  In the ``embedded-r3`` chart they are
geodesic polar curves on the sphere about the unit vector ``center``
(default north pole), with ``r(t)`` the geodesic radius.  All angles and
radii are plain numbers in radians or surface units.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from . import charts
from . import geometry as geo
from .curve import SampledCurve
from .errors import DiameterWarning, GeometryError, SchemaError
from .geometry import Surface

SCHEMA_VERSION = 1
DEFAULT_SAMPLES = 1024


@lru_cache(maxsize=1)
def curve_schema():
    text = resources.files("geoinscribe").joinpath("data/curve.schema.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class CurveSpec:
    surface: Surface
    chart: str
    family: str
    params: dict = field(hash=False)
    samples: int = DEFAULT_SAMPLES
    name: str = ""

    @property
    def dim(self):
        return 3 if self.chart == "embedded-r3" else 2

    def to_dict(self):
        out = {"version": SCHEMA_VERSION, "surface": self.surface.value, "chart": self.chart,
               "family": self.family, "samples": self.samples, "params": self.params}
        if self.name:
            out["name"] = self.name
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def read_curve_spec(text) -> CurveSpec:
    """Parse and validate curve-spec text (syntax, schema and semantics)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"curve spec is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, curve_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"curve spec invalid at {where}: {exc.message}") from None
    surface = Surface(doc["surface"])
    chart = doc["chart"]
    if charts.CHARTS[chart] is not surface:
        raise SchemaError(f"chart {chart!r} does not belong to surface {surface.value!r}")
    spec = CurveSpec(surface, chart, doc["family"], doc["params"],
                     doc.get("samples", DEFAULT_SAMPLES), doc.get("name", ""))
    _check_semantics(spec)
    return spec


def _coords(spec, key, default):
    value = np.asarray(spec.params.get(key, default), dtype=float)
    if value.shape[-1] != spec.dim:
        raise SchemaError(f"{key} needs {spec.dim} coordinates in chart {spec.chart!r}")
    return value


def _coefficients(spec):
    a = np.asarray(spec.params.get("cos", []), dtype=float)
    b = np.asarray(spec.params.get("sin", []), dtype=float)
    return a, b


def _check_semantics(spec: CurveSpec):
    p = spec.params
    if spec.family == "point-list":
        pts = _coords(spec, "points", [])
        if len(np.unique(pts, axis=0)) < len(pts):
            raise SchemaError("point list contains a repeated point")
        if spec.chart == "poincare-disk" and np.any(np.sum(pts ** 2, axis=1) >= 1):
            raise SchemaError("poincare-disk points must lie inside the unit disk")
        if spec.chart == "upper-half-plane" and np.any(pts[:, 1] <= 0):
            raise SchemaError("upper-half-plane points need y > 0")
        if spec.chart == "embedded-r3" and np.any(np.linalg.norm(pts, axis=1) == 0):
            raise SchemaError("embedded-r3 points must be nonzero")
        return
    center = _coords(spec, "center", [0.0, 0.0, 1.0] if spec.dim == 3 else [0.0, 0.0])
    a, b = _coefficients(spec)
    reach = p["radius"] + np.sum(np.abs(a)) + np.sum(np.abs(b))
    if p["radius"] <= np.sum(np.abs(a)) + np.sum(np.abs(b)):
        raise SchemaError("base radius must exceed the sum of |Fourier coefficients|")
    if spec.chart == "poincare-disk" and np.linalg.norm(center) + reach >= 1:
        raise SchemaError("curve leaves the unit disk")
    if spec.chart == "upper-half-plane" and center[1] - reach <= 0:
        raise SchemaError("curve leaves the upper half-plane")
    if spec.chart == "embedded-r3":
        if np.linalg.norm(center) == 0:
            raise SchemaError("center must be a nonzero vector")
        if reach >= np.pi:
            raise SchemaError("geodesic radius must stay below pi")


def _radial(spec, t):
    r = np.full_like(t, float(spec.params["radius"]))
    a, b = _coefficients(spec)
    for k, ak in enumerate(a, start=1):
        r += ak * np.cos(2 * np.pi * k * t)
    for k, bk in enumerate(b, start=1):
        r += bk * np.sin(2 * np.pi * k * t)
    return r


def sample_points(spec: CurveSpec):
    """Embedding coordinates of the samples described by ``spec``."""
    if spec.family == "point-list":
        return charts.from_chart(spec.chart, _coords(spec, "points", []))
    n = spec.samples
    t = np.arange(n) / n
    r = _radial(spec, t)
    ang = 2 * np.pi * t
    if spec.chart == "embedded-r3":
        c = _coords(spec, "center", [0.0, 0.0, 1.0])
        c = c / np.linalg.norm(c)
        e1, e2 = geo.frame_at(Surface.SPHERICAL, c)
        dirs = np.cos(ang)[:, None] * e1 + np.sin(ang)[:, None] * e2
        return np.cos(r)[:, None] * c + np.sin(r)[:, None] * dirs
    c = _coords(spec, "center", [0.0, 0.0])
    xy = c + r[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return charts.from_chart(spec.chart, xy)


def curve_from_spec(spec: CurveSpec) -> SampledCurve:
    try:
        sc = SampledCurve(spec.surface, sample_points(spec), chart=spec.chart)
    except GeometryError as exc:
        raise GeometryError(f"curve rejected: {exc}") from None
    if sc.surface is Surface.SPHERICAL and sc.diameter >= np.pi - 1e-12:
        warnings.warn(f"spherical curve has diameter {sc.diameter:.6f} >= pi; it meets its "
                      "antipodal image", DiameterWarning, stacklevel=2)
    return sc


def parse_curve(text) -> SampledCurve:
    """Curve-spec text to a validated ``SampledCurve`` (diameter cached)."""
    return curve_from_spec(read_curve_spec(text))


def load_curve(path) -> SampledCurve:
    with open(path, "rb") as fh:
        return parse_curve(fh.read())


def bundled_curves():
    """Names of the curve files shipped with the package."""
    root = resources.files("geoinscribe").joinpath("data/curves")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_curve_text(name):
    return resources.files("geoinscribe").joinpath(f"data/curves/{name}.json").read_text("utf-8")


def load_bundled(name) -> SampledCurve:
    if name not in bundled_curves():
        raise SchemaError(f"no bundled curve {name!r}; choose from {bundled_curves()}")
    return parse_curve(bundled_curve_text(name))


def fourier_curve(chart, radius, cos=(), sin=(), center=None, samples=DEFAULT_SAMPLES):
    """Shortcut for a validated ``fourier-radial`` curve in ``chart``."""
    params = {"radius": float(radius), "cos": [float(c) for c in cos],
              "sin": [float(s) for s in sin]}
    if center is not None:
        params["center"] = [float(c) for c in center]
    doc = {"version": SCHEMA_VERSION, "surface": charts.CHARTS[chart].value, "chart": chart,
           "family": "fourier-radial", "samples": int(samples), "params": params}
    return parse_curve(json.dumps(doc))
