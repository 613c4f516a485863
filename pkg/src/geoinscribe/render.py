"""Deterministic SVG figures of a curve and its inscriptions."""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from . import charts
from . import geometry as geo
from .curve import SampledCurve
from .geometry import Surface
from .records import ResultRecord

SIZE = 600
COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


class _View:
    """Chart used for drawing, plus the affine map to SVG pixels."""

    def __init__(self, sc: SampledCurve, extra=()):
        self.surface = sc.surface
        self.kind = {Surface.HYPERBOLIC: "upper-half-plane" if sc.chart == "upper-half-plane"
                     else "poincare-disk",
                     Surface.SPHERICAL: "orthographic" if sc.chart == "embedded-r3"
                     else "stereographic",
                     Surface.EUCLIDEAN: "plane"}[sc.surface]
        if self.kind == "orthographic":
            mean = sc.points.mean(axis=0)
            self.eye = mean / np.linalg.norm(mean)
            self.frame = geo.frame_at(Surface.SPHERICAL, self.eye)
        if self.kind in ("poincare-disk", "orthographic"):
            lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
        else:
            pts = np.vstack([self.chart(sc.points)] + [self.chart(e) for e in extra])
            lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = float(np.max(hi - lo)) * 1.1
        mid = 0.5 * (lo + hi)
        self.origin = mid - span / 2
        self.scale = SIZE / span

    def chart(self, pts):
        pts = np.asarray(pts, dtype=float)
        if self.kind == "orthographic":
            return np.stack([pts @ self.frame[0], pts @ self.frame[1]], axis=-1)
        return charts.to_chart(self.kind, pts)

    def pixels(self, pts):
        xy = (self.chart(pts) - self.origin) * self.scale
        return np.stack([xy[..., 0], SIZE - xy[..., 1]], axis=-1)

    def point(self, xy):
        return (np.asarray(xy) - self.origin) * self.scale * np.array([1, -1]) + np.array([0, SIZE])


def _fmt(v):
    return f"{v:.3f}"


def _points_attr(px):
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in px)


def _polyline(parent, px, cls, color, closed=False, dashed=False, width=1.5):
    tag = "polygon" if closed else "polyline"
    attrs = {"class": cls, "points": _points_attr(px), "fill": "none",
             "stroke": color, "stroke-width": _fmt(width)}
    if dashed:
        attrs["stroke-dasharray"] = "6,4"
    return ET.SubElement(parent, tag, attrs)


def _outline(root, view):
    attrs = {"class": "boundary", "fill": "none", "stroke": "#888888", "stroke-width": "1.000"}
    if view.kind in ("poincare-disk", "orthographic", "stereographic"):
        c = view.point([0.0, 0.0])
        ET.SubElement(root, "circle", {**attrs, "cx": _fmt(c[0]), "cy": _fmt(c[1]),
                                       "r": _fmt(view.scale)})
    elif view.kind == "upper-half-plane":
        y = view.point([0.0, 0.0])[1]
        ET.SubElement(root, "line", {**attrs, "x1": "0.000", "y1": _fmt(y),
                                     "x2": _fmt(SIZE), "y2": _fmt(y)})


def _geodesic(surface, x, v, k=48):
    tau = np.linspace(0.0, 1.0, k)[:, None]
    return geo.exp_map(surface, np.broadcast_to(x, (k, 3)), tau * v, check=False)


def build_svg(sc: SampledCurve, results) -> ET.Element:
    """SVG element tree for ``sc`` and ``results`` (ResultRecord or Inscriptions)."""
    found = results.to_inscriptions() if isinstance(results, ResultRecord) else list(results or [])
    s = sc.surface
    angles = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)
    circles = [ins.circle.point_at(angles) for ins in found]
    view = _View(sc, circles)
    root = ET.Element("svg", {"xmlns": "http://www.w3.org/2000/svg", "version": "1.1",
                              "width": str(SIZE), "height": str(SIZE),
                              "viewBox": f"0 0 {SIZE} {SIZE}"})
    ET.SubElement(root, "rect", {"width": str(SIZE), "height": str(SIZE), "fill": "white"})
    _outline(root, view)
    _polyline(root, view.pixels(sc(np.arange(2048) / 2048)), "curve", "#000000", closed=True)
    for k, (ins, circ) in enumerate(zip(found, circles)):
        color = COLORS[k % len(COLORS)]
        g = ET.SubElement(root, "g", {"class": "inscription", "id": f"inscription-{k}"})
        _polyline(g, view.pixels(circ), "inscribing-circle", color, closed=True, width=1.0)
        x = ins.circle.center
        verts = ins.circle.point_at(np.array(ins.triple.vertex_angles))
        for ang in ins.triple.vertex_angles:
            v = geo.rotate_tangent(s, x, ins.circle.radial, ang)
            _polyline(g, view.pixels(_geodesic(s, x, v)), "radius", color, dashed=True, width=1.0)
        _polyline(g, view.pixels(verts), "quadrilateral", color, closed=True, width=1.0)
        c = view.pixels(x)
        ET.SubElement(g, "circle", {"class": "center", "cx": _fmt(c[0]), "cy": _fmt(c[1]),
                                    "r": "2.500", "fill": color})
        for j, p in enumerate(view.pixels(verts)):
            ET.SubElement(g, "circle", {"class": "vertex", "data-index": str(j + 1),
                                        "cx": _fmt(p[0]), "cy": _fmt(p[1]), "r": "4.000",
                                        "fill": color, "stroke": "black", "stroke-width": "0.500"})
    return root


def render_svg(sc: SampledCurve, results, out_path):
    """Write the figure to ``out_path``; identical inputs give identical bytes."""
    root = build_svg(sc, results)
    ET.indent(root)
    data = ET.tostring(root, encoding="unicode")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('<?xml version="1.0" encoding="UTF-8"?>\n' + data + "\n")
    return out_path
