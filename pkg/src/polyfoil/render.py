"""SVG output for polygons, leaf traces and the triangle-plaque atlas.

Drawings use a y-up frame: a group transform flips the y-axis and scales one
length unit to ``px`` pixels.  Every polygon or leaf becomes one ``<path>``;
frames, diagonals and markers use other element types.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from typing import Iterable, Sequence

import numpy as np

from .foliation import LeafTrace, isosceles_equal_pair, plaque_sample, project, trace_leaf
from .polygon_space import StarPolygon, to_vertices

SVG_NS = "http://www.w3.org/2000/svg"
MARGIN = 20.0


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _path_data(points: np.ndarray, closed: bool = True) -> str:
    head = f"M {_fmt(points[0, 0])} {_fmt(points[0, 1])}"
    body = " ".join(f"L {_fmt(u)} {_fmt(v)}" for u, v in points[1:])
    return f"{head} {body}{' Z' if closed else ''}"


class Canvas:
    def __init__(self, bounds: tuple[float, float, float, float], px: float = 40.0, stroke: float = 1.0):
        umin, vmin, umax, vmax = bounds
        self.px, self.stroke = px, stroke
        width = (umax - umin) * px + 2 * MARGIN
        height = (vmax - vmin) * px + 2 * MARGIN
        self.root = ET.Element(
            "svg", xmlns=SVG_NS, width=_fmt(width), height=_fmt(height), viewBox=f"0 0 {_fmt(width)} {_fmt(height)}"
        )
        tx, ty = MARGIN - umin * px, MARGIN + vmax * px
        self.group = ET.SubElement(self.root, "g", transform=f"translate({_fmt(tx)} {_fmt(ty)}) scale({_fmt(px)} {_fmt(-px)})")

    def _style(self, color: str, fill: str = "none") -> dict:
        return {"stroke": color, "fill": fill, "stroke-width": _fmt(self.stroke), "vector-effect": "non-scaling-stroke"}

    def path(self, points: np.ndarray, closed: bool = True, color: str = "black") -> None:
        ET.SubElement(self.group, "path", d=_path_data(np.asarray(points), closed), **self._style(color))

    def outline(self, points: Sequence[Sequence[float]], color: str = "gray") -> None:
        pts = " ".join(f"{_fmt(u)},{_fmt(v)}" for u, v in points)
        ET.SubElement(self.group, "polygon", points=pts, **self._style(color))

    def line(self, a, b, color: str = "gray") -> None:
        ET.SubElement(
            self.group, "line", x1=_fmt(a[0]), y1=_fmt(a[1]), x2=_fmt(b[0]), y2=_fmt(b[1]), **self._style(color)
        )

    def dot(self, at, radius_px: float = 3.0, color: str = "black") -> None:
        ET.SubElement(
            self.group, "circle", cx=_fmt(at[0]), cy=_fmt(at[1]), r=_fmt(radius_px / self.px), fill=color, stroke="none"
        )

    def tostring(self) -> str:
        ET.indent(self.root)
        return ET.tostring(self.root, encoding="unicode") + "\n"


def _bounds(points: Iterable[np.ndarray]) -> tuple[float, float, float, float]:
    allpts = np.vstack(list(points))
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def polygons_svg(polygons: Sequence[StarPolygon], px: float = 40.0, stroke: float = 1.0) -> str:
    chains = [to_vertices(p).vertices for p in polygons]
    canvas = Canvas(_bounds(chains), px, stroke)
    for chain in chains:
        canvas.path(chain)
    return canvas.tostring()


def trace_svg(trace: LeafTrace, px: float = 40.0, stroke: float = 1.0, max_polygons: int = 24) -> str:
    """Triangles: the leaf projected to its first two sides.  Otherwise a
    subsample of the traced polygons."""
    if trace.samples[0].n == 3:
        pts = np.array([s.lengths[:2] for s in trace.samples])
        lam = trace.target.perimeter / 2.0
        canvas = Canvas((0.0, 0.0, lam, lam), px, stroke)
        canvas.outline([(0.0, lam), (lam, 0.0), (lam, lam)])
        canvas.path(pts, closed=trace.closed)
        return canvas.tostring()
    stride = max(1, math.ceil(len(trace.samples) / max_polygons))
    return polygons_svg(trace.samples[::stride], px, stroke)


def atlas_traces(lam: float, levels: int) -> list[LeafTrace]:
    """One closed leaf per area level, evenly spaced below the maximum."""
    peak_area = lam * lam / math.sqrt(27.0)
    traces = []
    for i in range(1, levels + 1):
        a0 = peak_area * i / (levels + 1)
        wide, narrow = isosceles_equal_pair(lam, a0)
        # Leaf size along the diagonal sets a step giving ~150 samples per loop.
        step = math.sqrt(2.0) * (wide.x - narrow.x) * math.pi / 150.0
        traces.append(trace_leaf(StarPolygon(tuple(wide)), step, max_samples=2000))
    return traces


def atlas_svg(lam: float, levels: int = 8, grid: int = 0, px: float = 40.0, stroke: float = 1.0) -> str:
    """Leaves of the plaque of perimeter ``2 lam`` projected to the (x, y) plane."""
    canvas = Canvas((0.0, 0.0, lam, lam), px, stroke)
    canvas.outline([(0.0, lam), (lam, 0.0), (lam, lam)])
    canvas.line((lam / 2.0, lam / 2.0), (lam, lam))
    if grid:
        for tp in plaque_sample(lam, grid):
            canvas.dot(project(tp), radius_px=1.0, color="lightgray")
    for trace in atlas_traces(lam, levels):
        canvas.path(np.array([s.lengths[:2] for s in trace.samples]), closed=True)
    canvas.dot((2.0 * lam / 3.0, 2.0 * lam / 3.0), color="red")
    return canvas.tostring()
