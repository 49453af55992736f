"""Length coordinates for polygons star-shaped about their last vertex.

A polygon ``M_1 ... M_n`` that is star-shaped about ``M_n`` is described by
the flat tuple ``(t_1, x_1, t_2, x_2, ..., t_{n-2}, x_{n-2}, t_{n-1})`` where
``t_k = |M_n M_k|`` are rays from the apex and ``x_k = |M_k M_{k+1}|`` are the
outer sides.  Slot ``2k-2`` (0-based) holds ``t_k`` and slot ``2k-1`` holds
``x_k``.  Consecutive triples ``(t_k, x_k, t_{k+1})`` are the fan triangles
``(M_n, M_k, M_{k+1})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import DomainError, ValidationError

EPS_MEM = 1e-9
EPS_REC = 1e-8


@dataclass(frozen=True)
class TriangleTriple:
    """One fan triangle: ray ``t``, outer side ``x``, ray ``s``."""

    t: float
    x: float
    s: float

    def scaled(self, lam: float) -> "TriangleTriple":
        return TriangleTriple(lam * self.t, lam * self.x, lam * self.s)


@dataclass(frozen=True)
class StarPolygon:
    """Interleaved length tuple of ``2n-3`` entries.

    Construction only checks the shape of the tuple; membership in the open
    set of valid polygons is :func:`in_omega`'s job.
    """

    lengths: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.lengths)
        if len(vals) < 3 or len(vals) % 2 == 0:
            raise ValidationError(f"length tuple must have odd size 2n-3 >= 3, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError("length tuple contains non-finite entries")
        object.__setattr__(self, "lengths", vals)

    @classmethod
    def of(cls, values: Sequence[float]) -> "StarPolygon":
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return (len(self.lengths) + 3) // 2

    def array(self) -> np.ndarray:
        return np.array(self.lengths, dtype=float)

    def t(self, k: int) -> float:
        """Ray ``t_k`` for ``k = 1..n-1``."""
        return self.lengths[2 * k - 2]

    def x(self, k: int) -> float:
        """Outer side ``x_k`` for ``k = 1..n-2``."""
        return self.lengths[2 * k - 1]

    def triples(self) -> list[TriangleTriple]:
        w = self.lengths
        return [TriangleTriple(w[2 * k], w[2 * k + 1], w[2 * k + 2]) for k in range(self.n - 2)]

    def sides(self) -> tuple[float, ...]:
        """Boundary lengths ``(t_1, x_1, ..., x_{n-2}, t_{n-1})`` in order."""
        w = self.lengths
        return (w[0],) + w[1::2] + (w[-1],)

    def diagonals(self) -> tuple[float, ...]:
        return self.lengths[2:-2:2]

    def scaled(self, lam: float) -> "StarPolygon":
        return StarPolygon(tuple(lam * v for v in self.lengths))

    def reversed(self) -> "StarPolygon":
        return StarPolygon(self.lengths[::-1])

    def __iter__(self) -> Iterator[float]:
        return iter(self.lengths)

    def __len__(self) -> int:
        return len(self.lengths)


PolygonLike = Union[StarPolygon, Sequence[float], np.ndarray]


def as_polygon(p: PolygonLike) -> StarPolygon:
    if isinstance(p, StarPolygon):
        return p
    return StarPolygon(tuple(np.asarray(p, dtype=float).ravel()))


@dataclass(eq=False)
class VertexChain:
    """Planar vertices ``M_1 ... M_n`` with ``M_n`` at the origin."""

    vertices: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(self.vertices) < 3:
            raise ValidationError("a vertex chain needs at least 3 points")

    @property
    def n(self) -> int:
        return len(self.vertices)


def _as_triple(tr) -> tuple[float, float, float]:
    if isinstance(tr, TriangleTriple):
        vals = (tr.t, tr.x, tr.s)
    else:
        vals = tuple(float(v) for v in tr)
        if len(vals) != 3:
            raise ValidationError(f"a triangle triple has 3 entries, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ValidationError("triangle triple contains non-finite entries")
    if min(vals) <= 0.0:
        raise ValidationError(f"triangle triple has a non-positive length: {vals}")
    return vals


def _triple_violation(t: float, x: float, s: float, scale: float) -> str | None:
    """Reason the triple misses the open triangle set, or None.

    All margins are measured after dividing by ``scale``.
    """
    m = EPS_MEM * scale
    if min(t, x, s) <= m:
        return "degenerate length"
    if x + s - t <= m or t + s - x <= m or t + x - s <= m:
        return "triangle inequality violated"
    return None


def in_v(tr) -> bool:
    """Strict triangle inequalities, with the membership margin applied."""
    t, x, s = _as_triple(tr)
    return _triple_violation(t, x, s, max(t, x, s)) is None


def _heron(t: float, x: float, s: float) -> float:
    # Kahan's ordering makes the result exactly symmetric in its arguments.
    a, b, c = sorted((t, x, s), reverse=True)
    prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(max(prod, 0.0))


def _apex(t: float, x: float, s: float) -> float:
    c = (t * t + s * s - x * x) / (2.0 * (t * s))
    return math.acos(min(1.0, max(-1.0, c)))


def _require_V(tr) -> tuple[float, float, float]:
    t, x, s = _as_triple(tr)
    reason = _triple_violation(t, x, s, max(t, x, s))
    if reason:
        raise DomainError(f"{reason}: ({t!r}, {x!r}, {s!r})")
    return t, x, s


def heron_area(tr) -> float:
    """Area of the triangle with side lengths ``t, x, s``."""
    return _heron(*_require_V(tr))


def apex_angle(tr) -> float:
    """Angle at the apex between rays ``t`` and ``s`` (opposite side ``x``)."""
    return _apex(*_require_V(tr))


def omega_violation(p: PolygonLike) -> str | None:
    """Human-readable reason ``p`` is not a valid star polygon, or None."""
    w = as_polygon(p).lengths
    if min(w) <= 0.0:
        raise ValidationError(f"non-positive length at slot {int(np.argmin(w))}")
    scale = max(w)
    total = 0.0
    for k in range(len(w) // 2):
        t, x, s = w[2 * k], w[2 * k + 1], w[2 * k + 2]
        reason = _triple_violation(t, x, s, scale)
        if reason:
            return f"{reason} in fan triangle {k + 1}: ({t!r}, {x!r}, {s!r})"
        total += _apex(t, x, s)
    if total >= 2.0 * math.pi - EPS_MEM:
        return f"fan angles sum to {total!r} >= 2*pi"
    return None


def in_omega(p: PolygonLike) -> bool:
    return omega_violation(p) is None


def require_omega(p: PolygonLike) -> StarPolygon:
    """Return ``p`` as a StarPolygon, raising DomainError if it is not valid."""
    p = as_polygon(p)
    reason = omega_violation(p)
    if reason:
        raise DomainError(reason)
    return p


def fan_angles(p: PolygonLike) -> np.ndarray:
    p = require_omega(p)
    return np.array([_apex(tr.t, tr.x, tr.s) for tr in p.triples()])


def to_vertices(p: PolygonLike) -> VertexChain:
    """Canonical placement: ``M_n`` at the origin, ``M_1`` on the positive u-axis."""
    p = require_omega(p)
    n = p.n
    pts = np.zeros((n, 2))
    pts[0] = (p.t(1), 0.0)
    phi = 0.0
    for k, tr in enumerate(p.triples(), start=1):
        phi += _apex(tr.t, tr.x, tr.s)
        r = p.t(k + 1)
        pts[k] = (r * math.cos(phi), r * math.sin(phi))
    return VertexChain(pts)


def from_vertices(vc: VertexChain | np.ndarray) -> StarPolygon:
    """Length tuple of a chain star-shaped about its last vertex.

    The chain need not be in canonical position; lengths are measured
    relative to the last vertex.
    """
    if not isinstance(vc, VertexChain):
        vc = VertexChain(vc)
    pts = vc.vertices - vc.vertices[-1]
    rays = pts[:-1]
    total = 0.0
    for k in range(len(rays) - 1):
        a, b = rays[k], rays[k + 1]
        cross = a[0] * b[1] - a[1] * b[0]
        dot = a[0] * b[0] + a[1] * b[1]
        ang = math.atan2(cross, dot)
        scale = float(np.hypot(*a) * np.hypot(*b))
        if scale == 0.0 or ang <= 0.0 or ang >= math.pi or abs(cross) <= EPS_MEM * scale:
            raise DomainError(
                f"chain is not star-shaped about its last vertex: fan angle {k + 1} is {ang!r}",
                index=k + 1,
            )
        total += ang
        if total >= 2.0 * math.pi:
            raise DomainError(f"fan angles stop accumulating monotonically at {k + 1}", index=k + 1)
    out = [float(np.hypot(*rays[0]))]
    for k in range(len(rays) - 1):
        out.append(float(np.hypot(*(rays[k + 1] - rays[k]))))
        out.append(float(np.hypot(*rays[k + 1])))
    return StarPolygon(tuple(out))


def shoelace_area(vertices: np.ndarray) -> float:
    """Signed area of a closed vertex list (positive when counter-clockwise)."""
    v = np.asarray(vertices, dtype=float)
    u, w = v[:, 0], v[:, 1]
    return 0.5 * math.fsum(u * np.roll(w, -1) - np.roll(u, -1) * w)


def vertex_angle_sines(p: PolygonLike) -> np.ndarray:
    """Normalized cross products of consecutive edges at every vertex."""
    v = to_vertices(p).vertices
    e_in = v - np.roll(v, 1, axis=0)
    e_out = np.roll(v, -1, axis=0) - v
    cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
    return cross / (np.linalg.norm(e_in, axis=1) * np.linalg.norm(e_out, axis=1))


def is_convex(p: PolygonLike) -> bool:
    """All interior angles strictly inside (0, pi) for the counter-clockwise chain."""
    return bool(np.all(vertex_angle_sines(p) > EPS_MEM))


def parse_polygon(obj: dict) -> StarPolygon:
    """Read ``{"n", "lengths"}`` or ``{"n", "vertices"}`` JSON payloads."""
    if not isinstance(obj, dict):
        raise ValidationError("polygon JSON must be an object")
    if "lengths" in obj:
        p = StarPolygon(tuple(float(v) for v in obj["lengths"]))
    elif "vertices" in obj:
        p = from_vertices(VertexChain(np.asarray(obj["vertices"], dtype=float)))
    else:
        raise ValidationError("polygon JSON needs a 'lengths' or 'vertices' field")
    if "n" in obj and int(obj["n"]) != p.n:
        raise ValidationError(f"declared n={obj['n']} does not match {len(p.lengths)} lengths")
    return p


def polygon_to_json(p: StarPolygon) -> dict:
    return {"n": p.n, "lengths": list(p.lengths)}
