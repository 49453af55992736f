"""Leaves of constant perimeter and area, with the triangle case worked out.

Off the regular polygons the map (perimeter, area) is a submersion, so its
level sets are manifolds of dimension ``2n-5``.  For triangles these are
closed curves in each fixed-perimeter plaque, winding around the equilateral
point.  :func:`trace_leaf` follows them by predictor-corrector continuation.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .calculus import PsiValue, area, classify_rank, grad_area, grad_perimeter, perimeter, psi
from .errors import ConvergenceError, DomainError, ValidationError
from .polygon_space import EPS_MEM, PolygonLike, StarPolygon, in_omega, require_omega

EPS_LEAF = 1e-8
CORRECTOR_MAX_ITER = 50
CLOSE_AFTER = 10


class TrianglePoint(NamedTuple):
    """Side lengths ``<x y z>`` of a triangle."""

    x: float
    y: float
    z: float

    @property
    def semiperimeter(self) -> float:
        return (self.x + self.y + self.z) / 2.0

    def sorted_sides(self) -> tuple[float, float, float]:
        return tuple(sorted(self))


def _check_triangle(tp) -> TrianglePoint:
    tp = TrianglePoint(*(float(v) for v in tp))
    if not in_omega(tp):
        raise DomainError(f"not a non-degenerate triangle: {tuple(tp)}")
    return tp


def _heron_factors(x, y, z):
    return x + y + z, -x + y + z, x - y + z, x + y - z


def phi(tp) -> float:
    """Squared area, ``(1/16)(x+y+z)(-x+y+z)(x-y+z)(x+y-z)``."""
    x, y, z = _check_triangle(tp)
    s, a, b, c = _heron_factors(x, y, z)
    return s * a * b * c / 16.0


def phi_gradient(tp) -> tuple[float, float, float]:
    """Components ``(A, B, C)`` with ``dPhi = (A dx + B dy + C dz) / 16``."""
    x, y, z = (float(v) for v in tp)
    s, a, b, c = _heron_factors(x, y, z)
    A = a * b * c - s * b * c + s * a * c + s * a * b
    B = a * b * c + s * b * c - s * a * c + s * a * b
    C = a * b * c + s * b * c + s * a * c - s * a * b
    return A, B, C


@dataclass
class LeafTrace:
    target: PsiValue
    samples: list[StarPolygon] = field(default_factory=list)
    arc_steps: list[float] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    closed: bool = False
    stop_reason: str = ""

    def to_csv(self) -> str:
        """Rows ``step_index, slot_0..slot_{2n-4}, perimeter, area, residual``."""
        out = io.StringIO()
        m = len(self.samples[0]) if self.samples else 0
        out.write(",".join(["step_index", *(f"slot_{i}" for i in range(m)), "perimeter", "area", "residual"]))
        out.write("\n")
        for i, (s, res) in enumerate(zip(self.samples, self.residuals)):
            pv = psi(s)
            row = [str(i), *(f"{v:.17g}" for v in s.lengths), f"{pv.perimeter:.17g}", f"{pv.area:.17g}", f"{res:.17g}"]
            out.write(",".join(row))
            out.write("\n")
        return out.getvalue()


def leaf_residual(w: np.ndarray, target: PsiValue) -> float:
    pv = psi(StarPolygon(tuple(w)))
    return max(abs(pv.perimeter - target.perimeter) / target.perimeter, abs(pv.area - target.area) / target.area)


def _correct(w: np.ndarray, target: PsiValue, tol: float) -> tuple[np.ndarray, float]:
    """Gauss-Newton projection onto the leaf, halving steps that do not help."""

    def res_vec(v):
        pv = psi(StarPolygon(tuple(v)))
        return np.array([pv.perimeter - target.perimeter, pv.area - target.area])

    def size(r):
        return max(abs(r[0]) / target.perimeter, abs(r[1]) / target.area)

    r = res_vec(w)
    best = size(r)
    for _ in range(CORRECTOR_MAX_ITER):
        if best < tol * 1e-4:
            break
        jac = np.vstack([grad_perimeter(w), grad_area(w)])
        delta = -np.linalg.pinv(jac) @ r
        lam = 1.0
        while lam > 1e-6:
            trial = w + lam * delta
            if in_omega(trial):
                r_trial = res_vec(trial)
                if size(r_trial) < best:
                    break
            lam *= 0.5
        else:
            break
        w, r, best = trial, r_trial, size(r_trial)
    return w, best


def _null_basis(w: np.ndarray) -> np.ndarray:
    jac = np.vstack([grad_perimeter(w), grad_area(w)])
    _, _, vt = np.linalg.svd(jac)
    return vt[2:]


def _seg_linf_distance(a: np.ndarray, b: np.ndarray, q: np.ndarray) -> float:
    d = b - a
    denom = float(d @ d)
    s = 0.0 if denom == 0.0 else min(1.0, max(0.0, float((q - a) @ d) / denom))
    return float(np.max(np.abs(a + s * d - q)))


def trace_leaf(
    start: PolygonLike,
    step: float,
    max_samples: int = 5000,
    tol: float = EPS_LEAF,
    seed: int = 0,
) -> LeafTrace:
    """Sample the leaf of constant (perimeter, area) through ``start``.

    Triangles: the leaf is a curve, followed along the tangent
    ``grad p x grad A`` with consistent orientation until it closes, leaves
    the domain, or ``max_samples`` is reached.  Larger n: each step moves in a
    random null-space direction (seeded) and projects back.
    """
    start = require_omega(start)
    if step <= 0 or max_samples < 1:
        raise ValidationError("step must be positive and max_samples >= 1")
    if classify_rank(start).rank < 2:
        raise DomainError("singular leaf: start is a regular polygon")
    target = psi(start)
    w0 = start.array()
    trace = LeafTrace(target, [start], [0.0], [True], [leaf_residual(w0, target)])
    rng = np.random.default_rng(seed)
    w, prev_dir = w0, None
    while len(trace.samples) < max_samples:
        if start.n == 3:
            d = np.cross(grad_perimeter(w), grad_area(w))
            d /= np.linalg.norm(d)
            if prev_dir is not None and d @ prev_dir < 0:
                d = -d
        else:
            basis = _null_basis(w)
            d = rng.standard_normal(len(basis)) @ basis
            d /= np.linalg.norm(d)
        h = step
        while True:
            pred = w + h * d
            if in_omega(pred):
                break
            h *= 0.5
            if h < EPS_MEM * step:
                trace.stop_reason = "left the domain"
                return trace
        new, res = _correct(pred, target, tol)
        if res >= tol:
            raise ConvergenceError(f"corrector stalled at residual {res:.3e}", residual=res)
        trace.samples.append(StarPolygon(tuple(new)))
        trace.arc_steps.append(float(np.linalg.norm(new - w)))
        trace.converged.append(True)
        trace.residuals.append(res)
        prev_dir = d
        if start.n == 3 and len(trace.samples) > CLOSE_AFTER and _seg_linf_distance(w, new, w0) < step / 2:
            trace.closed = True
            trace.stop_reason = "closed loop"
            return trace
        w = new
    trace.stop_reason = "max samples"
    return trace


def default_pair_area(lam: float) -> float:
    """Area shared by the isosceles family with sides (11/14, 11/14, 3/7) * lam."""
    return 3.0 * lam * lam / (7.0 * math.sqrt(7.0))


def isosceles_equal_pair(lam: float, a0: float | None = None) -> tuple[TrianglePoint, TrianglePoint]:
    """The two isosceles triangles ``<x x 2lam-2x>`` with semiperimeter ``lam`` and area ``a0``.

    Along the isosceles line the squared area is ``lam (lam-x)^2 (2x-lam)``,
    rising on ``(lam/2, 2lam/3)`` and falling on ``(2lam/3, lam)``; each branch
    holds one root.  The wide-legged root is returned first.
    """
    if not lam > 0:
        raise ValidationError("semiperimeter must be positive")
    if a0 is None:
        a0 = default_pair_area(lam)
    peak = lam**4 / 27.0
    target = a0 * a0
    if a0 <= 0:
        raise DomainError("area must be positive")
    if target >= peak:
        raise DomainError(f"area {a0!r} is not below the equilateral maximum {math.sqrt(peak)!r}")

    def gap(x):
        return lam * (lam - x) ** 2 * (2.0 * x - lam) - target

    top = 2.0 * lam / 3.0
    kw = dict(xtol=1e-15 * lam, rtol=4 * np.finfo(float).eps, maxiter=200)
    x_wide = brentq(gap, top, lam, **kw)
    x_narrow = brentq(gap, lam / 2.0, top, **kw)
    return (
        TrianglePoint(x_wide, x_wide, 2.0 * lam - 2.0 * x_wide),
        TrianglePoint(x_narrow, x_narrow, 2.0 * lam - 2.0 * x_narrow),
    )


def plaque_sample(lam: float, grid: int) -> list[TrianglePoint]:
    """Interior lattice of the plaque of triangles with perimeter ``2 lam``.

    Barycentric weights ``(i, j, k) / (grid + 1)`` over the closure's vertices
    ``(0, lam, lam)``, ``(lam, 0, lam)``, ``(lam, lam, 0)`` with every weight
    positive, so boundary points never appear.  ``z`` is computed as
    ``2 lam - x - y`` which makes ``x + y + z == 2 lam`` hold exactly.
    """
    if not lam > 0 or grid < 2:
        raise ValidationError("need lam > 0 and grid >= 2")
    g = grid + 1
    out = []
    for i in range(1, g - 1):
        for j in range(1, g - i):
            k = g - i - j
            x = lam * (j + k) / g
            y = lam * (i + k) / g
            out.append(TrianglePoint(x, y, 2.0 * lam - (x + y)))
    return out


def project(tp: TrianglePoint) -> tuple[float, float]:
    """Drop ``z``: the plaque maps one-to-one onto the plane ``z = 0``."""
    return tp.x, tp.y
