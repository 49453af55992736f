"""Cyclic polygons: the quadrilateral relation, its Jacobian, and a solver.

Consecutive fan triangles ``(t_k, x_k, t_{k+1})`` and ``(t_{k+1}, x_{k+1},
t_{k+2})`` share the diagonal ``t_{k+1}``; the quadrilateral they form is
cyclic exactly when the opposite angles at ``M_k`` and ``M_{k+2}`` are
supplementary.  A star polygon is cyclic when all ``n-3`` of these
quadrilaterals are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, ValidationError
from .polygon_space import PolygonLike, StarPolygon, as_polygon, is_convex, require_omega

EPS_CYC = 1e-8
BISECT_TOL = 1e-13
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class CyclicSolution:
    circumradius: float
    center_inside: bool
    diagonals: tuple[float, ...]
    polygon: StarPolygon


def theta(u1: float, u2: float, u3: float, u4: float, u5: float) -> float:
    """Vanishes iff the convex quadrilateral with sides u1, u2, u4, u5 and
    diagonal u3 (u1, u2 meeting the diagonal on one side) is cyclic."""
    return u1 * u2 * (u4 * u4 + u5 * u5 - u3 * u3) + u4 * u5 * (u1 * u1 + u2 * u2 - u3 * u3)


def theta_gradient(u1: float, u2: float, u3: float, u4: float, u5: float) -> np.ndarray:
    a = u4 * u4 + u5 * u5 - u3 * u3
    b = u1 * u1 + u2 * u2 - u3 * u3
    return np.array([
        u2 * a + 2.0 * u1 * u4 * u5,
        u1 * a + 2.0 * u2 * u4 * u5,
        -2.0 * u3 * (u1 * u2 + u4 * u5),
        2.0 * u1 * u2 * u4 + u5 * b,
        2.0 * u1 * u2 * u5 + u4 * b,
    ])


def gamma(p: PolygonLike) -> np.ndarray:
    """Theta on each sliding window of five slots; empty for triangles."""
    w = require_omega(p).lengths
    return np.array([theta(*w[2 * k: 2 * k + 5]) for k in range(len(w) // 2 - 1)])


def gamma_jacobian(p: PolygonLike) -> np.ndarray:
    w = require_omega(p).lengths
    rows = len(w) // 2 - 1
    jac = np.zeros((rows, len(w)))
    for k in range(rows):
        jac[k, 2 * k: 2 * k + 5] = theta_gradient(*w[2 * k: 2 * k + 5])
    return jac


def is_inscribable(p: PolygonLike, tol: float = EPS_CYC) -> bool:
    p = require_omega(p)
    if not is_convex(p):
        raise DomainError("inscribability test needs a convex polygon")
    g = gamma(p)
    return g.size == 0 or float(np.max(np.abs(g))) < tol * max(p.lengths) ** 4


def is_regular(p: PolygonLike, tol: float = EPS_CYC) -> bool:
    """Equilateral and cyclic, both within the relative tolerance ``tol``."""
    p = require_omega(p)
    sides = np.array(p.sides())
    scale = max(p.lengths)
    if np.ptp(sides) > tol * scale:
        return False
    g = gamma(p)
    return g.size == 0 or float(np.max(np.abs(g))) < tol * scale**4


def _central(u: np.ndarray, r: float) -> np.ndarray:
    return 2.0 * np.arcsin(np.minimum(u / (2.0 * r), 1.0))


def _bisect(fun, lo: float, hi: float) -> float:
    """Root of ``fun`` on ``[lo, hi]`` where ``fun(lo) > 0 > fun(hi)``."""
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        val = fun(mid)
        if abs(val) < BISECT_TOL or mid in (lo, hi):
            return mid
        if val > 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError("circumradius bisection did not converge", residual=abs(fun(0.5 * (lo + hi))))


def check_polygon_inequality(sides: Sequence[float]) -> np.ndarray:
    u = np.asarray(sides, dtype=float)
    if u.ndim != 1 or len(u) < 3:
        raise ValidationError("need at least 3 side lengths")
    if not np.all(np.isfinite(u)) or np.any(u <= 0):
        raise ValidationError("side lengths must be finite and positive")
    total = math.fsum(u)
    for j, uj in enumerate(u):
        if uj >= total - uj:
            raise DomainError(
                f"side {j + 1} ({uj!r}) is not shorter than the sum of the others ({total - uj!r})",
                index=j + 1,
            )
    return u


def circumradius(sides: Sequence[float]) -> tuple[float, bool]:
    """Radius of the cyclic polygon with these sides, and whether the center is inside."""
    u = check_polygon_inequality(sides)
    j = int(np.argmax(u))
    r_min = u[j] / 2.0
    if math.fsum(_central(u, r_min)) - 2.0 * math.pi >= 0.0:
        hi = 2.0 * r_min
        while math.fsum(_central(u, hi)) > 2.0 * math.pi:
            hi *= 2.0
        r = _bisect(lambda r: math.fsum(_central(u, r)) - 2.0 * math.pi, r_min, hi)
        return r, True
    others = np.delete(u, j)

    # Center beyond the longest side: the other arcs together equal its arc.
    def excess(r):
        return math.fsum(_central(others, r)) - float(_central(u[j:j + 1], r)[0])

    hi = 2.0 * r_min
    for _ in range(BISECT_MAX_ITER):
        if excess(hi) > 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the circumradius")
    # excess < 0 near r_min and > 0 for large r, so flip the sign for _bisect.
    r = _bisect(lambda r: -excess(r), r_min, hi)
    return r, False


def solve_cyclic(sides: Sequence[float]) -> CyclicSolution:
    """Unique cyclic polygon with consecutive sides ``(t_1, x_1, ..., x_{n-2}, t_{n-1})``."""
    u = check_polygon_inequality(sides)
    n = len(u)
    r, inside = circumradius(u)
    arcs = _central(u, r)
    if not inside:
        j = int(np.argmax(u))
        arcs[j] = 2.0 * math.pi - arcs[j]
    # M_n sits at polar angle 0; M_k at the accumulated arc of the first k sides.
    phi = np.cumsum(arcs[: n - 1])
    rays = 2.0 * r * np.sin(phi / 2.0)
    lengths = [u[0]]
    for k in range(1, n - 1):
        lengths.append(u[k])
        lengths.append(u[-1] if k == n - 2 else float(rays[k]))
    poly = StarPolygon(tuple(float(v) for v in lengths))
    return CyclicSolution(float(r), inside, poly.diagonals(), poly)


def regular_polygon(n: int, L: float) -> StarPolygon:
    """The regular n-gon of perimeter ``L`` in star coordinates."""
    if n < 3 or L <= 0:
        raise ValidationError("need n >= 3 and L > 0")
    side = L / n
    r = side / (2.0 * math.sin(math.pi / n))
    lengths = [side]
    for k in range(2, n):
        lengths.append(side)
        lengths.append(side if k == n - 1 else 2.0 * r * math.sin(k * math.pi / n))
    return StarPolygon(tuple(lengths))


def sides_of(p: PolygonLike) -> tuple[float, ...]:
    return as_polygon(p).sides()
