"""Area maximization at fixed perimeter and at fixed side lengths.

Both problems are smooth maximizations over open convex sets:

* fixed perimeter ``L``: drop ``t_1`` and recover it as ``L`` minus the other
  boundary lengths, leaving ``2n-4`` free slots;
* fixed sides: only the ``n-3`` interior diagonals move, and the polygon must
  stay convex.

The ascent is quasi-Newton (BFGS on the inverse Hessian) with Armijo
backtracking; a step is also halved whenever it leaves the feasible set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .calculus import area, fan_partials, grad_area
from .errors import ConvergenceError, DomainError, ValidationError
from .inscribable import check_polygon_inequality, regular_polygon
from .polygon_space import StarPolygon, in_omega, is_convex

EPS_OPT = 1e-8
ARMIJO = 1e-4
BACKTRACK = 0.5
MAX_ITER = 10_000


@dataclass(frozen=True)
class PerimeterSlice:
    """Point of the fixed-perimeter slice: every slot except ``t_1``."""

    n: int
    L: float
    free: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(float(v) for v in self.free))
        if len(self.free) != 2 * self.n - 4:
            raise ValidationError(f"a slice point for n={self.n} has {2 * self.n - 4} entries")

    @property
    def t1(self) -> float:
        return t1_of(self.free, self.L)

    @classmethod
    def from_polygon(cls, p: StarPolygon) -> "PerimeterSlice":
        return cls(p.n, math.fsum(p.sides()), p.lengths[1:])


@dataclass(frozen=True)
class SideFixedConfig:
    sides: tuple[float, ...]
    diagonals: tuple[float, ...]

    def __post_init__(self):
        if len(self.diagonals) != len(self.sides) - 3:
            raise ValidationError("need exactly n-3 diagonals")


@dataclass
class AscentResult:
    polygon: StarPolygon
    area: float
    grad_norm: float
    iterations: int
    history: list[float] = field(default_factory=list)


def t1_of(free: Sequence[float], L: float) -> float:
    free = tuple(free)
    # Boundary slots among the free ones: every x_k (even index) plus t_{n-1}.
    return L - math.fsum(free[0::2] + free[-1:])


def lift(s: PerimeterSlice) -> StarPolygon:
    t1 = s.t1
    if t1 <= 0:
        raise DomainError(f"slice point leaves no room for t_1 (t_1 = {t1!r})")
    p = StarPolygon((t1,) + s.free)
    if not in_omega(p):
        raise DomainError("lifted slice point is not a valid star polygon")
    return p


def area_L(s: PerimeterSlice) -> float:
    return area(lift(s))


def grad_area_L(s: PerimeterSlice) -> np.ndarray:
    """Gradient of the area along the slice, by the chain rule through ``t_1``."""
    p = lift(s)
    n = p.n
    hp = fan_partials(p)  # row k-1: (dh/dx, dh/dy, dh/dz) of fan triangle k
    hx1 = hp[0, 0]
    g = np.empty(2 * n - 4)
    for k in range(1, n - 1):
        g[2 * k - 2] = -hx1 + hp[k - 1, 1]
    for k in range(2, n - 1):
        g[2 * k - 3] = hp[k - 2, 2] + hp[k - 1, 0]
    g[-1] = -hx1 + hp[n - 3, 2]
    return g


def regular_slice(n: int, L: float) -> PerimeterSlice:
    return PerimeterSlice.from_polygon(regular_polygon(n, L))


def _ascend(
    f: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    feasible: Callable[[np.ndarray], bool],
    scale_of: Callable[[np.ndarray], float],
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, np.ndarray, int, list[float]]:
    x = np.array(x0, dtype=float)
    fx, g = f(x), grad(x)
    history = [fx]
    eye = np.eye(len(x))
    H = None
    noise = 64 * np.finfo(float).eps
    for it in range(max_iter):
        gnorm = float(np.max(np.abs(g)))
        scale = scale_of(x)
        if gnorm < tol * scale:
            return x, fx, g, it, history
        if H is None:
            H = eye * (0.1 * scale / gnorm)
        d = H @ g
        slope = float(g @ d)
        if slope <= 0:
            H = eye * (0.1 * scale / gnorm)
            d = H @ g
            slope = float(g @ d)
        alpha, accepted = 1.0, False
        while alpha > 1e-30:
            xn = x + alpha * d
            if feasible(xn):
                fn = f(xn)
                if fn >= fx + ARMIJO * alpha * slope:
                    gn = grad(xn)
                    accepted = True
                    break
                # Near the optimum the gain drops below roundoff in f; fall back
                # to requiring a smaller gradient and no visible loss.
                if abs(fn - fx) <= noise * abs(fx):
                    gn = grad(xn)
                    if np.max(np.abs(gn)) < gnorm:
                        accepted = True
                        break
            alpha *= BACKTRACK
        if not accepted:
            if H is not None and not np.allclose(H, eye * H[0, 0]):
                H = None
                continue
            raise ConvergenceError(f"line search stalled with gradient norm {gnorm:.3e}", residual=gnorm)
        s, y = xn - x, g - gn
        sy = float(s @ y)
        if sy > 1e-300:
            rho = 1.0 / sy
            V = eye - rho * np.outer(s, y)
            H = V @ H @ V.T + rho * np.outer(s, s)
        x, fx, g = xn, fn, gn
        history.append(fx)
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations; gradient norm {np.max(np.abs(g)):.3e}",
        residual=float(np.max(np.abs(g))),
    )


def perturbed_regular_start(n: int, L: float, rng: np.random.Generator, spread: float = 0.01) -> PerimeterSlice:
    base = np.array(regular_slice(n, L).free)
    for _ in range(100):
        cand = PerimeterSlice(n, L, tuple(base * (1.0 + rng.uniform(-spread, spread, base.size))))
        if cand.t1 > 0 and in_omega((cand.t1,) + cand.free):
            return cand
    raise DomainError("could not draw a feasible start")


def maximize_area_fixed_perimeter(
    n: int,
    L: float,
    start: PerimeterSlice | Sequence[float] | None = None,
    seed: int = 0,
    tol: float = EPS_OPT,
    max_iter: int = MAX_ITER,
) -> AscentResult:
    """Maximize area over polygons of perimeter ``L``; the limit is the regular n-gon."""
    if n < 3 or not L > 0:
        raise ValidationError("need n >= 3 and L > 0")
    if start is None:
        start = perturbed_regular_start(n, L, np.random.default_rng(seed))
    elif not isinstance(start, PerimeterSlice):
        start = PerimeterSlice(n, L, tuple(start))
    lift(start)

    def feasible(u):
        t1 = t1_of(u, L)
        return t1 > 0 and in_omega((t1,) + tuple(u))

    def f(u):
        return area_L(PerimeterSlice(n, L, tuple(u)))

    def g(u):
        return grad_area_L(PerimeterSlice(n, L, tuple(u)))

    def scale_of(u):
        return max(t1_of(u, L), float(np.max(u)))

    u, fu, gu, it, hist = _ascend(f, g, np.array(start.free), feasible, scale_of, tol, max_iter)
    poly = lift(PerimeterSlice(n, L, tuple(u)))
    return AscentResult(poly, fu, float(np.max(np.abs(gu))), it, hist)


def lift_sides(sides: Sequence[float], diagonals: Sequence[float]) -> StarPolygon:
    u = list(sides)
    rays = [u[0], *diagonals, u[-1]]
    out = [rays[0]]
    for k in range(len(u) - 2):
        out.extend((u[k + 1], rays[k + 1]))
    return StarPolygon(tuple(float(v) for v in out))


def _side_feasible(sides, diagonals) -> bool:
    p = lift_sides(sides, diagonals)
    return in_omega(p) and is_convex(p)


def convex_realization(
    sides: Sequence[float],
    rng: np.random.Generator | None = None,
    jitter: float = 0.0,
    tries: int = 50,
) -> tuple[float, ...]:
    """Diagonals of some convex polygon with the given sides.

    Edge directions start from chords whose arcs are proportional to the side
    lengths, then a minimum-norm Gauss-Newton correction closes the polygon.
    ``jitter`` randomizes the arc weights to produce different starts.
    """
    u = check_polygon_inequality(sides)
    n = len(u)
    rng = rng or np.random.default_rng(0)
    for attempt in range(tries):
        spread = jitter if attempt == 0 else max(jitter, 0.2)
        w = u * (1.0 + spread * rng.uniform(-1.0, 1.0, n))
        arcs = 2.0 * math.pi * w / w.sum()
        psi = np.concatenate([[0.0], np.cumsum(0.5 * (arcs[:-1] + arcs[1:]))])
        for _ in range(100):
            r = np.array([u @ np.cos(psi), u @ np.sin(psi)])
            if np.hypot(*r) < 1e-14 * u.sum():
                break
            jac = np.vstack([-u * np.sin(psi), u * np.cos(psi)])[:, 1:]
            psi[1:] -= np.linalg.lstsq(jac, r, rcond=None)[0]
        gaps = np.append(np.diff(psi), 2.0 * math.pi - (psi[-1] - psi[0]))
        if np.hypot(*r) >= 1e-10 * u.sum() or np.any(gaps <= 0) or np.any(gaps >= math.pi):
            continue
        verts = np.cumsum(u[:, None] * np.column_stack([np.cos(psi), np.sin(psi)]), axis=0)
        diag = tuple(float(np.hypot(*verts[k - 1])) for k in range(2, n - 1))
        if _side_feasible(u, diag):
            return diag
    raise DomainError("could not build a convex realization of these sides")


def maximize_area_fixed_sides(
    sides: Sequence[float],
    start: Sequence[float] | None = None,
    seed: int = 0,
    tol: float = EPS_OPT,
    max_iter: int = MAX_ITER,
    jitter: float = 0.0,
) -> AscentResult:
    """Maximize area over the diagonals of convex polygons with fixed sides."""
    u = check_polygon_inequality(sides)
    n = len(u)
    if n < 4:
        raise ValidationError("fixed-sides maximization needs n >= 4 (a triangle has no free diagonal)")
    if start is None:
        start = convex_realization(u, np.random.default_rng(seed), jitter=jitter)
    start = tuple(float(v) for v in start)
    if not _side_feasible(u, start):
        raise DomainError("start diagonals do not give a convex polygon")
    slots = [2 * k - 2 for k in range(2, n - 1)]

    def f(t):
        return area(lift_sides(u, t))

    def g(t):
        return grad_area(lift_sides(u, t))[slots]

    def scale_of(t):
        return max(float(u.max()), float(np.max(t)))

    t, ft, gt, it, hist = _ascend(f, g, np.array(start), lambda t: _side_feasible(u, t), scale_of, tol, max_iter)
    return AscentResult(lift_sides(u, t), ft, float(np.max(np.abs(gt))), it, hist)
