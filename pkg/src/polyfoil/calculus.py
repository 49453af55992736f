"""Perimeter and area functionals, their gradients, and the rank of (p, A)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConditioningError, DomainError
from .polygon_space import EPS_MEM, PolygonLike, StarPolygon, _heron, in_omega, require_omega

TAU_RANK = 1e-7


class PsiValue(NamedTuple):
    perimeter: float
    area: float


@dataclass(frozen=True)
class RankReport:
    singular_values: tuple[float, float]
    rank: int
    is_regular_polygon: bool

    @property
    def ratio(self) -> float:
        s1, s2 = self.singular_values
        return s2 / s1


def perimeter(p: PolygonLike) -> float:
    p = require_omega(p)
    return math.fsum(p.sides())


def area(p: PolygonLike) -> float:
    """Sum of the Heron areas of the fan triangles."""
    p = require_omega(p)
    return math.fsum(_heron(tr.t, tr.x, tr.s) for tr in p.triples())


def psi(p: PolygonLike) -> PsiValue:
    p = require_omega(p)
    return PsiValue(perimeter(p), area(p))


def grad_perimeter(p: PolygonLike) -> np.ndarray:
    p = require_omega(p)
    g = np.zeros(len(p))
    g[0] = g[-1] = 1.0
    g[1::2] = 1.0
    return g


def heron_partials(x: float, y: float, z: float, index: int | None = None) -> np.ndarray:
    """Partials of the Heron area ``h(x, y, z)`` with respect to each side.

    ``dh/dx = x (-x^2 + y^2 + z^2) / (2 sqrt f)`` and cyclically, where ``f``
    is the Heron radicand (16 h^2).
    """
    scale = max(x, y, z)
    root_f = 4.0 * _heron(x, y, z)
    if root_f * root_f <= EPS_MEM * scale**4:
        where = "" if index is None else f" (fan triangle {index})"
        raise ConditioningError(f"Heron radicand too small{where}", index=index)
    xx, yy, zz = x * x, y * y, z * z
    denom = 2.0 * root_f
    return np.array([
        x * (-xx + yy + zz) / denom,
        y * (xx - yy + zz) / denom,
        z * (xx + yy - zz) / denom,
    ])


def fan_partials(p: StarPolygon) -> np.ndarray:
    """``(n-2, 3)`` array: row k holds the Heron partials of fan triangle k+1."""
    return np.array([heron_partials(tr.t, tr.x, tr.s, index=k + 1) for k, tr in enumerate(p.triples())])


def grad_area(p: PolygonLike) -> np.ndarray:
    p = require_omega(p)
    hp = fan_partials(p)
    g = np.zeros(len(p))
    # Triangle k covers slots 2k, 2k+1, 2k+2; shared rays collect two terms.
    for k, (dx, dy, dz) in enumerate(hp):
        g[2 * k] += dx
        g[2 * k + 1] += dy
        g[2 * k + 2] += dz
    return g


def jacobian_psi(p: PolygonLike) -> np.ndarray:
    p = require_omega(p)
    return np.vstack([grad_perimeter(p), grad_area(p)])


def classify_rank(p: PolygonLike, tau: float = TAU_RANK) -> RankReport:
    from .inscribable import is_regular  # cyclic check lives with gamma

    p = require_omega(p)
    sv = np.linalg.svd(jacobian_psi(p), compute_uv=False)
    s1, s2 = float(sv[0]), float(sv[1])
    rank = 2 if s2 > tau * s1 else 1
    return RankReport((s1, s2), rank, is_regular(p))


def finite_diff_gradient(f: Callable[[StarPolygon], float], p: PolygonLike, step: float) -> np.ndarray:
    """Central differences of a scalar functional, one slot at a time."""
    p = require_omega(p)
    w = p.array()
    g = np.empty(len(w))
    for i in range(len(w)):
        hi, lo = w.copy(), w.copy()
        hi[i] += step
        lo[i] -= step
        if not (in_omega(hi) and in_omega(lo)):
            raise DomainError(f"finite-difference step {step!r} leaves the domain at slot {i}", index=i)
        g[i] = (f(StarPolygon(tuple(hi))) - f(StarPolygon(tuple(lo)))) / (2.0 * step)
    return g
