"""Random polygon generators shared by the test modules."""

import math

import numpy as np

from polyfoil.polygon_space import StarPolygon, from_vertices


def random_star(rng: np.random.Generator, n: int, min_angle: float = 0.15) -> StarPolygon:
    """Star polygon about its last vertex with well separated fan angles."""
    while True:
        if n == 3:
            angles = np.array([rng.uniform(min_angle, math.pi - min_angle)])
        else:
            total = rng.uniform(0.5 * math.pi, 1.8 * math.pi)
            angles = rng.dirichlet(np.ones(n - 2)) * total
        if np.all(angles > min_angle) and np.all(angles < math.pi - min_angle):
            break
    phi = np.concatenate([[0.0], np.cumsum(angles)])
    r = rng.uniform(0.5, 2.0, n - 1)
    pts = np.vstack([np.column_stack([r * np.cos(phi), r * np.sin(phi)]), [[0.0, 0.0]]])
    return from_vertices(pts)


def circle_points(rng: np.random.Generator, n: int, min_gap: float = 0.05) -> tuple[np.ndarray, float]:
    """Counter-clockwise vertices on a random circle and its radius."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        gaps = np.append(np.diff(ang), 2.0 * math.pi - (ang[-1] - ang[0]))
        if gaps.min() > min_gap:
            break
    R = rng.uniform(0.5, 3.0)
    c = rng.uniform(-1.0, 1.0, 2)
    return c + R * np.column_stack([np.cos(ang), np.sin(ang)]), R


def random_cyclic(rng: np.random.Generator, n: int) -> StarPolygon:
    pts, _ = circle_points(rng, n)
    return from_vertices(pts)
