import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyfoil.calculus import classify_rank
from polyfoil.errors import DomainError, ValidationError
from polyfoil.inscribable import (
    gamma,
    gamma_jacobian,
    is_inscribable,
    regular_polygon,
    solve_cyclic,
    theta,
    theta_gradient,
)
from polyfoil.polygon_space import StarPolygon, from_vertices, is_convex, to_vertices
from polygen import circle_points, random_cyclic

SQUARE = (1.0, 1.0, math.sqrt(2.0), 1.0, 1.0)
seeds = st.integers(0, 2**32 - 1)


def circumcenter(a, b, c):
    """Center of the circle through three points (perpendicular bisectors)."""
    m = np.array([b - a, c - a])
    rhs = 0.5 * np.array([b @ b - a @ a, c @ c - a @ a])
    return np.linalg.solve(m, rhs)


def chord_oracle(n, side):
    """Diagonals of the regular n-gon from explicit points on its circle."""
    R = side / (2.0 * math.sin(math.pi / n))
    ang = 2.0 * math.pi * np.arange(n) / n
    pts = R * np.column_stack([np.cos(ang), np.sin(ang)])
    # M_n = pts[n-1]; diagonals are |M_n M_k| for k = 2..n-2.
    return R, [float(np.hypot(*(pts[k - 1] - pts[n - 1]))) for k in range(2, n - 1)]


def max_spread_from_center(p):
    v = to_vertices(p).vertices
    c = circumcenter(v[0], v[1], v[-1])
    d = np.hypot(*(v - c).T)
    return float(np.ptp(d)), float(d.mean())


class TestTheta:
    def test_examples(self):
        assert theta(*SQUARE) == pytest.approx(0.0, abs=1e-15)
        assert theta(1, 1, 1, 1, 1) == 2.0

    @given(st.lists(st.floats(0.1, 10.0), min_size=5, max_size=5), st.sampled_from([0.5, 2.0, 10.0]))
    def test_homogeneity(self, u, lam):
        val = theta(*u)
        scaled = theta(*(lam * v for v in u))
        assert scaled == pytest.approx(lam**4 * val, rel=1e-12, abs=1e-12 * lam**4 * max(u) ** 4)

    @given(st.lists(st.floats(0.1, 10.0), min_size=5, max_size=5))
    def test_gradient_matches_fd(self, u):
        u = np.array(u)
        h = 1e-6 * u.max()
        fd = [(theta(*(u + h * e)) - theta(*(u - h * e))) / (2 * h) for e in np.eye(5)]
        np.testing.assert_allclose(theta_gradient(*u), fd, rtol=1e-6, atol=1e-7 * u.max() ** 3)


class TestGamma:
    def test_examples(self):
        np.testing.assert_allclose(gamma(SQUARE), [0.0], atol=1e-15)
        np.testing.assert_allclose(gamma(regular_polygon(5, 5)), [0.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(gamma((1, 1, 1.5, 1, 1)), [-0.5], rtol=1e-15)
        assert gamma((3, 4, 5)).shape == (0,)

    def test_inscribable_examples(self):
        assert is_inscribable(SQUARE)
        assert not is_inscribable((1, 1, 1, 1, 1))
        assert is_inscribable((3, 4, 5))
        assert is_inscribable((2, 7, 6))

    def test_nonconvex_rejected(self):
        dart = from_vertices([(1, 0), (0.2, 0.2), (0, 1), (0, 0)])
        with pytest.raises(DomainError):
            is_inscribable(dart)

    def test_jacobian_square(self):
        jac = gamma_jacobian(SQUARE)
        assert jac.shape == (1, 5)
        assert jac[0, 2] == pytest.approx(-4.0 * math.sqrt(2.0), rel=1e-15)

    @pytest.mark.parametrize("n", [5, 7, 9])
    def test_jacobian_band_and_fd(self, n):
        p = random_cyclic(np.random.default_rng(n), n)
        jac = gamma_jacobian(p)
        assert jac.shape == (n - 3, 2 * n - 3)
        for k in range(n - 3):
            outside = np.delete(jac[k], range(2 * k, 2 * k + 5))
            assert not outside.any()
        w, h = p.array(), 1e-6 * max(p.lengths)
        fd = np.column_stack([(gamma(w + h * e) - gamma(w - h * e)) / (2 * h) for e in np.eye(len(w))])
        np.testing.assert_allclose(jac, fd, rtol=1e-6, atol=1e-6 * np.abs(jac).max())

    @settings(max_examples=100, deadline=None)
    @given(st.integers(4, 10), seeds)
    def test_cyclic_vs_perturbed(self, n, seed):
        rng = np.random.default_rng(seed)
        # Arcs at least half the regular arc; see the decisions ledger for why.
        pts, _ = circle_points(rng, n, min_gap=math.pi / n)
        p = from_vertices(pts)
        scale4 = max(p.lengths) ** 4
        assert np.max(np.abs(gamma(p))) < 1e-9 * scale4
        assert np.linalg.matrix_rank(gamma_jacobian(p)) == n - 3
        # Push one vertex (not the fan center) 1% outward from the circle center.
        center = circumcenter(*pts[:3])
        j = int(rng.integers(0, n - 1))
        moved = pts.copy()
        moved[j] = center + 1.01 * (pts[j] - center)
        q = from_vertices(moved)
        if is_convex(q):
            assert np.max(np.abs(gamma(q))) > 1e-4 * max(q.lengths) ** 4

    @settings(max_examples=50, deadline=None)
    @given(st.integers(4, 10), seeds, st.sampled_from([0.5, 2.0, 10.0]))
    def test_homogeneity(self, n, seed, lam):
        from polygen import random_star

        p = random_star(np.random.default_rng(seed), n)
        g, gs = gamma(p), gamma(p.scaled(lam))
        assert np.max(np.abs(gs - lam**4 * g)) <= 1e-12 * np.max(np.abs(lam**4 * g))


class TestSolver:
    def test_square(self):
        sol = solve_cyclic([1, 1, 1, 1])
        assert sol.circumradius == pytest.approx(math.sqrt(2) / 2, rel=1e-13)
        assert sol.center_inside
        np.testing.assert_allclose(sol.diagonals, [math.sqrt(2)], rtol=1e-13)
        np.testing.assert_allclose(sol.polygon.lengths, SQUARE, rtol=1e-13)

    @pytest.mark.parametrize("n", range(3, 13))
    def test_regular_chords(self, n):
        side = 0.7
        R, chords = chord_oracle(n, side)
        sol = solve_cyclic([side] * n)
        assert sol.circumradius == pytest.approx(R, rel=1e-10)
        np.testing.assert_allclose(sol.diagonals, chords, rtol=1e-10)

    def test_5559_equidistant(self):
        sol = solve_cyclic([5, 5, 5, 9])
        spread, radius = max_spread_from_center(sol.polygon)
        assert spread < 1e-8 * radius
        assert radius == pytest.approx(sol.circumradius, rel=1e-10)
        # Three sides of 5 subtend more than pi at R = 9/2, so the center is inside.
        assert sol.center_inside

    @pytest.mark.parametrize("sides", [[1, 1, 1, 2.5], [2.5, 1, 1, 1], [1, 3, 1, 1, 1], [0.3, 0.4, 0.69]])
    def test_center_outside(self, sides):
        sol = solve_cyclic(sides)
        assert not sol.center_inside
        np.testing.assert_allclose(sol.polygon.sides(), sides, rtol=1e-12)
        spread, radius = max_spread_from_center(sol.polygon)
        assert spread < 1e-8 * radius
        assert radius == pytest.approx(sol.circumradius, rel=1e-10)
        assert is_inscribable(sol.polygon)

    def test_polygon_inequality(self):
        with pytest.raises(DomainError) as err:
            solve_cyclic([1, 1, 1, 3])
        assert err.value.index == 4
        with pytest.raises(ValidationError):
            solve_cyclic([1, -1, 1])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 10), seeds)
    def test_uniqueness_and_order_invariance(self, n, seed):
        rng = np.random.default_rng(seed)
        pts, R = circle_points(rng, n)
        p = from_vertices(pts)
        sol = solve_cyclic(p.sides())
        assert sol.circumradius == pytest.approx(R, rel=1e-9)
        np.testing.assert_allclose(sol.diagonals, p.diagonals(), rtol=1e-8)
        sides = list(p.sides())
        k = int(rng.integers(1, n))
        for perm in (sides[k:] + sides[:k], sides[::-1]):
            assert solve_cyclic(perm).circumradius == pytest.approx(sol.circumradius, rel=1e-10)


class TestRegular:
    def test_examples(self):
        np.testing.assert_allclose(regular_polygon(4, 4).lengths, SQUARE, rtol=1e-15)
        np.testing.assert_allclose(regular_polygon(3, 3).lengths, (1, 1, 1), rtol=1e-15)
        np.testing.assert_allclose(regular_polygon(6, 6).diagonals(), chord_oracle(6, 1.0)[1], rtol=1e-14)
        np.testing.assert_allclose(regular_polygon(6, 6).diagonals(), [math.sqrt(3), 2, math.sqrt(3)], rtol=1e-14)

    @pytest.mark.parametrize("n", range(3, 11))
    def test_cyclic_and_rank_one(self, n):
        p = regular_polygon(n, 3.0)
        assert is_inscribable(p)
        assert classify_rank(p).rank == 1

    def test_invalid(self):
        with pytest.raises(ValidationError):
            regular_polygon(2, 1.0)
        with pytest.raises(ValidationError):
            regular_polygon(4, 0.0)
