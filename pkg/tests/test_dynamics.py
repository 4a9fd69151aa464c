import math

import numpy as np
import pytest

from prytz.errors import InputError
from prytz.dynamics import (area_identity_report, closed_tractrix_residual, integrate,
                            standard_tractrix, trace_loop)
from prytz.geom2d import PlanarPath, Point2, circle_path, signed_area, square_path
from conftest import star_polygon

ELL = 1.0


def line_law_theta(x, theta0, ell):
    """Exact lift for a trace along +x: tan(theta/2) = tan(theta0/2) e^{x/ell}."""
    return 2.0 * np.arctan(np.tan(theta0 / 2.0) * np.exp(np.asarray(x) / ell))


def attracting_direction_for_circle(radius, ell):
    """Trailing tangency direction for counterclockwise motion, base at (R, 0)."""
    return -math.acos(-ell / radius)


class TestStraightLine:
    def test_line_law(self):
        path = PlanarPath([(0.0, 0.0), (5.0, 0.0)])
        tr = integrate(path, math.pi / 2, ELL, step=ELL / 200)
        exact = line_law_theta(tr.arclengths, math.pi / 2, ELL)
        assert np.max(np.abs(tr.thetas - exact)) < 1e-8

    def test_equilibria(self):
        path = PlanarPath([(0.0, 0.0), (3.0, 0.0)])
        pushed = integrate(path, 0.0, ELL)
        assert np.max(np.abs(pushed.thetas)) == 0.0
        dragged = integrate(path, math.pi, ELL)
        assert np.max(np.abs(dragged.thetas - math.pi)) == 0.0

    def test_chisel_is_standard_tractrix(self):
        path = PlanarPath([(0.0, 0.0), (4.0, 0.0)])
        tr = integrate(path, math.pi / 2, ELL, step=ELL / 200)
        expected = np.array([[standard_tractrix(x, ELL).x, standard_tractrix(x, ELL).y]
                             for x in tr.arclengths])
        assert np.max(np.abs(tr.chisel_points - expected)) < 1e-8

    def test_fourth_order_convergence(self):
        path = PlanarPath([(0.0, 0.0), (5.0, 0.0)])
        errs = []
        for step in (ELL / 50, ELL / 100):
            tr = integrate(path, math.pi / 2, ELL, step=step)
            exact = line_law_theta(tr.arclengths, math.pi / 2, ELL)
            errs.append(np.max(np.abs(tr.thetas - exact)))
        ratio = errs[0] / errs[1]
        assert 12.0 < ratio < 20.0


class TestTractrixFormula:
    def test_at_origin(self):
        p = standard_tractrix(0.0, 2.0)
        assert (p.x, p.y) == (0.0, 2.0)

    def test_monotone_decay(self):
        ys = [standard_tractrix(x, ELL).y for x in np.linspace(0, 20, 200)]
        assert all(b < a for a, b in zip(ys, ys[1:]))
        assert ys[-1] < 1e-7

    def test_area_under_branch(self):
        # quadrature oracle: integral of y dX along the curve equals pi ell^2 / 4
        xs = np.linspace(0.0, 40.0, 400_001)
        pts = np.array([[standard_tractrix(x, ELL).x, standard_tractrix(x, ELL).y]
                        for x in xs])
        area = np.trapezoid(pts[:, 1], pts[:, 0])
        assert area == pytest.approx(math.pi * ELL ** 2 / 4.0, rel=1e-6)


class TestTraceLoop:
    def test_tiny_square_curvature_rate(self):
        # delta_theta ~ area / ell^2; the start-direction distortion is O(side)
        s = 1e-3 * ELL
        sq = square_path(s, center=(s / 2, s / 2))
        tr = trace_loop(sq, 0, 0.7, ELL, step=s / 50)
        assert tr.delta_theta == pytest.approx(s * s / ELL ** 2, rel=2e-3)

    def test_circle_full_rotation_at_attracting_direction(self):
        from prytz.holonomy import ConnectionParams, holonomy_polygon

        circle = circle_path(2.0 * ELL, n=2048)
        cls = holonomy_polygon(circle, 0, ConnectionParams(ELL)).classification
        theta0 = math.atan2(cls.attracting.imag, cls.attracting.real)
        # geometric check: trailing tangency direction of the smooth circle
        assert theta0 == pytest.approx(attracting_direction_for_circle(2.0 * ELL, ELL),
                                       abs=1e-4)
        tr = trace_loop(circle, 0, theta0, ELL, step=ELL / 200)
        assert abs(tr.delta_theta - 2.0 * math.pi) < 1e-6

    def test_sigma_is_ell_delta_theta(self, rng):
        poly = star_polygon(rng)
        tr = trace_loop(poly, 0, 0.3, ELL)
        assert tr.sigma == tr.ell * tr.delta_theta
        assert tr.sigma_T == pytest.approx(tr.sigma, abs=1e-10)

    def test_open_boundary_rejected(self):
        with pytest.raises(InputError):
            trace_loop(PlanarPath([(0, 0), (1, 0)]), 0, 0.0, ELL)


class TestAreaIdentity:
    def test_randomized_regions(self, rng):
        for _ in range(10):
            poly = star_polygon(rng, r_lo=0.6, r_hi=1.4)
            base = int(rng.integers(0, len(poly)))
            theta0 = rng.uniform(0, 2 * math.pi)
            rep = area_identity_report(poly, base, theta0, ELL, step=ELL / 400)
            assert abs(rep.residual) < 1e-6 * rep.a_region

    def test_small_square_perpendicular_start(self):
        # base mid-left, rod perpendicular to the bisecting horizontal line
        s = 0.1 * ELL
        sq = PlanarPath([(0, -s / 2), (s, -s / 2), (s, s / 2), (0, s / 2)], closed=True)
        rep = area_identity_report(sq, 0, math.pi / 2, ELL, step=s / 200)
        assert abs(rep.a_gamma) < 0.05 * rep.a_region

    def test_degenerate_out_and_back(self):
        seg = PlanarPath([(0.0, 0.0), (0.9, 0.4)], closed=True)
        rep = area_identity_report(seg, 0, 0.8, ELL, step=ELL / 400)
        assert rep.a_region == 0.0
        assert abs(rep.ell_sigma + rep.a_gamma) < 1e-12


class TestClosedTractrix:
    def test_circle_attractor_chain(self):
        circle = circle_path(2.0 * ELL, n=2048)
        rep = closed_tractrix_residual(circle, -2.0, ELL, laps=8, step=ELL / 400)
        assert rep.per_lap_theta_gap < 1e-8
        assert abs(rep.area_residual) < 1e-4 * ELL ** 2
        assert abs(rep.sigma_t_residual) < 1e-4 * ELL ** 2
        # closed tractrix of R = 2 ell is the circle of radius sqrt(3) ell
        assert rep.a_chisel == pytest.approx(3.0 * math.pi * ELL ** 2, abs=1e-4)

    def test_square_4l_laps(self):
        sq = square_path(4.0 * ELL)
        rep = closed_tractrix_residual(sq, 1.0, ELL, laps=12, step=ELL / 400)
        assert rep.per_lap_theta_gap < 1e-8
        assert abs(rep.area_residual) < 1e-4 * ELL ** 2
        assert abs(rep.sigma_t_residual) < 1e-4 * ELL ** 2

    def test_isoperimetric_limit(self):
        # R -> ell+: sigma_T^2 -> 4 pi A within 1 percent
        R = 1.004 * ELL
        circle = circle_path(R, n=4096)
        theta0 = attracting_direction_for_circle(R, ELL)
        tr = trace_loop(circle, 0, theta0, ELL, step=ELL / 400)
        a_region = signed_area(circle)
        assert tr.sigma_T ** 2 == pytest.approx(4 * math.pi * a_region, rel=0.01)


class TestInvariants:
    def test_constraint_defect(self, rng):
        poly = star_polygon(rng)
        step = ELL / 200
        tr = trace_loop(poly, 0, 1.1, 0.73, step=step)
        assert tr.max_constraint_defect < 1e-10 * step

    def test_translation_invariance(self, rng):
        poly = star_polygon(rng)
        tr0 = trace_loop(poly, 0, 0.9, ELL)
        tr1 = trace_loop(poly.translated(2.5, -1.25), 0, 0.9, ELL)
        assert np.max(np.abs(tr0.thetas - tr1.thetas)) < 1e-12
        assert np.allclose(tr1.points - [2.5, -1.25], tr0.points, atol=1e-12)

    def test_rotation_equivariance(self, rng):
        poly = star_polygon(rng)
        start = tuple(poly.vertices[0])
        psi = 0.77
        tr0 = trace_loop(poly, 0, 0.4, ELL)
        tr1 = trace_loop(poly.rotated(psi, about=start), 0, 0.4 + psi, ELL)
        assert np.max(np.abs(tr1.thetas - (tr0.thetas + psi))) < 1e-9
        c, s = math.cos(psi), math.sin(psi)
        rot = np.array([[c, -s], [s, c]])
        moved = (tr0.points - start) @ rot.T + start
        assert np.max(np.abs(tr1.points - moved)) < 1e-9

    def test_scale_invariance(self, rng):
        poly = star_polygon(rng)
        lam = 3.2
        tr0 = trace_loop(poly, 0, 0.4, ELL, step=ELL / 100)
        tr1 = trace_loop(poly.scaled(lam), 0, 0.4, lam * ELL, step=lam * ELL / 100)
        assert np.max(np.abs(tr0.thetas - tr1.thetas)) < 1e-12

    def test_swept_area_against_midpoint_quadrature(self, rng):
        # independent route: trapezoid quadrature of ell * N . dm along the trace
        poly = star_polygon(rng)
        tr = trace_loop(poly, 0, 0.6, ELL, step=ELL / 400)
        mid = 0.5 * (tr.points + tr.chisel_points)
        dm = np.diff(mid, axis=0)
        nx, ny = np.sin(tr.thetas), -np.cos(tr.thetas)
        n_avg = 0.5 * np.column_stack([nx[:-1] + nx[1:], ny[:-1] + ny[1:]])
        quad = ELL * float(np.sum(n_avg[:, 0] * dm[:, 0] + n_avg[:, 1] * dm[:, 1]))
        assert quad == pytest.approx(tr.swept_area, rel=1e-4, abs=1e-8)

    def test_input_validation(self):
        path = PlanarPath([(0, 0), (1, 0)])
        with pytest.raises(InputError):
            integrate(path, math.nan, ELL)
        with pytest.raises(InputError):
            integrate(path, 0.0, -1.0)
        with pytest.raises(InputError):
            integrate(path, 0.0, ELL, step=0.0)
