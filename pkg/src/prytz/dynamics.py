"""The instrument: integrate the rolling constraint along a tracer path.

The rod of length ell runs from the tracer point q to the chisel edge
p = q + ell*(cos theta, sin theta). The chisel's velocity has no component
normal to the rod, which for a tracer moving along a curve gives

    ell * d theta = sin(theta) dx - cos(theta) dy.

theta is carried as a continuous lift (never reduced mod 2 pi); winding
numbers and the arc displacement sigma = ell * delta_theta depend on it.
Polygon corners are not smoothed: the tracer direction jumps, theta does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InputError
from .geom2d import PlanarPath, Point2, signed_area

DEFAULT_STEP_FRACTION = 1.0 / 200.0  # arclength substep as a fraction of ell


@dataclass(frozen=True)
class PlanimeterState:
    """Configuration (tracer point, rod angle) of a rod of length ell."""

    q: Point2
    theta: float
    ell: float

    @property
    def chisel(self) -> Point2:
        return Point2(self.q.x + self.ell * math.cos(self.theta),
                      self.q.y + self.ell * math.sin(self.theta))


@dataclass
class TraceResult:
    """Dense output of one trace.

    points/thetas/arclengths hold one sample per RK4 substep boundary;
    seg_dirs[k] is the unit tracer direction on the substep from sample k to
    k+1 (one-sided at polygon corners). sigma is ell*delta_theta by
    construction; sigma_T is the independently accumulated tracer-normal
    displacement (equal to sigma up to roundoff along any trajectory).
    """

    ell: float
    points: np.ndarray
    thetas: np.ndarray
    arclengths: np.ndarray
    seg_dirs: np.ndarray
    sigma_T: float
    max_constraint_defect: float
    _chisel: np.ndarray | None = field(default=None, repr=False)

    @property
    def theta0(self) -> float:
        return float(self.thetas[0])

    @property
    def theta_final(self) -> float:
        return float(self.thetas[-1])

    @property
    def delta_theta(self) -> float:
        return float(self.thetas[-1] - self.thetas[0])

    @property
    def sigma(self) -> float:
        return self.ell * self.delta_theta

    @property
    def swept_area(self) -> float:
        return 0.5 * self.ell ** 2 * self.delta_theta

    @property
    def chisel_points(self) -> np.ndarray:
        if self._chisel is None:
            offs = self.ell * np.column_stack([np.cos(self.thetas), np.sin(self.thetas)])
            self._chisel = self.points + offs
        return self._chisel

    @property
    def chisel_path(self) -> PlanarPath:
        return PlanarPath(self.chisel_points, closed=False, validate=False)

    @property
    def states(self) -> list[PlanimeterState]:
        return [PlanimeterState(Point2(x, y), float(t), self.ell)
                for (x, y), t in zip(self.points, self.thetas)]

    def sample_indices(self, count: int) -> np.ndarray:
        """Indices of ``count`` samples spread evenly along the trace."""
        n = len(self.thetas)
        if count >= n:
            return np.arange(n)
        return np.unique(np.linspace(0, n - 1, count).round().astype(int))

    def chisel_tangents(self) -> np.ndarray:
        """d(chisel)/ds per Hermite segment, (left, right) pairs, shape (n-1, 2, 2).

        On a segment with tracer direction u and angle phi, the chisel moves
        with dp/ds = u + sin(theta - phi) * (-sin theta, cos theta); theta is
        taken one-sided from the segment's own edge at both endpoints.
        """
        ux, uy = self.seg_dirs.T
        out = np.empty((len(ux), 2, 2))
        for side, idx in ((0, slice(None, -1)), (1, slice(1, None))):
            th = self.thetas[idx]
            rate = np.sin(th) * ux - np.cos(th) * uy
            out[:, side, 0] = ux - rate * np.sin(th)
            out[:, side, 1] = uy + rate * np.cos(th)
        return out


def integrate(path: PlanarPath, theta0: float, ell: float,
              step: float | None = None) -> TraceResult:
    """Trace the path with classical RK4 at fixed arclength substeps <= step."""
    if not math.isfinite(theta0):
        raise InputError("theta0 must be finite")
    if not (ell > 0.0 and math.isfinite(ell)):
        raise InputError("ell must be positive and finite")
    if step is None:
        step = ell * DEFAULT_STEP_FRACTION
    if not (step > 0.0 and math.isfinite(step)):
        raise InputError("step must be positive and finite")

    verts = np.ascontiguousarray(path.traversal(), dtype=float)
    seglen = np.hypot(*np.diff(verts, axis=0).T)
    nsub = np.maximum(1, np.ceil(seglen / step - 1e-12)).astype(np.int64)
    total = int(nsub.sum())

    xs = np.empty(total + 1)
    ys = np.empty(total + 1)
    thetas = np.empty(total + 1)
    svals = np.empty(total + 1)
    seg_ux = np.empty(total)
    seg_uy = np.empty(total)
    sigma_t, defect = kernels.rk4_trace(verts, nsub, float(theta0), float(ell),
                                        xs, ys, thetas, svals, seg_ux, seg_uy)
    return TraceResult(ell=float(ell),
                       points=np.column_stack([xs, ys]),
                       thetas=thetas,
                       arclengths=svals,
                       seg_dirs=np.column_stack([seg_ux, seg_uy]),
                       sigma_T=float(sigma_t),
                       max_constraint_defect=float(defect))


def trace_loop(boundary: PlanarPath, base_index: int, theta0: float, ell: float,
               step: float | None = None) -> TraceResult:
    """Trace once around a closed boundary, starting and ending at a vertex."""
    if not boundary.closed:
        raise InputError("trace_loop requires a closed boundary")
    return integrate(boundary.rolled(base_index), theta0, ell, step)


def standard_tractrix(x: float, ell: float) -> Point2:
    """Chisel position when the tracer moves along the x-axis from the
    perpendicular start: (x - ell*tanh(x/ell), ell*sech(x/ell))."""
    u = x / ell
    return Point2(x - ell * math.tanh(u), ell / math.cosh(u))


# ---------------------------------------------------------------------------
# Signed area of the smooth chisel curve.
#
# Chisel samples come with exact one-sided tangents, so each substep is
# replaced by the cubic Hermite interpolant and its 1/2 (x dy - y dx)
# integral evaluated in closed form (Bezier control-point cross products).
# Plain chord shoelace would leave an O(step^2) area defect that dominates
# the identity residuals this module reports.

_BEZ_W = (3.0 / 5.0, 3.0 / 10.0, 1.0 / 10.0, 3.0 / 10.0, 3.0 / 10.0, 3.0 / 5.0)


def _cubic_segment_area(p0, c1, c2, p3) -> np.ndarray:
    def cr(u, v):
        return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]

    w01, w02, w03, w12, w13, w23 = _BEZ_W
    return 0.5 * (w01 * cr(p0, c1) + w02 * cr(p0, c2) + w03 * cr(p0, p3)
                  + w12 * cr(c1, c2) + w13 * cr(c1, p3) + w23 * cr(c2, p3))


def hermite_curve_area(points: np.ndarray, tangents: np.ndarray,
                       ds: np.ndarray) -> float:
    """Open-curve contribution of integral 1/2 (x dy - y dx) along Hermite segments.

    tangents is (n-1, 2, 2) with per-segment (left, right) d/ds vectors and
    ds the segment arclengths.
    """
    p0 = points[:-1]
    p3 = points[1:]
    m0 = tangents[:, 0, :] * ds[:, None]
    m1 = tangents[:, 1, :] * ds[:, None]
    return float(np.sum(_cubic_segment_area(p0, p0 + m0 / 3.0, p3 - m1 / 3.0, p3)))


def _chisel_open_area(trace: TraceResult) -> float:
    ds = np.diff(trace.arclengths)
    return hermite_curve_area(trace.chisel_points, trace.chisel_tangents(), ds)


def _arc_area_term(base: Point2, ell: float, theta_from: float, theta_to: float) -> float:
    """Exact 1/2 (x dy - y dx) along the initial-circle arc, theta_from -> theta_to."""
    def antideriv(t):
        return 0.5 * (ell * (base.x * math.sin(t) - base.y * math.cos(t)) + ell * ell * t)

    return antideriv(theta_to) - antideriv(theta_from)


@dataclass(frozen=True)
class IdentityReport:
    """Decomposition area = ell*sigma + chisel-loop area, with its residual."""

    a_region: float
    ell_sigma: float
    a_gamma: float
    residual: float
    trace: TraceResult


def area_identity_report(boundary: PlanarPath, base_index: int, theta0: float,
                         ell: float, step: float | None = None) -> IdentityReport:
    """Check A_region = ell*sigma + A_gamma for one full trace.

    A_gamma closes the chisel's zig-zag with the initial-circle arc from the
    final chisel position back to the initial one; the arc subtends angle
    -delta_theta about the base (the rigid rotation that returns the rod),
    which is what makes sigma = ell*delta_theta the consistent bookkeeping.
    """
    tr = trace_loop(boundary, base_index, theta0, ell, step)
    base = Point2(*tr.points[0])
    a_region = signed_area(boundary)
    a_gamma = _chisel_open_area(tr) + _arc_area_term(base, ell, tr.theta_final, tr.theta0)
    ell_sigma = ell * tr.sigma
    return IdentityReport(a_region=a_region, ell_sigma=ell_sigma, a_gamma=a_gamma,
                          residual=a_region - ell_sigma - a_gamma, trace=tr)


@dataclass(frozen=True)
class ClosedTractrixReport:
    """Multi-lap convergence onto the closed tractrix and the area chain.

    area_residual   = A_region - A_chisel - pi*ell^2           (final lap)
    sigma_t_residual = ell*sigma_T - pi*ell^2 - (A_region - A_chisel)
    """

    per_lap_theta_gap: float
    area_residual: float
    sigma_t_residual: float
    a_region: float
    a_chisel: float
    sigma_T: float
    lap_delta_thetas: list[float]
    final_lap: TraceResult


def closed_tractrix_residual(boundary: PlanarPath, theta0: float, ell: float,
                             laps: int, step: float | None = None,
                             base_index: int = 0) -> ClosedTractrixReport:
    """Lap the boundary until the chisel settles, then test the area chain."""
    if laps < 1:
        raise InputError("laps must be >= 1")
    theta = theta0
    lap_dthetas = []
    tr = None
    for _ in range(laps):
        tr = trace_loop(boundary, base_index, theta, ell, step)
        lap_dthetas.append(tr.delta_theta)
        theta = tr.theta_final
    gap = abs(lap_dthetas[-1] - 2.0 * math.pi)

    # close the final-lap chisel curve with the straight chord last -> first
    chisel = tr.chisel_points
    a_chisel = _chisel_open_area(tr) + 0.5 * (chisel[-1, 0] * chisel[0, 1]
                                              - chisel[-1, 1] * chisel[0, 0])
    a_region = signed_area(boundary)
    pil2 = math.pi * ell ** 2
    return ClosedTractrixReport(
        per_lap_theta_gap=gap,
        area_residual=a_region - a_chisel - pil2,
        sigma_t_residual=ell * tr.sigma_T - pil2 - (a_region - a_chisel),
        a_region=a_region,
        a_chisel=a_chisel,
        sigma_T=tr.sigma_T,
        lap_delta_thetas=lap_dthetas,
        final_lap=tr,
    )
