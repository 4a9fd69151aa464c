"""Closed-form parallelogram holonomy, the attracting criterion, and scans.

For the parallelogram 0, v, v+w, w the loop holonomy is
H = e^{-Y} e^{-X} e^{Y} e^{X} with X = -omega(v), Y = -omega(w). Writing
e^X = (a, b; conj(b), a) and e^Y = (c, d; conj(d), c), everything reduces to
the single invariant Im(conj(b) d):

    trace H = 2 - 4 Im^2(conj(b) d),

so H has an attracting circle fixed point exactly when Im(conj(b) d) > 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .geom2d import PlanarPath, circle_path, ellipse_path, rectangle_path, \
    regular_polygon_path, signed_area, square_path
from .holonomy import ConnectionParams, holonomy_polygon, segment_transport, winding_number
from .su11 import HolonomyKind, SU11Element, compose


@dataclass(frozen=True)
class ParallelogramSpec:
    """Positively oriented parallelogram sides v, w and the rod length."""

    v: tuple[float, float]
    w: tuple[float, float]
    ell: float

    def __post_init__(self):
        if not (self.ell > 0.0 and math.isfinite(self.ell)):
            raise InputError("ell must be positive and finite")
        if self.area <= 0.0:
            raise InputError("v, w must be independent with positive orientation")

    @property
    def area(self) -> float:
        return self.v[0] * self.w[1] - self.v[1] * self.w[0]

    def path(self) -> PlanarPath:
        vx, vy = self.v
        wx, wy = self.w
        return PlanarPath([(0.0, 0.0), (vx, vy), (vx + wx, vy + wy), (wx, wy)], closed=True)


@dataclass(frozen=True)
class MenzinReport:
    trace: float
    im_bd: float
    attracting: bool
    z_plus: complex | None
    z_minus: complex | None
    multiplier_plus: float | None
    multiplier_minus: float | None
    area: float
    area_ratio: float
    element: SU11Element


def _edge_matrices(spec: ParallelogramSpec) -> tuple[SU11Element, SU11Element]:
    params = ConnectionParams(spec.ell)
    return segment_transport(spec.v, params), segment_transport(spec.w, params)


def parallelogram_holonomy(spec: ParallelogramSpec) -> MenzinReport:
    """Fill the full report for one parallelogram."""
    ex, ey = _edge_matrices(spec)
    im_bd = (ex.b.conjugate() * ey.b).imag
    trace = 2.0 - 4.0 * im_bd ** 2
    h = compose(ey.inverse(), compose(ex.inverse(), compose(ey, ex)))
    attracting = im_bd > 1.0
    if attracting:
        z_plus, z_minus = parallelogram_fixed_points(spec)
        m_plus, m_minus = parallelogram_multipliers(spec)
    else:
        z_plus = z_minus = m_plus = m_minus = None
    return MenzinReport(trace=trace, im_bd=im_bd, attracting=attracting,
                        z_plus=z_plus, z_minus=z_minus,
                        multiplier_plus=m_plus, multiplier_minus=m_minus,
                        area=spec.area, area_ratio=spec.area / (math.pi * spec.ell ** 2),
                        element=h)


def attracting_condition(spec: ParallelogramSpec) -> bool:
    """sinh|beta| sinh|delta| sin(angle) > 1, the closed-form criterion."""
    bmag = math.hypot(*spec.v) / (2.0 * spec.ell)
    dmag = math.hypot(*spec.w) / (2.0 * spec.ell)
    sin_angle = spec.area / (math.hypot(*spec.v) * math.hypot(*spec.w))
    return math.sinh(bmag) * math.sinh(dmag) * sin_angle > 1.0


def _fixed_point_pieces(spec: ParallelogramSpec):
    ex, ey = _edge_matrices(spec)
    a, b = ex.a.real, ex.b
    c, d = ey.a.real, ey.b
    im_bd = (b.conjugate() * d).imag
    if not im_bd > 1.0:
        raise InputError("fixed-point formulas require the attracting regime Im(conj(b) d) > 1")
    return a, b, c, d, im_bd


def parallelogram_fixed_points(spec: ParallelogramSpec) -> tuple[complex, complex]:
    """Circle fixed points z_+ (attracting) and z_- (repelling).

    These solve e^Y e^X . z = -z (half a rotation per opposite vertex); both
    land strictly inside the angle spanned by v and w.
    """
    a, b, c, d, im_bd = _fixed_point_pieces(spec)
    ad_bc = a * d + b * c
    rad = math.sqrt(im_bd ** 2 - 1.0)
    lead = -ad_bc / abs(ad_bc)
    re_bd = (b.conjugate() * d).real
    z_plus = lead * (a * c + re_bd + 1j * rad) / abs(ad_bc)
    z_minus = lead * (a * c + re_bd - 1j * rad) / abs(ad_bc)
    return z_plus / abs(z_plus), z_minus / abs(z_minus)


def parallelogram_multipliers(spec: ParallelogramSpec) -> tuple[float, float]:
    """Circle-map derivatives at z_+ and z_-; their product is 1."""
    _, _, _, _, im_bd = _fixed_point_pieces(spec)
    rad = math.sqrt(im_bd ** 2 - 1.0)
    h_plus = (2.0 * im_bd * (im_bd + rad) - 1.0) ** -2
    h_minus = (2.0 * im_bd * (im_bd - rad) - 1.0) ** -2
    return h_plus, h_minus


@dataclass(frozen=True)
class MinimumResult:
    value: float
    x: float
    y: float
    theta: float


def menzin_minimum_check(grid: int = 201, tol: float = 1e-8) -> MinimumResult:
    """Minimize sinh(x) sinh(y) sin(theta) subject to x y sin(theta) >= pi/4.

    sinh is increasing, so the minimum sits on the constraint boundary
    sin(theta) = pi/(4 x y); there the objective is
    (pi/4) (sinh x / x)(sinh y / y), and since sinh(t)/t increases the
    remaining constraint x y >= pi/4 is active too. That leaves a 1-D search
    along x y = pi/4 (coordinate descent zigzags on this curved valley
    without converging): coarse log grid over x, then golden-section
    refinement.
    """
    quarter_pi = math.pi / 4.0

    def boundary_objective(x: float) -> float:
        y = quarter_pi / x
        return quarter_pi * (math.sinh(x) / x) * (math.sinh(y) / y)

    xs = np.exp(np.linspace(math.log(0.05), math.log(6.0), grid))
    vals = [boundary_objective(float(x)) for x in xs]
    k = int(np.argmin(vals))
    lo = float(xs[max(0, k - 1)])
    hi = float(xs[min(len(xs) - 1, k + 1)])

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = boundary_objective(c), boundary_objective(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = boundary_objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = boundary_objective(d)
    x = 0.5 * (a + b)
    y = quarter_pi / x
    sin_theta = min(1.0, quarter_pi / (x * y))
    return MinimumResult(value=boundary_objective(x), x=x, y=y, theta=math.asin(sin_theta))


def circle_closed_tractrix(radius: float, ell: float) -> float:
    """Radius sqrt(R^2 - ell^2) of the closed tractrix of a circle of radius R."""
    if not (ell > 0.0 and math.isfinite(ell)):
        raise InputError("ell must be positive and finite")
    if radius <= ell:
        raise InputError(
            "no closed tractrix for R <= ell: at R = ell the attractor degenerates to the "
            "center (attracting from one side only); for R < ell tractrices are cusped")
    return math.sqrt(radius * radius - ell * ell)


@dataclass(frozen=True)
class ScanRow:
    region_id: str
    n_vertices: int
    area: float
    area_over_pi_ell2: float
    trace: float | None
    kind: str | None
    winding: int | None
    marginal_flag: bool
    error: str | None = None


MARGINAL_TRACE_TOL = 1e-3  # scan-level flag for rows near the parabolic boundary


def menzin_scan(regions: list[PlanarPath], ell: float, step: float | None = None,
                region_ids: list[str] | None = None,
                compute_winding: bool = True) -> list[ScanRow]:
    """Classify each region's holonomy; per-region failures do not stop the scan."""
    params = ConnectionParams(ell)
    if region_ids is None:
        region_ids = [f"region{i}" for i in range(len(regions))]
    rows = []
    for rid, region in zip(region_ids, regions):
        try:
            area = signed_area(region)
            hol = holonomy_polygon(region, 0, params)
            cls = hol.classification
            winding = None
            if compute_winding and cls.kind is HolonomyKind.HYPERBOLIC:
                winding = winding_number(region, 0, cmath.phase(cls.attracting),
                                         params, step)
            rows.append(ScanRow(
                region_id=rid, n_vertices=len(region), area=area,
                area_over_pi_ell2=area / (math.pi * ell ** 2),
                trace=cls.trace, kind=cls.kind.value, winding=winding,
                marginal_flag=abs(abs(cls.trace) - 2.0) < MARGINAL_TRACE_TOL))
        except Exception as exc:  # keep scanning, record the failure
            rows.append(ScanRow(region_id=rid, n_vertices=len(region),
                                area=math.nan, area_over_pi_ell2=math.nan,
                                trace=None, kind=None, winding=None,
                                marginal_flag=False, error=str(exc)))
    return rows


def family_from_config(config: dict) -> tuple[list[str], list[PlanarPath]]:
    """Build scan regions from a config mapping; reproducible bit for bit.

    Family entries:
      {"type": "squares",          "sides": [...]}
      {"type": "rectangles",       "widths": [...], "heights": [...]}
      {"type": "regular_polygons", "n": [...], "area": A}
      {"type": "ellipses",         "semi_axes": [[a, b], ...], "n": 256}
      {"type": "circles",          "radii": [...], "n": 256}
    """
    ids: list[str] = []
    paths: list[PlanarPath] = []
    for fam in config.get("families", []):
        kind = fam.get("type")
        if kind == "squares":
            for s in fam["sides"]:
                ids.append(f"square_{s:g}")
                paths.append(square_path(float(s)))
        elif kind == "rectangles":
            for w, h in zip(fam["widths"], fam["heights"]):
                ids.append(f"rect_{w:g}x{h:g}")
                paths.append(rectangle_path(float(w), float(h)))
        elif kind == "regular_polygons":
            for n in fam["n"]:
                ids.append(f"ngon_{n}")
                paths.append(regular_polygon_path(int(n), area=float(fam["area"])))
        elif kind == "ellipses":
            n = int(fam.get("n", 256))
            for a, b in fam["semi_axes"]:
                ids.append(f"ellipse_{a:g}x{b:g}")
                paths.append(ellipse_path(float(a), float(b), n=n))
        elif kind == "circles":
            n = int(fam.get("n", 256))
            for r in fam["radii"]:
                ids.append(f"circle_{r:g}")
                paths.append(circle_path(float(r), n=n))
        else:
            raise InputError(f"unknown family type: {kind!r}")
    return ids, paths
