"""Planar primitives: points, sampled paths, polygons, and region moments.

Orientation convention throughout: counterclockwise traversal encloses
positive area. Regions are polygons; smooth boundaries enter as fine
polygonal approximations whose resolution the caller controls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Point2:
    """A point (or displacement) in the plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError(f"non-finite point ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)


class PlanarPath:
    """A piecewise-linear sampled curve.

    ``vertices`` is an (n, 2) float array. A closed path is traversed
    first -> last -> first; the closing edge is implied, never stored.
    """

    __slots__ = ("vertices", "closed")

    def __init__(self, vertices, closed: bool = False, validate: bool = True):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InputError(f"vertices must be (n, 2), got shape {v.shape}")
        if validate:
            if v.shape[0] < 2:
                raise InputError("path needs at least 2 vertices")
            if not np.all(np.isfinite(v)):
                raise InputError("path contains non-finite vertices")
            d = np.diff(v, axis=0)
            if np.any(np.all(d == 0.0, axis=1)):
                raise InputError("consecutive vertices must be distinct")
            if closed and np.all(v[-1] == v[0]):
                raise InputError(
                    "closed path must not repeat the start vertex; the closing edge is implied"
                )
        self.vertices = v
        self.closed = bool(closed)

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def traversal(self) -> np.ndarray:
        """Vertex sequence actually walked (closing edge made explicit)."""
        if self.closed:
            return np.vstack([self.vertices, self.vertices[:1]])
        return self.vertices

    def edges(self) -> np.ndarray:
        return np.diff(self.traversal(), axis=0)

    def perimeter(self) -> float:
        return float(np.sum(np.hypot(*np.diff(self.traversal(), axis=0).T)))

    def reversed(self) -> "PlanarPath":
        return PlanarPath(self.vertices[::-1].copy(), self.closed, validate=False)

    def rolled(self, base_index: int) -> "PlanarPath":
        """Cyclic re-index of a closed path so traversal starts at base_index."""
        if not self.closed:
            raise InputError("rolled() requires a closed path")
        n = len(self)
        k = int(base_index) % n
        return PlanarPath(np.roll(self.vertices, -k, axis=0), True, validate=False)

    def translated(self, dx: float, dy: float) -> "PlanarPath":
        return PlanarPath(self.vertices + [dx, dy], self.closed, validate=False)

    def rotated(self, angle: float, about=(0.0, 0.0)) -> "PlanarPath":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        about = np.asarray(about, dtype=float)
        return PlanarPath((self.vertices - about) @ rot.T + about, self.closed, validate=False)

    def scaled(self, factor: float, about=(0.0, 0.0)) -> "PlanarPath":
        about = np.asarray(about, dtype=float)
        return PlanarPath((self.vertices - about) * factor + about, self.closed, validate=False)


@dataclass(frozen=True)
class RegionMoments:
    """Polygon moments about a base point, the inputs of the Hill estimate.

    ``second_moment`` is the second area moment (moment of inertia) about
    the base; ``mean_square_radius`` is second_moment / area.
    """

    area: float
    centroid: Point2
    second_moment: float
    mean_square_radius: float


def _require_closed(path: PlanarPath, op: str) -> None:
    if not path.closed:
        raise InputError(f"{op} requires a closed path")


def signed_area(path: PlanarPath) -> float:
    """Shoelace area; positive for counterclockwise simple polygons."""
    _require_closed(path, "signed_area")
    x, y = path.vertices.T
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def centroid(path: PlanarPath) -> Point2:
    """Area centroid of a simple closed polygon."""
    _require_closed(path, "centroid")
    a = signed_area(path)
    if a == 0.0:
        raise InputError("centroid undefined for zero-area polygon")
    x, y = path.vertices.T
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    cx = float(np.sum((x + xn) * cross)) / (6.0 * a)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * a)
    return Point2(cx, cy)


def second_moment_about(path: PlanarPath, base: Point2) -> float:
    """Integral of |p - base|^2 over the enclosed region.

    Exact per-edge Green's-theorem quadrature (the integrand restricted to
    an edge is a cubic polynomial, so the closed form below is exact).
    """
    _require_closed(path, "second_moment_about")
    if signed_area(path) == 0.0:
        raise InputError("second moment undefined for zero-area polygon")
    v = path.vertices - [base.x, base.y]
    x, y = v.T
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    quad = x * x + x * xn + xn * xn + y * y + y * yn + yn * yn
    return float(np.sum(cross * quad)) / 12.0


def moments_about(path: PlanarPath, base: Point2) -> RegionMoments:
    """Bundle area, centroid, and second moment about ``base``."""
    a = signed_area(path)
    if a == 0.0:
        raise InputError("moments undefined for zero-area polygon")
    c = centroid(path)
    i_b = second_moment_about(path, base)
    return RegionMoments(area=a, centroid=c, second_moment=i_b, mean_square_radius=i_b / a)


def resample(path: PlanarPath, max_edge: float) -> PlanarPath:
    """Insert collinear subdivision points so every edge is <= max_edge.

    Geometry is unchanged; a path that is already fine enough comes back
    vertex-identical.
    """
    if not max_edge > 0.0:
        raise InputError("max_edge must be positive")
    verts = path.traversal()
    seglens = np.hypot(*np.diff(verts, axis=0).T)
    if np.all(seglens <= max_edge):
        return PlanarPath(path.vertices.copy(), path.closed, validate=False)
    out = [verts[0]]
    for i, length in enumerate(seglens):
        n = max(1, int(math.ceil(length / max_edge - 1e-12)))
        a, b = verts[i], verts[i + 1]
        for k in range(1, n + 1):
            out.append(a + (b - a) * (k / n))
    pts = np.array(out)
    if path.closed:
        pts = pts[:-1]
    return PlanarPath(pts, path.closed, validate=False)


def is_simple(path: PlanarPath) -> bool:
    """O(n^2) segment-intersection check; optional validation helper."""
    verts = path.traversal()
    segs = [(verts[i], verts[i + 1]) for i in range(len(verts) - 1)]
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (path.closed and i == 0 and j == n - 1)
            if adjacent:
                continue
            if _segments_cross(*segs[i], *segs[j]):
                return False
    return True


def _segments_cross(p1, p2, q1, q2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


# ---------------------------------------------------------------------------
# Parameterized shape constructors (reproducible scan families, tests, CLI)

def square_path(side: float, center=(0.0, 0.0)) -> PlanarPath:
    return rectangle_path(side, side, center)


def rectangle_path(width: float, height: float, center=(0.0, 0.0)) -> PlanarPath:
    if width <= 0 or height <= 0:
        raise InputError("rectangle needs positive side lengths")
    cx, cy = center
    hw, hh = width / 2.0, height / 2.0
    verts = [(cx - hw, cy - hh), (cx + hw, cy - hh), (cx + hw, cy + hh), (cx - hw, cy + hh)]
    return PlanarPath(verts, closed=True)


def regular_polygon_path(n: int, radius: float | None = None, area: float | None = None,
                         center=(0.0, 0.0), phase: float = 0.0) -> PlanarPath:
    """Regular n-gon, sized by circumradius or by enclosed area."""
    if n < 3:
        raise InputError("regular polygon needs n >= 3")
    if (radius is None) == (area is None):
        raise InputError("give exactly one of radius or area")
    if radius is None:
        # area of a regular n-gon with circumradius R is (n/2) R^2 sin(2 pi / n)
        radius = math.sqrt(2.0 * area / (n * math.sin(2.0 * math.pi / n)))
    ang = phase + 2.0 * math.pi * np.arange(n) / n
    verts = np.column_stack([center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)])
    return PlanarPath(verts, closed=True)


def ellipse_path(a: float, b: float, n: int = 256, center=(0.0, 0.0)) -> PlanarPath:
    """Ellipse with semi-axes a, b approximated by an inscribed n-gon."""
    if a <= 0 or b <= 0:
        raise InputError("ellipse needs positive semi-axes")
    ang = 2.0 * math.pi * np.arange(n) / n
    verts = np.column_stack([center[0] + a * np.cos(ang), center[1] + b * np.sin(ang)])
    return PlanarPath(verts, closed=True)


def circle_path(radius: float, n: int = 256, center=(0.0, 0.0)) -> PlanarPath:
    return ellipse_path(radius, radius, n=n, center=center)
