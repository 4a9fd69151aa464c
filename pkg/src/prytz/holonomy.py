"""Plane displacements as su(1,1) generators, transports, and loop holonomy.

A displacement v maps to omega(v) with off-diagonal (v_x + i v_y)/(2 ell);
moving the tracer straight along v transports initial directions by
exp(-omega(v)). Composition order is the single most error-prone convention
here: later edges multiply on the LEFT, so a loop with edges v1, v2, ...
has holonomy exp(X_n) ... exp(X_1) with X_k = -omega(v_k).
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynamics import trace_loop
from .errors import InputError, NumericError
from .geom2d import PlanarPath, Point2, signed_area
from .su11 import (IDENTITY, HolonomyClass, HolonomyKind, SU11Element, Su11Algebra,
                   classify, compose, exp_algebra, mobius_point)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConnectionParams:
    """Rod length fixing the connection."""

    ell: float

    def __post_init__(self):
        if not (self.ell > 0.0 and math.isfinite(self.ell)):
            raise InputError("ell must be positive and finite")


@dataclass(frozen=True)
class LoopHolonomy:
    """Holonomy of a closed loop at a base vertex, with its classification.

    winding_prediction is the expected net rotation count when tracing from
    a fixed direction: sign of the enclosed area for hyperbolic holonomies
    (0 for balanced loops like figure-eights), None otherwise.
    """

    element: SU11Element
    base: Point2
    classification: HolonomyClass
    winding_prediction: int | None = None


def omega(v, params: ConnectionParams) -> Su11Algebra:
    """Connection form on a displacement: gamma = 0, beta = (v_x + i v_y)/(2 ell)."""
    vx, vy = float(v[0]), float(v[1])
    return Su11Algebra(0.0, complex(vx, vy) / (2.0 * params.ell))


def segment_transport(v, params: ConnectionParams) -> SU11Element:
    """Parallel transport along a straight segment: exp(-omega(v))."""
    return exp_algebra(-omega(v, params))


def _edge_transports(loop: PlanarPath, base_index: int, params: ConnectionParams):
    verts = loop.rolled(base_index).traversal()
    return [segment_transport(verts[i + 1] - verts[i], params)
            for i in range(len(verts) - 1)]


def _winding_prediction(loop: PlanarPath, cls: HolonomyClass, ell: float) -> int | None:
    if cls.kind is not HolonomyKind.HYPERBOLIC:
        return None
    area = signed_area(loop)
    scale = max(ell * ell, float(np.max(np.abs(loop.vertices))) ** 2)
    if abs(area) < 1e-9 * scale:
        return 0
    return 1 if area > 0 else -1


def holonomy_polygon(loop: PlanarPath, base_index: int,
                     params: ConnectionParams) -> LoopHolonomy:
    """Closed-form product of edge transports, later edges on the left."""
    if not loop.closed:
        raise InputError("holonomy requires a closed loop")
    h = IDENTITY
    for t in _edge_transports(loop, base_index, params):
        h = compose(t, h)
    cls = classify(h)
    base = Point2(*loop.rolled(base_index).vertices[0])
    return LoopHolonomy(element=h, base=base, classification=cls,
                        winding_prediction=_winding_prediction(loop, cls, params.ell))


def holonomy_curve(loop: PlanarPath, base_index: int, params: ConnectionParams,
                   step: float | None = None) -> LoopHolonomy:
    """RK4 integration of A' = -omega(gamma') A around the loop."""
    if not loop.closed:
        raise InputError("holonomy requires a closed loop")
    if step is None:
        step = params.ell / 200.0
    if not (step > 0.0 and math.isfinite(step)):
        raise InputError("step must be positive and finite")
    verts = np.ascontiguousarray(loop.rolled(base_index).traversal(), dtype=float)
    seglen = np.hypot(*np.diff(verts, axis=0).T)
    nsub = np.maximum(1, np.ceil(seglen / step - 1e-12)).astype(np.int64)
    a, b, drift = kernels.rk4_transport(verts, nsub, params.ell)
    logger.debug("transport renormalization drift (pre-projection defect): %.3e", drift)
    det = abs(a) ** 2 - abs(b) ** 2
    s = math.sqrt(det)
    h = SU11Element(a / s, b / s)
    cls = classify(h)
    base = Point2(*loop.rolled(base_index).vertices[0])
    return LoopHolonomy(element=h, base=base, classification=cls,
                        winding_prediction=_winding_prediction(loop, cls, params.ell))


def curvature_probe(at, eps: float, params: ConnectionParams) -> Su11Algebra:
    """First-order holonomy quotient (H_eps - I)/eps^2 for an eps-square loop.

    The skew projection onto su(1,1) is returned: gamma converges to
    1/(2 ell^2) with an O(eps^2) defect, while |beta| is an O(eps) remainder
    of the commutator expansion (it does not shrink like eps^2). The induced
    circle rotation rate per unit area is 2*gamma -> 1/ell^2.
    """
    if not (eps > 0.0 and math.isfinite(eps)):
        raise InputError("eps must be positive and finite")
    x0, y0 = float(at[0]), float(at[1])
    square = PlanarPath([(x0, y0), (x0 + eps, y0), (x0 + eps, y0 + eps), (x0, y0 + eps)],
                        closed=True)
    h = holonomy_polygon(square, 0, params).element
    e2 = eps * eps
    return Su11Algebra(gamma=(h.a - 1.0).imag / e2, beta=h.b / e2)


def figure_eight_holonomy(v, w, params: ConnectionParams) -> LoopHolonomy:
    """Holonomy of the bowtie 0, v, v+w, w, -w, -v-w, -v (oriented area zero).

    The composed product must match the closed form
    trace = 2 + 16 Im^2(conj(b) d) |a d + b c|^2 built from the single-edge
    transports exp(-omega(v)) = (a, b; ...) and exp(-omega(w)) = (c, d; ...).
    """
    v = (float(v[0]), float(v[1]))
    w = (float(w[0]), float(w[1]))
    cross = v[0] * w[1] - v[1] * w[0]
    scale = max(abs(v[0]), abs(v[1]), abs(w[0]), abs(w[1]))
    if abs(cross) < 1e-12 * scale * scale:
        warnings.warn("v and w are (nearly) dependent: figure-eight trace degenerates to 2")
    path = PlanarPath([(0.0, 0.0), v, (v[0] + w[0], v[1] + w[1]), w,
                       (-w[0], -w[1]), (-v[0] - w[0], -v[1] - w[1]), (-v[0], -v[1])],
                      closed=True, validate=False)
    hol = holonomy_polygon(path, 0, params)
    ev = segment_transport(v, params)
    ew = segment_transport(w, params)
    im_bd = (ev.b.conjugate() * ew.b).imag
    ad_bc = ev.a * ew.b + ev.b * ew.a
    expected = 2.0 + 16.0 * im_bd ** 2 * abs(ad_bc) ** 2
    if abs(hol.element.trace - expected) > 1e-9 * max(1.0, abs(expected)):
        raise NumericError("figure-eight trace disagrees with its closed form")
    return hol


def winding_number(loop: PlanarPath, base_index: int, theta_start: float,
                   params: ConnectionParams, step: float | None = None,
                   fixed_tol: float = 1e-6) -> int:
    """Net rotation count of a lap started at a holonomy fixed direction.

    theta_start must satisfy H . e^{i theta} = e^{i theta}; only then does
    the rod direction close up over the lap and the count is well defined.
    """
    h = holonomy_polygon(loop, base_index, params).element
    z = cmath.exp(1j * theta_start)
    if abs(mobius_point(h, z) - z) > fixed_tol:
        raise InputError("theta_start is not a fixed direction of the loop holonomy")
    tr = trace_loop(loop, base_index, theta_start, params.ell, step)
    return int(round(tr.delta_theta / (2.0 * math.pi)))


@dataclass(frozen=True)
class BalancePoint:
    """Disk center of an elliptic holonomy and its plane pre-image.

    Starting the trace at f_point (segment in, loop, segment back) conjugates
    the holonomy to a pure rotation about the disk origin.
    """

    z_center: complex
    f_point: Point2


def balance_point(h: LoopHolonomy, params: ConnectionParams) -> BalancePoint:
    """Translate an elliptic holonomy's disk center back to the plane.

    The disk translation carrying z to 0 is exp(-omega(u)) with
    u = 2 ell * artanh(|z|) * z/|z|, so f_point = base + u.
    """
    cls = h.classification
    if cls.kind is HolonomyKind.IDENTITY:
        return BalancePoint(0.0 + 0.0j, h.base)
    if cls.kind is not HolonomyKind.ELLIPTIC:
        raise InputError(f"balance point needs an elliptic holonomy, got {cls.kind.value}")
    z = cls.center
    r = abs(z)
    if r == 0.0:
        return BalancePoint(z, h.base)
    u = 2.0 * params.ell * math.atanh(r) * (z / r)
    return BalancePoint(z, Point2(h.base.x + u.real, h.base.y + u.imag))
