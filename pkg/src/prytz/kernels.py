"""Hot inner loops: constrained-angle RK4 tracing and SU(1,1) ODE transport.

Both kernels are compiled with numba's @njit when it is importable. Setting
the environment variable PRYTZ_NO_NUMBA to a non-empty value other than
"0"/"false" selects the pure-Python/numpy fallback instead; the fallback runs
the identical code uncompiled, so results match bit for bit. The *_py names
always point at the uncompiled versions (used by benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import math
import os


def _numba_enabled() -> bool:
    flag = os.environ.get("PRYTZ_NO_NUMBA", "").strip().lower()
    if flag not in ("", "0", "false", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()


def _maybe_jit(fn):
    if not NUMBA_ENABLED:
        return fn
    from numba import njit

    return njit(cache=True)(fn)


def _rk4_trace_impl(verts, nsub, theta0, ell, xs, ys, thetas, svals, seg_ux, seg_uy):
    """Integrate ell * dtheta/ds = sin(theta - phi) along a polyline.

    verts: (m, 2) traversal vertices; nsub[e] substeps on edge e. Output
    arrays hold one sample per substep boundary (nsub.sum() + 1 samples).
    theta is the continuous lift; sigma_T accumulates the tracer-normal
    displacement with the same RK4 stage quadrature, so the per-step
    constraint defect |d sigma_T - ell * d theta| stays at roundoff.

    Returns (sigma_T, max_defect).
    """
    theta = theta0
    sigma_t = 0.0
    defect = 0.0
    s = 0.0
    xs[0] = verts[0, 0]
    ys[0] = verts[0, 1]
    thetas[0] = theta
    svals[0] = 0.0
    k = 0
    for e in range(verts.shape[0] - 1):
        x0 = verts[e, 0]
        y0 = verts[e, 1]
        dx = verts[e + 1, 0] - x0
        dy = verts[e + 1, 1] - y0
        length = math.hypot(dx, dy)
        ux = dx / length
        uy = dy / length
        n = nsub[e]
        h = length / n
        for i in range(n):
            g1 = math.sin(theta) * ux - math.cos(theta) * uy
            t2 = theta + 0.5 * h * g1 / ell
            g2 = math.sin(t2) * ux - math.cos(t2) * uy
            t3 = theta + 0.5 * h * g2 / ell
            g3 = math.sin(t3) * ux - math.cos(t3) * uy
            t4 = theta + h * g3 / ell
            g4 = math.sin(t4) * ux - math.cos(t4) * uy
            quad = h * (g1 + 2.0 * g2 + 2.0 * g3 + g4) / 6.0
            dtheta = quad / ell
            theta += dtheta
            sigma_t += quad
            d = abs(quad - ell * dtheta)
            if d > defect:
                defect = d
            s += h
            frac = (i + 1.0) / n
            seg_ux[k] = ux
            seg_uy[k] = uy
            k += 1
            xs[k] = x0 + dx * frac
            ys[k] = y0 + dy * frac
            thetas[k] = theta
            svals[k] = s
    return sigma_t, defect


def _rk4_transport_impl(verts, nsub, ell):
    """Right-invariant transport A' = -omega(gamma') A along a polyline.

    State is the (a, b) pair of an SU(1,1) matrix; on an edge with unit
    direction u the generator is constant with a' = -beta * conj(b),
    b' = -beta * conj(a), beta = (ux + i uy) / (2 ell). Renormalized every
    step; returns (a, b, max renormalization drift).
    """
    a = 1.0 + 0.0j
    b = 0.0 + 0.0j
    drift = 0.0
    for e in range(verts.shape[0] - 1):
        dx = verts[e + 1, 0] - verts[e, 0]
        dy = verts[e + 1, 1] - verts[e, 1]
        length = math.hypot(dx, dy)
        beta = complex(dx / length, dy / length) / (2.0 * ell)
        n = nsub[e]
        h = length / n
        for _ in range(n):
            k1a = -beta * b.conjugate()
            k1b = -beta * a.conjugate()
            a2 = a + 0.5 * h * k1a
            b2 = b + 0.5 * h * k1b
            k2a = -beta * b2.conjugate()
            k2b = -beta * a2.conjugate()
            a3 = a + 0.5 * h * k2a
            b3 = b + 0.5 * h * k2b
            k3a = -beta * b3.conjugate()
            k3b = -beta * a3.conjugate()
            a4 = a + h * k3a
            b4 = b + h * k3b
            k4a = -beta * b4.conjugate()
            k4b = -beta * a4.conjugate()
            a = a + h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
            b = b + h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
            nrm = math.sqrt(abs(a) ** 2 - abs(b) ** 2)
            d = abs(nrm - 1.0)
            if d > drift:
                drift = d
            a /= nrm
            b /= nrm
    return a, b, drift


rk4_trace_py = _rk4_trace_impl
rk4_transport_py = _rk4_transport_impl

rk4_trace = _maybe_jit(_rk4_trace_impl)
rk4_transport = _maybe_jit(_rk4_transport_impl)
