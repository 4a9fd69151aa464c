"""The group SU(1,1), its Lie algebra, and the Mobius action on circle and disk.

Elements are stored as the pair (a, b) of the matrix

    [ a        b ]
    [ conj(b)  conj(a) ]        with |a|^2 - |b|^2 = 1,

acting on the unit circle / Poincare disk by z -> (a z + b) / (conj(b) z + conj(a)).
The trace 2*Re(a) is always real; |trace| against 2 separates hyperbolic,
parabolic, and elliptic elements.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError

DET_TOL = 1e-9         # tolerance on |a|^2 - |b|^2 = 1 at construction
PARABOLIC_TOL = 1e-8   # | |trace| - 2 | below this classifies as parabolic


@dataclass(frozen=True)
class SU11Element:
    a: complex
    b: complex

    def __post_init__(self):
        d = self.det_defect()
        # scale by the squared norm: for large hyperbolic elements the
        # difference |a|^2 - |b|^2 cannot be represented better than that
        scale = max(1.0, abs(self.a) ** 2 + abs(self.b) ** 2)
        if not math.isfinite(d) or d > DET_TOL * scale:
            raise InputError(f"not in SU(1,1): | |a|^2 - |b|^2 - 1 | = {d:.3e}")

    def det_defect(self) -> float:
        return abs(abs(self.a) ** 2 - abs(self.b) ** 2 - 1.0)

    @property
    def trace(self) -> float:
        return 2.0 * self.a.real

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])

    def inverse(self) -> "SU11Element":
        return SU11Element(self.a.conjugate(), -self.b)


IDENTITY = SU11Element(1.0 + 0.0j, 0.0 + 0.0j)


@dataclass(frozen=True)
class Su11Algebra:
    """Element (i*gamma, beta; conj(beta), -i*gamma) of su(1,1)."""

    gamma: float
    beta: complex

    def matrix(self) -> np.ndarray:
        return np.array([[1j * self.gamma, self.beta],
                         [self.beta.conjugate(), -1j * self.gamma]])

    def __neg__(self) -> "Su11Algebra":
        return Su11Algebra(-self.gamma, -self.beta)

    def __add__(self, other: "Su11Algebra") -> "Su11Algebra":
        return Su11Algebra(self.gamma + other.gamma, self.beta + other.beta)

    def scaled(self, t: float) -> "Su11Algebra":
        return Su11Algebra(t * self.gamma, t * self.beta)


class HolonomyKind(str, Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"
    IDENTITY = "Identity"


@dataclass(frozen=True)
class HolonomyClass:
    """Fixed-point classification of an SU(1,1) element.

    Hyperbolic: two circle fixed points, attracting/repelling, with their
    positive real multipliers. Parabolic: one semi-attracting circle fixed
    point. Elliptic: a disk center and the rotation angle about it.
    """

    kind: HolonomyKind
    trace: float
    attracting: complex | None = None
    repelling: complex | None = None
    multiplier_attracting: float | None = None
    multiplier_repelling: float | None = None
    fixed_point: complex | None = None        # parabolic
    center: complex | None = None             # elliptic, |center| < 1
    rotation_angle: float | None = None       # elliptic

    def fixed_points(self) -> list[complex]:
        if self.kind is HolonomyKind.HYPERBOLIC:
            return [self.attracting, self.repelling]
        if self.kind is HolonomyKind.PARABOLIC:
            return [self.fixed_point]
        if self.kind is HolonomyKind.ELLIPTIC:
            return [self.center]
        return []


def compose(m: SU11Element, n: SU11Element) -> SU11Element:
    """Matrix product m @ n, renormalized to restore the determinant."""
    a = m.a * n.a + m.b * n.b.conjugate()
    b = m.a * n.b + m.b * n.a.conjugate()
    return _renormalized(a, b)


def _renormalized(a: complex, b: complex) -> SU11Element:
    det = abs(a) ** 2 - abs(b) ** 2
    if not (det > 0.0 and math.isfinite(det)):
        raise InputError(f"cannot renormalize: |a|^2 - |b|^2 = {det}")
    s = math.sqrt(det)
    return SU11Element(a / s, b / s)


def exp_algebra(x: Su11Algebra) -> SU11Element:
    """Closed-form exponential, using x^2 = (|beta|^2 - gamma^2) * I.

    disc > 0 gives cosh/sinh coefficients, disc < 0 gives cos/sin; near the
    degenerate boundary a short power series keeps both branches smooth.
    """
    disc = abs(x.beta) ** 2 - x.gamma ** 2
    if disc > 1e-9:
        r = math.sqrt(disc)
        c, s = math.cosh(r), math.sinh(r) / r
    elif disc < -1e-9:
        r = math.sqrt(-disc)
        c, s = math.cos(r), math.sin(r) / r
    else:
        c = 1.0 + disc / 2.0 + disc * disc / 24.0
        s = 1.0 + disc / 6.0 + disc * disc / 120.0
    return SU11Element(c + 1j * x.gamma * s, s * x.beta)


def mobius_point(m: SU11Element, z: complex) -> complex:
    """Mobius action on an arbitrary point of the closed disk."""
    return (m.a * z + m.b) / (m.b.conjugate() * z + m.a.conjugate())


def mobius_apply(m: SU11Element, z: complex) -> complex:
    """Action on the unit circle; the result is renormalized to |z| = 1."""
    w = mobius_point(m, z)
    return w / abs(w)


def multiplier(m: SU11Element, z: complex, atol: float = 1e-6) -> float:
    """|d(m.z)/dz| at a circle fixed point: 1 / |conj(b) z + conj(a)|^2."""
    if abs(mobius_point(m, z) - z) > atol:
        raise InputError("z is not a fixed point of m")
    return 1.0 / abs(m.b.conjugate() * z + m.a.conjugate()) ** 2


def classify(m: SU11Element, parabolic_tol: float = PARABOLIC_TOL) -> HolonomyClass:
    """Solve conj(b) z^2 + (conj(a) - a) z - b = 0 and sort the fixed points.

    The two roots multiply to -b/conj(b) (unit modulus), so the second root
    comes from the product rather than the cancellation-prone quadratic
    formula. trace = 2 Re(a) is real by construction.
    """
    tr = m.trace
    near_identity = abs(m.a - 1.0) < parabolic_tol and abs(m.b) < parabolic_tol
    near_neg_identity = abs(m.a + 1.0) < parabolic_tol and abs(m.b) < parabolic_tol
    if near_identity or near_neg_identity:
        return HolonomyClass(kind=HolonomyKind.IDENTITY, trace=tr)

    if abs(abs(tr) - 2.0) <= parabolic_tol:
        # double root i*Im(a)/conj(b); unit modulus because Re(a)^2 ~ 1
        z = 1j * m.a.imag / m.b.conjugate()
        z /= abs(z)
        return HolonomyClass(kind=HolonomyKind.PARABOLIC, trace=tr, fixed_point=z)

    disc = tr * tr - 4.0
    if disc > 0.0:
        root = math.sqrt(disc)
        z1 = (2j * m.a.imag + root) / (2.0 * m.b.conjugate())
        z2 = (-m.b / m.b.conjugate()) / z1
        z1 /= abs(z1)
        z2 /= abs(z2)
        m1 = 1.0 / abs(m.b.conjugate() * z1 + m.a.conjugate()) ** 2
        m2 = 1.0 / abs(m.b.conjugate() * z2 + m.a.conjugate()) ** 2
        if m1 > m2:
            z1, z2, m1, m2 = z2, z1, m2, m1
        return HolonomyClass(kind=HolonomyKind.HYPERBOLIC, trace=tr,
                             attracting=z1, repelling=z2,
                             multiplier_attracting=m1, multiplier_repelling=m2)

    # elliptic: roots are inversive partners z and 1/conj(z); keep |z| < 1
    root = 1j * math.sqrt(-disc)
    z1 = (2j * m.a.imag + root) / (2.0 * m.b.conjugate()) if m.b != 0 else 0.0 + 0.0j
    if m.b != 0 and abs(z1) > 1.0:
        z1 = 1.0 / z1.conjugate()
    rot = cmath.phase(1.0 / (m.b.conjugate() * z1 + m.a.conjugate()) ** 2)
    return HolonomyClass(kind=HolonomyKind.ELLIPTIC, trace=tr, center=z1, rotation_angle=rot)


def develop_to_disk(transports: list[SU11Element]) -> list[complex]:
    """Orbit of the origin under partial products (later transports on the left).

    Returns [0, M1.0, (M2 M1).0, ...]; hyperbolic isometries keep every
    point strictly inside the disk.
    """
    points = [0.0 + 0.0j]
    acc = IDENTITY
    for m in transports:
        acc = compose(m, acc)
        points.append(mobius_point(acc, 0.0 + 0.0j))
    return points
