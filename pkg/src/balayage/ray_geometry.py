"""Closed systems of rays with vertex at the origin.

A ray system S is the union of finitely many rays {t*e^{i*theta} : t >= 0}.
Its complement splits into open sectors ("complementary angles"); each sector
maps onto the upper half-plane by the power map

    w = (z * e^{-i*alpha}) ** (pi / (beta - alpha)),

with the branch chosen positive on the sector's lower edge.  All harmonic
measure and balayage computations reduce to the half-plane through this map.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

from .errors import BadInput, ZeroPoint

TWO_PI = 2.0 * math.pi

# On-ray classification tolerance, in radians.
ANGULAR_TOL = 1e-12


def normalize_angle(theta):
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod can land exactly on 2*pi after the correction
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class Ray:
    """Single ray from the origin at angle theta in [0, 2*pi)."""

    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta < TWO_PI):
            raise BadInput(f"ray angle must lie in [0, 2*pi), got {self.theta}")


@dataclass(frozen=True)
class Sector:
    """Open sector alpha < arg z < beta, aperture beta - alpha in (0, 2*pi].

    Angles are stored unnormalized (beta may exceed 2*pi) so the aperture is
    always beta - alpha with no wraparound branching.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha < self.beta <= self.alpha + TWO_PI):
            raise BadInput(
                f"sector needs alpha < beta <= alpha + 2*pi, got ({self.alpha}, {self.beta})"
            )

    @property
    def aperture(self):
        return self.beta - self.alpha

    @property
    def exponent(self):
        """Power-map exponent pi / (beta - alpha)."""
        return math.pi / self.aperture

    def contains(self, z, tol=ANGULAR_TOL):
        """True when z != 0 lies strictly inside the open sector."""
        if z == 0:
            return False
        phi = relative_angle(z, self.alpha)
        return tol < phi < self.aperture - tol


class RaySystem:
    """Finitely many rays from the origin, stored as sorted angles in [0, 2*pi)."""

    def __init__(self, thetas):
        ts = [normalize_angle(float(t)) for t in thetas]
        if not ts:
            raise BadInput("a ray system needs at least one ray")
        ts.sort()
        for a, b in zip(ts, ts[1:]):
            if b - a <= ANGULAR_TOL:
                raise BadInput("duplicate ray angles")
        self.thetas = tuple(ts)

    def __len__(self):
        return len(self.thetas)

    def __eq__(self, other):
        return isinstance(other, RaySystem) and self.thetas == other.thetas

    def __repr__(self):
        return f"RaySystem({list(self.thetas)})"

    def rays(self):
        return [Ray(t) for t in self.thetas]

    def to_json(self):
        return {"rays": list(self.thetas)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "rays" not in obj:
            raise BadInput('ray system JSON must be {"rays": [...]}')
        return cls(obj["rays"])


def relative_angle(z, alpha):
    """Angle of z measured from the direction alpha, reduced to [0, 2*pi)."""
    phi = math.fmod(cmath.phase(z) - alpha, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi -= TWO_PI
    return phi


def complementary_sectors(S):
    """The open sectors that make up the complement of the ray system.

    k rays give k sectors; a single ray gives one sector of aperture 2*pi.
    Sector i runs from ray i to the next ray counterclockwise.
    """
    ts = S.thetas
    k = len(ts)
    out = []
    for i in range(k):
        alpha = ts[i]
        beta = ts[(i + 1) % k] if i + 1 < k else ts[0] + TWO_PI
        if k == 1:
            beta = alpha + TWO_PI
        out.append(Sector(alpha, beta))
    return out


class OnSystem:
    """Classification result: the point lies on the ray system (or is the origin)."""

    def __repr__(self):
        return "OnSystem()"

    def __eq__(self, other):
        return isinstance(other, OnSystem)


@dataclass(frozen=True)
class InSector:
    """Classification result: the point lies in this complementary sector."""

    sector: Sector
    index: int


def classify_point(S, z, tol=ANGULAR_TOL):
    """OnSystem for z on a ray (or z = 0), else the containing sector."""
    z = complex(z)
    if z == 0:
        return OnSystem()
    phi = cmath.phase(z)
    for t in S.thetas:
        d = abs(math.fmod(phi - t, TWO_PI))
        if min(d, TWO_PI - d) <= tol:
            return OnSystem()
    sectors = complementary_sectors(S)
    for i, sec in enumerate(sectors):
        psi = relative_angle(z, sec.alpha)
        if psi < sec.aperture:
            return InSector(sec, i)
    # Floating point can push psi to exactly aperture on the last sector.
    return InSector(sectors[-1], len(sectors) - 1)


def reduce_to_halfplane(sec, z):
    """Power map of the closed sector onto the closed upper half-plane.

    The edge at alpha maps into the positive reals, the edge at beta into the
    negative reals, and |w| = |z| ** (pi / aperture).  Exact passthrough when
    the map is the identity (alpha = 0, aperture = pi), so half-plane cases
    stay bit-exact.
    """
    z = complex(z)
    if z == 0:
        raise ZeroPoint("power map undefined at the origin")
    p = sec.exponent
    if p == 1.0:
        if sec.alpha == 0.0:
            return z
        # quarter and half turns are exact in complex arithmetic; exp(-1j*pi)
        # carries a ~1e-16 imaginary residue that breaks signed cancellations
        if sec.alpha == math.pi:
            return -z
        if sec.alpha == 0.5 * math.pi:
            return complex(z.imag, -z.real)
        if sec.alpha == 1.5 * math.pi:
            return complex(-z.imag, z.real)
        return z * cmath.exp(-1j * sec.alpha)
    phi = relative_angle(z, sec.alpha)
    # Points on the beta edge come in with phi = aperture; points numerically
    # a hair below alpha wrap to ~2*pi and must be snapped back to the edge.
    if phi > sec.aperture:
        if phi >= TWO_PI - ANGULAR_TOL * 10:
            phi = 0.0
        elif phi <= sec.aperture + ANGULAR_TOL * 10:
            phi = sec.aperture
        else:
            raise BadInput(f"point not in the closed sector: {z}")
    rho = abs(z) ** p
    ang = p * phi
    if ang == 0.0:
        return complex(rho, 0.0)
    if abs(ang - math.pi) < 1e-13:
        return complex(-rho, 0.0)
    return rho * complex(math.cos(ang), math.sin(ang))
