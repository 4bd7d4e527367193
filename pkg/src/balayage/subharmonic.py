"""Genus-q kernels, canonical potentials, circle means, class-A functionals,
the half-disk boundary identity, and sweeping a potential onto a ray system.

The kernel of genus q >= 0 is log|1 - z/zeta| plus the first q real power
corrections; genus -1 is the raw logarithm.  A genus schedule assigns a genus
per radius annulus (always -1 on [0,1)).  Potentials take the explicit bottom
value at positive-mass atoms rather than a float sentinel.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

from scipy.integrate import IntegrationWarning, quad


def _quiet_quad(*args, **kwargs):
    """quad with convergence warnings silenced; callers check the error estimate."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(*args, **kwargs)

from .errors import (
    AtomOnCircle,
    BadInput,
    CoincidentPoints,
    QuadratureFailure,
    TailTooLarge,
    ZeroCenter,
)
from .charges import AtomicCharge, CheckResult
from .harmonic_measure import poisson_kernel
from .ray_geometry import OnSystem, classify_point, reduce_to_halfplane


class Bottom:
    """Explicit -infinity for potentials: absorbing under +, below every real."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Bottom"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return not isinstance(other, Bottom)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, Bottom)


BOTTOM = Bottom()


def is_bottom(x):
    return isinstance(x, Bottom)


# ---------------------------------------------------------------------------
# Kernels


def kernel_Kq(zeta, z, q):
    """Genus-q kernel: log|zeta - z| for q = -1, else
    log|1 - z/zeta| + sum_{j<=q} Re((z/zeta)^j)/j."""
    zeta = complex(zeta)
    z = complex(z)
    if not (isinstance(q, int) and q >= -1):
        raise BadInput(f"genus must be an integer >= -1, got {q}")
    if zeta == z:
        raise CoincidentPoints(f"kernel is singular at zeta = z = {z}")
    if q == -1:
        return math.log(abs(zeta - z))
    if zeta == 0:
        raise ZeroCenter("genus >= 0 kernel needs zeta != 0")
    w = z / zeta
    val = math.log(abs(1.0 - w))
    pw = 1.0 + 0.0j
    for j in range(1, q + 1):
        pw *= w
        val += pw.real / j
    return val


def kernel_Kq_radial_derivative(z, t, q):
    """d/dt of kernel_Kq(t, z, q) for t > 0: Re(z^{q+1} / (t^{q+1} (t - z)))."""
    if t <= 0.0:
        raise BadInput(f"need t > 0, got {t}")
    if not (isinstance(q, int) and q >= 0):
        raise BadInput(f"need integer genus >= 0, got {q}")
    z = complex(z)
    if z == t:
        raise CoincidentPoints(f"derivative is singular at t = z = {t}")
    return ((z / t) ** (q + 1) / (t - z)).real


# ---------------------------------------------------------------------------
# Genus schedules and canonical potentials


@dataclass(frozen=True)
class GenusSchedule:
    """Right-continuous genus step function: genus genera[n] on [radii[n], radii[n+1])."""

    radii: tuple
    genera: tuple

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        genera = tuple(int(q) for q in self.genera)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "genera", genera)
        if len(radii) != len(genera) or not radii:
            raise BadInput("radii and genera must pair up, nonempty")
        if radii[0] != 0.0:
            raise BadInput("schedule must start at radius 0")
        if genera[0] != -1:
            raise BadInput("genus must be -1 on [0,1)")
        if len(radii) > 1 and radii[1] < 1.0:
            raise BadInput("second schedule radius must be >= 1")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise BadInput("schedule radii must increase")
        if any(q2 < q1 for q1, q2 in zip(genera, genera[1:])):
            raise BadInput("genera must not decrease")
        if any(q < -1 for q in genera):
            raise BadInput("genera must be >= -1")

    def genus_at(self, t):
        if t < 0.0:
            raise BadInput(f"need t >= 0, got {t}")
        g = self.genera[0]
        for r, q in zip(self.radii, self.genera):
            if r <= t:
                g = q
            else:
                break
        return g

    def convergence_sum(self, nu, x0):
        """Exact sum of |m| (x0/|zeta|)^{q(|zeta|)+1} over atoms off the origin."""
        total = 0.0
        for zch, m in nu.atoms:
            az = abs(zch)
            if az == 0.0:
                continue
            total += abs(m) * (x0 / az) ** (self.genus_at(az) + 1)
        return total

    def to_json(self):
        return {"radii": list(self.radii), "genera": list(self.genera)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["radii"]), tuple(data["genera"]))


@dataclass
class CanonicalPotential:
    """Finite-sum potential of an atomic Riesz charge, genus fixed or scheduled,
    plus an optional harmonic polynomial Re(sum c_j z^j)."""

    charge: AtomicCharge
    genus: int | None = None
    schedule: GenusSchedule | None = None
    harmonic_coeffs: list = field(default_factory=list)

    def __post_init__(self):
        if (self.genus is None) == (self.schedule is None):
            raise BadInput("give exactly one of genus or schedule")

    def genus_for(self, zeta):
        return self.genus if self.genus is not None else self.schedule.genus_at(abs(zeta))

    def harmonic_part(self, z):
        if not self.harmonic_coeffs:
            return 0.0
        return sum(c * z ** j for j, c in enumerate(self.harmonic_coeffs)).real


def potential_eval(P, z):
    """Value of the canonical potential at z; the explicit bottom at
    positive-mass atoms, +inf at negative-mass atoms."""
    z = complex(z)
    total = 0.0
    for zeta, m in P.charge.atoms:
        if zeta == z:
            return BOTTOM if m > 0.0 else math.inf
        total += m * kernel_Kq(zeta, z, P.genus_for(zeta))
    return total + P.harmonic_part(z)


# ---------------------------------------------------------------------------
# Circle means


_JITTER = 0.5 * (math.sqrt(5.0) - 1.0)  # irrational phase offset, fixed


def circle_mean(v, r, n_nodes=64, tol=1e-8, max_nodes=1 << 19):
    """Mean of v over the circle |z| = r by the periodic trapezoid rule,
    doubling nodes until two refinements agree within tol.  Nodes carry a
    fixed irrational phase jitter so atoms at rational angles are missed."""
    if r <= 0.0:
        raise BadInput(f"need r > 0, got {r}")
    n = max(8, int(n_nodes))
    prev = None
    while n <= max_nodes:
        h = 2.0 * math.pi / n
        vals = []
        for k in range(n):
            th = (k + _JITTER) * h
            val = v(cmath.rect(r, th))
            if is_bottom(val):
                raise QuadratureFailure(
                    f"evaluation hit an atom on |z| = {r} despite jitter")
            vals.append(val)
        cur = math.fsum(vals) / n
        if prev is not None and abs(cur - prev) <= tol:
            return cur
        prev = cur
        n *= 2
    raise QuadratureFailure(f"circle mean did not stabilize to {tol} by {max_nodes} nodes")


# ---------------------------------------------------------------------------
# Class-A functionals on a sector


@dataclass
class ClassAResult:
    A: float
    B: float
    J: float
    A_via_J: float
    A_via_double: float

    @property
    def residual_J(self):
        return abs(self.A - self.A_via_J)

    @property
    def residual_double(self):
        return abs(self.A - self.A_via_double)


def class_A_functionals(v, alpha, beta, r0, r, quad_tol=1e-10):
    """The three edge/arc functionals of a sector (alpha, beta) at radii (r0, r),
    with the two alternative routes to A as consistency data.

    A: weighted edge integral with the inner/outer power weight
    B: arc integral against the aperture sine
    J: plain edge integral against t^{-p-1}, p = pi/(beta - alpha)
    """
    if not (0.0 < r0 < r):
        raise BadInput(f"need 0 < r0 < r, got ({r0}, {r})")
    gamma = beta - alpha
    if not (0.0 < gamma <= 2.0 * math.pi):
        raise BadInput(f"need aperture in (0, 2*pi], got {gamma}")
    p = math.pi / gamma

    def edges(t):
        return v(cmath.rect(t, alpha)) + v(cmath.rect(t, beta))

    def safe_quad(fn, lo, hi):
        val, err = quad(fn, lo, hi, epsabs=quad_tol, epsrel=1e-10, limit=400)
        if err > 1e-6:
            raise QuadratureFailure(f"functional quadrature error {err:.2e}")
        return val

    J = safe_quad(lambda t: edges(t) / t ** (p + 1.0), r0, r)
    A = 0.5 / gamma * safe_quad(
        lambda t: (t ** (-p) - t ** p / r ** (2.0 * p)) * edges(t) / t, r0, r)
    B = safe_quad(lambda th: v(cmath.rect(r, th)) * math.sin(p * (th - alpha)),
                  alpha, beta) / (gamma * r ** p)
    # Route 2: split off the outer-weight part of A using J
    A_via_J = 0.5 / gamma * (J - safe_quad(
        lambda t: edges(t) * t ** (p - 1.0), r0, r) / r ** (2.0 * p))
    # Route 3: nested integral of J over the window
    inner = lambda t: safe_quad(lambda s: edges(s) / s ** (p + 1.0), r0, t) if t > r0 else 0.0
    A_via_double = (math.pi / (gamma * gamma * r ** (2.0 * p))) * safe_quad(
        lambda t: inner(t) * t ** (2.0 * p - 1.0), r0, r)
    return ClassAResult(A=A, B=B, J=J, A_via_J=A_via_J, A_via_double=A_via_double)


# ---------------------------------------------------------------------------
# Half-disk boundary identity


def carleman_check(nu, v, r0, r, tol=1e-6, quad_tol=1e-10):
    """Exact atom sums against the boundary quadratures for the upper half-disk.

    Left: sum over atoms in r0 < |z| <= r of m * Im(1/conj z - z/r^2), plus
    (1/r0^2 - 1/r^2) * sum over |z| <= r0 of m * Im z.  Right: the sector
    functionals A + B for (0, pi) plus the two inner-radius corrections.
    """
    if not (0.0 < r0 < r):
        raise BadInput(f"need 0 < r0 < r, got ({r0}, {r})")
    for z, _ in nu.atoms:
        if abs(abs(z) - r0) <= 1e-13 * max(1.0, r0) or abs(abs(z) - r) <= 1e-13 * r:
            raise AtomOnCircle(f"atom at |z| = {abs(z)} sits on an integration circle")

    lhs = 0.0
    inner = 0.0
    for z, m in nu.atoms:
        az = abs(z)
        if r0 < az <= r:
            lhs += m * ((1.0 / z.conjugate()).imag - (z / r ** 2).imag)
        elif 0.0 < az < r0:
            inner += m * z.imag
    lhs += (1.0 / r0 ** 2 - 1.0 / r ** 2) * inner

    res = class_A_functionals(v, 0.0, math.pi, r0, r, quad_tol=quad_tol)
    # atoms near the contours make the integrands peaked; their projections
    # guide the subdivision
    diam_pts = sorted({abs(z.real) for z, _ in nu.atoms
                       if abs(z.imag) < r0 and 0.0 < abs(z.real) < r0})
    arc_pts = sorted({cmath.phase(z) for z, _ in nu.atoms
                      if r0 / 4.0 < abs(z) < 4.0 * r0
                      and 0.0 < cmath.phase(z) < math.pi})
    diam, err1 = quad(lambda t: v(-t) + v(t), 0.0, r0, epsabs=quad_tol,
                      limit=400, points=diam_pts or None)
    arc, err2 = quad(lambda th: v(cmath.rect(r0, th)) * math.sin(th), 0.0,
                     math.pi, epsabs=quad_tol, limit=400,
                     points=arc_pts or None)
    if max(err1, err2) > 1e-7:
        raise QuadratureFailure("inner correction quadrature did not converge")
    # The diameter correction carries the same 1/(2*pi) weight as the edge
    # functional; without it the identity fails by exactly (1 - 1/(2*pi))
    # times the diameter integral (checked by a Green-identity derivation).
    rhs = (res.A + res.B
           + (1.0 / r0 ** 2 - 1.0 / r ** 2) * diam / (2.0 * math.pi)
           - arc / (math.pi * r0))
    residual = abs(lhs - rhs)
    out = CheckResult(lhs, rhs, residual <= tol, {"residual": residual})
    return out


# ---------------------------------------------------------------------------
# Sweeping a potential onto a ray system


def _edge_growth_exponent(v, theta, radii):
    """Fitted power-growth exponent of |v| along one ray over the given radii."""
    lo, hi = radii
    vlo = max(abs(v(cmath.rect(lo, theta))), 1e-12)
    vhi = max(abs(v(cmath.rect(hi, theta))), 1e-12)
    return math.log(vhi / vlo) / math.log(hi / lo), vhi


def subharmonic_balayage_eval(v, S, z, R_max=1e6, tol=1e-4, quad_tol=1e-10,
                              full_output=False):
    """Value at z of the sweep of v onto S: v itself on S, otherwise the
    Poisson integral of v over the containing sector's edges in the reduced
    coordinate, truncated at R_max with a fitted-tail certificate.

    The certificate assumes a power-growth envelope along the edges fitted on
    the outer decade (exact for powers, dominating beyond the window for
    slower-than-power growth); it fails loudly when the fitted growth reaches
    the sector exponent or the bound exceeds tol.  full_output=True returns
    (value, tail_bound).
    """
    z = complex(z)
    cls = classify_point(S, z)
    if isinstance(cls, OnSystem):
        val = v(z)
        return (val, 0.0) if full_output else val
    sec, idx = cls.sector, cls.index
    k = len(S.thetas)
    p = sec.exponent
    w = reduce_to_halfplane(sec, z)
    s_max = R_max ** p
    if s_max < 2.0 * abs(w):
        raise TailTooLarge(f"truncation R_max = {R_max} is inside the near zone of {z}")

    total = 0.0
    tail_bound = 0.0
    for theta, sign in ((S.thetas[idx], +1), ((S.thetas[(idx + 1) % k]), -1)):
        fn = lambda s, th=theta, sg=sign: (
            v(cmath.rect(s ** (1.0 / p), th)) * poisson_kernel(sg * s, w))
        # Split at the Poisson-bump scale; map the far piece through u = 1/s
        # so the slowly decaying outer mass is not lost to early termination.
        cut = min(max(4.0 * abs(w), 4.0), s_max)
        pts = [q for q in (abs(w),) if 0.0 < q < cut]
        v1, e1 = _quiet_quad(fn, 0.0, cut, epsabs=quad_tol, epsrel=1e-11, limit=400,
                             points=pts or None)
        v2, e2 = 0.0, 0.0
        if cut < s_max:
            v2, e2 = _quiet_quad(lambda u: fn(1.0 / u) / (u * u), 1.0 / s_max,
                                 1.0 / cut, epsabs=quad_tol, epsrel=1e-11, limit=400)
        err = e1 + e2
        if err > 0.1 * max(tol, 1e-9):
            raise QuadratureFailure(f"edge quadrature error {err:.2e} for z = {z}")
        total += v1 + v2
        kappa, vhi = _edge_growth_exponent(v, theta, (R_max / 10.0, R_max))
        kq = max(kappa, 0.0) / p
        if kq >= 1.0:
            raise TailTooLarge(
                f"edge growth exponent {kappa:.3g} reaches the sector exponent {p:.3g}")
        # |v(s^(1/p))| <= vhi (s/s_max)^kq beyond the cut; Poi <= 4 Im w/(pi s^2)
        tail_bound += vhi * 4.0 * w.imag / math.pi / s_max * (1.0 / (1.0 - kq))
    if tail_bound > tol:
        raise TailTooLarge(f"tail bound {tail_bound:.2e} exceeds tolerance {tol}")
    return (total, tail_bound) if full_output else total


def sweep_potential_eval(bal, z, genus=-1, quad_tol=1e-10):
    """Potential of a swept charge at z: kernel sums over kept atoms plus
    per-ray quadrature of the kernel against the closed-form densities."""
    z = complex(z)
    total = 0.0
    for zeta, m in bal.kept.atoms:
        total += m * kernel_Kq(zeta, z, genus)
    thetas = [0.0, math.pi] if bal.system is None else list(bal.system.thetas)
    for j, th in enumerate(thetas):
        if not bal.ray_contributions(j):
            continue
        fn = lambda t, jj=j, tt=th: (
            kernel_Kq(cmath.rect(t, tt), z, genus) * bal.ray_density(jj, t))
        cut = max(4.0 * abs(z), 4.0)
        v1, e1 = _quiet_quad(fn, 0.0, cut, epsabs=quad_tol, limit=600,
                             points=[abs(z)] if 0.0 < abs(z) < cut else None)
        v2, e2 = _quiet_quad(fn, cut, math.inf, epsabs=quad_tol, limit=600)
        if max(e1, e2) > 1e-7:
            raise QuadratureFailure(f"kernel quadrature error for z = {z}")
        total += v1 + v2
    return total
