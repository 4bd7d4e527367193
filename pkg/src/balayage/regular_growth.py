"""Indicator estimation, principal-value kernel integrals against radial
counting functions, completely-regular-growth diagnostics on rays, the
four-bisector functionals, and angular densities.

"Limit outside a set of zero relative density" is operationalized on a finite
radius grid: fit a limit candidate, count the radii whose relative residual
exceeds the tolerance, and report that fraction as the exceptional-set density
estimate.  The exceptional set itself is never materialized.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .charges import lindelof_sum
from .errors import BadInput, QuadratureFailure, SingularityUnresolved
from .ray_geometry import ANGULAR_TOL, TWO_PI, normalize_angle
from .stepfn import StepFunction
from .subharmonic import kernel_Kq


# ---------------------------------------------------------------------------
# Indicator estimation


def _dyadic_grid(r_lo, r_hi, per_octave=4):
    """Geometric grid from r_lo to r_hi with 2^(1/per_octave) steps, endpoint kept."""
    if not (0.0 < r_lo < r_hi):
        raise BadInput(f"need 0 < r_lo < r_hi, got ({r_lo}, {r_hi})")
    ratio = 2.0 ** (1.0 / per_octave)
    out = []
    r = r_lo
    while r < r_hi * (1.0 - 1e-12):
        out.append(r)
        r *= ratio
    out.append(r_hi)
    return out


def indicator_estimate(v, theta, p, window, per_octave=8):
    """Max of v(r e^{i theta}) / r^p over a dyadic grid in the window.

    Estimator semantics: a grid maximum is a lower estimate of the limsup;
    callers choose windows wide enough for their data.
    """
    if p <= 0.0:
        raise BadInput(f"need p > 0, got {p}")
    r_lo, r_hi = window
    best = -math.inf
    for r in _dyadic_grid(r_lo, r_hi, per_octave):
        best = max(best, v(cmath.rect(r, theta)) / r ** p)
    return best


# ---------------------------------------------------------------------------
# Principal-value kernel integrals


def _pv_kernel(z, t, q):
    """Re(z^{q+1} / (t^{q+1} (z - t))), the density paired with n(t)."""
    return ((z / t) ** (q + 1) / (z - t)).real


def _check_convergence_class(n, q):
    """Reject counting data whose fitted growth reaches order q+1 at infinity.

    Near zero the class at order q is automatic for step data starting at a
    positive first jump with zero offset; that much is enforced exactly.
    """
    if n.offset != 0.0:
        raise BadInput("counting function must vanish near 0 (offset 0)")
    pts = n.points
    if not pts:
        return
    hi = pts[-1]
    lo = max(pts[0], hi / 10.0)
    if hi <= lo * 1.5:
        return
    vlo = abs(n(lo))
    vhi = abs(n(hi))
    if vlo <= 0.0 or vhi <= 0.0:
        return
    est = math.log(vhi / vlo) / math.log(hi / lo)
    if est >= q + 1 - 0.05:
        raise BadInput(
            f"fitted growth {est:.3g} reaches the convergence bound {q + 1} at infinity")


def _stieltjes_value(n, q, z):
    """Exact parts-identity value: sum of jumps against the genus-q kernel.

    The piecewise antiderivative of the PV density is -K_q(t, z); summing it
    over the constant pieces of n telescopes to this jump sum, with the
    symmetric excision logs cancelling exactly when z sits inside a piece.
    """
    pts = np.asarray(n.points)
    jmp = np.asarray(n.jumps)
    if pts.size == 0:
        return 0.0
    if z == 0:
        return 0.0
    wp = z / pts
    if np.any(wp == 1.0):
        raise BadInput(f"kernel is singular at the jump point {z}")
    val = np.log(np.abs(1.0 - wp))
    pw = np.ones_like(wp)
    for j in range(1, q + 1):
        pw = pw * wp
        val = val + pw.real / j
    return float(np.dot(jmp, val))


def _plain_integral(n, q, z, quad_tol):
    """Improper integral for z off the positive axis: piecewise quadrature
    plus the exact constant-tail term."""
    total = 0.0
    err_budget = 0.0
    bounds = list(n.points)
    for i in range(len(bounds) - 1):
        a, b = bounds[i], bounds[i + 1]
        level = n(0.5 * (a + b))
        if level == 0.0:
            continue
        val, err = quad(lambda t: _pv_kernel(z, t, q), a, b,
                        epsabs=quad_tol, epsrel=1e-10, limit=200)
        total += level * val
        err_budget += err
    last = bounds[-1]
    tail_level = n(last)
    if tail_level != 0.0:
        total += tail_level * kernel_Kq(last, z, q)
    if err_budget > 1e-6:
        raise QuadratureFailure(f"piecewise quadrature error {err_budget:.2e}")
    return total


def _excision_integral(n, q, x, eps, tol, quad_tol):
    """Symmetric-excision PV at real x > 0, Richardson-extrapolated in eps."""
    pts = list(n.points)
    gaps = [abs(p - x) for p in pts]
    nearest = min(gaps)
    if nearest <= 1e-12 * max(1.0, x):
        raise BadInput(f"counting function jumps at the excision point x = {x}")
    eps0 = min(eps, 0.45 * nearest, 0.45 * x)

    def value_at(e):
        total = 0.0
        err_budget = 0.0
        lo0 = pts[0]
        T = 2.0 * max(pts[-1], x + 1.0)
        cuts = sorted(set(c for c in pts + [x - e, x + e, lo0, T]
                          if lo0 <= c <= T))
        for a, b in zip(cuts, cuts[1:]):
            mid = 0.5 * (a + b)
            if x - e <= mid <= x + e:
                continue
            level = n(mid)
            if level == 0.0:
                continue
            val, err = quad(lambda t: _pv_kernel(x, t, q), a, b,
                            epsabs=quad_tol, epsrel=1e-10, limit=200)
            total += level * val
            err_budget += err
        tail_level = n(T)
        if tail_level != 0.0:
            total += tail_level * kernel_Kq(T, complex(x), q)
        if err_budget > 1e-6:
            raise QuadratureFailure(f"excision quadrature error {err_budget:.2e}")
        return total

    vals = [value_at(eps0 / 2 ** k) for k in range(4)]
    # The pole's odd part cancels; the regular factor leaves c1 eps + c3 eps^3,
    # so two Richardson sweeps clear the linear and cubic terms.
    r1 = [2.0 * b - a for a, b in zip(vals, vals[1:])]
    r2 = [(8.0 * b - a) / 7.0 for a, b in zip(r1, r1[1:])]
    if abs(r2[-1] - r2[-2]) > tol:
        raise SingularityUnresolved(
            f"excision values did not stabilize: {r2}")
    return r2[-1], vals


def pv_kernel_integral(n, q, z, eps=1e-2, method="excision", tol=1e-6,
                       quad_tol=1e-10):
    """Principal value of the genus-q kernel density against n.

    method="excision" (spec route): symmetric excision around real positive z
    with Richardson extrapolation; plain improper quadrature off the axis.
    method="stieltjes": the exact parts-identity jump sum, equal analytically;
    the two serve as mutually independent checks.
    """
    if not (isinstance(q, int) and q >= 0):
        raise BadInput(f"need integer q >= 0, got {q}")
    if not isinstance(n, StepFunction):
        raise BadInput("n must be a StepFunction")
    z = complex(z)
    _check_convergence_class(n, q)
    if not n.points:
        return 0.0
    if method == "stieltjes":
        if z.imag == 0.0 and z.real > 0.0 and any(
                abs(p - z.real) <= 1e-12 * max(1.0, z.real) for p in n.points):
            raise BadInput(f"counting function jumps at the singular point {z.real}")
        return _stieltjes_value(n, q, z)
    if method != "excision":
        raise BadInput(f"unknown method {method!r}")
    if z.imag == 0.0 and z.real > 0.0:
        val, _ = _excision_integral(n, q, z.real, eps, tol, quad_tol)
        return val
    return _plain_integral(n, q, z, quad_tol)


def pv_refinement_trace(n, q, x, eps=1e-2, quad_tol=1e-10):
    """The excision values at eps, eps/2, eps/4, eps/8 (for stability tests)."""
    _check_convergence_class(n, q)
    _, vals = _excision_integral(n, q, x, eps, math.inf, quad_tol)
    return vals


# ---------------------------------------------------------------------------
# Completely-regular-growth diagnostics


@dataclass
class RayLimitRecord:
    theta: float
    limit: float
    window: tuple
    spread: float
    exceptional_fraction: float
    stable: bool
    radii: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def to_json(self):
        return {
            "theta": self.theta,
            "limit": self.limit,
            "window": list(self.window),
            "spread": self.spread,
            "exceptional_fraction": self.exceptional_fraction,
            "stable": self.stable,
            "radii": list(self.radii),
            "values": list(self.values),
        }


@dataclass
class CRGReport:
    per_ray: list
    exceptional_density: float
    angular_table: list = field(default_factory=list)
    lindelof_trace: list = field(default_factory=list)

    def __post_init__(self):
        if not (0.0 <= self.exceptional_density <= 1.0):
            raise BadInput("exceptional density must lie in [0, 1]")

    @property
    def stable(self):
        return all(rec.stable for rec in self.per_ray)

    def to_json(self):
        return {
            "rays": [rec.to_json() for rec in self.per_ray],
            "stable": self.stable,
            "exceptional_density": self.exceptional_density,
            "angular_table": list(self.angular_table),
            "lindelof_trace": list(self.lindelof_trace),
        }


# irrational phase inside the octave keeps grid radii off integer atoms
_GRID_PHASE = 2.0 ** (0.5 * (math.sqrt(5.0) - 1.0) / 4.0)


def _default_crg_radii(n_by_ray, truncation=None):
    """Two octaves around sqrt(T log T), phase-shifted off integer breakpoints.

    T is the declared truncation radius of the data (max support by default).
    The kernel sums drift like log(r)/r from below and like r/T from data
    truncation above; the geometric middle balances the two error sources.
    """
    supports = [n.points[-1] for n in n_by_ray if n.points]
    if not supports:
        raise BadInput("all counting functions are empty")
    T = float(truncation) if truncation is not None else max(supports)
    if T <= 1.0:
        raise BadInput(f"truncation radius {T} is too small to analyze")
    r_star = math.sqrt(T * max(math.log(T), 1.0))
    r_lo = max(2.0, 0.5 * r_star)
    r_hi = min(2.0 * r_star, 0.9 * T)
    if r_lo >= r_hi:
        r_lo = r_hi / 4.0
    return [r * _GRID_PHASE for r in _dyadic_grid(r_lo, r_hi, per_octave=8)]


def _fit_limit(radii, values, tol, drop_fraction):
    vals = np.asarray(values, dtype=float)
    tail = vals[len(vals) // 2:]
    med = float(np.median(tail))
    scale = max(1.0, abs(med))
    resid = np.abs(vals - med) / scale
    order = np.argsort(resid)
    n_keep = max(1, int(math.ceil(len(vals) * (1.0 - drop_fraction))))
    kept = order[:n_keep]
    exceptional = float(np.mean(resid > tol))
    spread = float(resid[kept].max())
    limit = float(np.median(vals[kept]))
    stable = exceptional <= drop_fraction + 1e-12 and spread <= tol
    return limit, spread, exceptional, stable


def crg_on_rays(n_by_ray, thetas, p, radii=None, tol=0.05, drop_fraction=0.05,
                truncation=None):
    """Regular-growth diagnostics: per-ray scaled kernel sums over a radius
    grid, limit candidates with the worst residuals dropped, and the dropped
    fraction as the exceptional-set density estimate.

    For p >= 1 the value at radius r on ray j is
    r^{-p} * sum over rays j' of the PV integral of
    Re(w^{q+1} / (t^{q+1} (w - t))) against n_{j'}, with q = floor(p) and
    w = r e^{i(theta_j - theta_j')} (each ray is rotated to the positive axis
    before the kernel is applied).  For p < 1 the scaled counting function
    n_j(r)/r^p itself carries the diagnostic.
    """
    if len(n_by_ray) != len(thetas) or not thetas:
        raise BadInput("one counting function per ray angle is required")
    if p <= 0.0:
        raise BadInput(f"need p > 0, got {p}")
    if radii is None:
        radii = _default_crg_radii(n_by_ray, truncation)
    radii = sorted(float(r) for r in radii)
    if radii[0] <= 0.0:
        raise BadInput("radii must be positive")
    q = int(math.floor(p))
    use_kernel = p >= 1.0
    if use_kernel:
        for n in n_by_ray:
            _check_convergence_class(n, q)

    records = []
    for j, theta_j in enumerate(thetas):
        values = []
        for r in radii:
            if use_kernel:
                total = 0.0
                for jp, theta_jp in enumerate(thetas):
                    delta = normalize_angle(theta_j - theta_jp)
                    if delta < ANGULAR_TOL or TWO_PI - delta < ANGULAR_TOL:
                        w = complex(r)
                    elif abs(delta - math.pi) < ANGULAR_TOL:
                        w = complex(-r)
                    else:
                        w = cmath.rect(r, delta)
                    total += _stieltjes_value(n_by_ray[jp], q, w)
                values.append(total / r ** p)
            else:
                values.append(n_by_ray[j](r) / r ** p)
        limit, spread, exceptional, stable = _fit_limit(
            radii, values, tol, drop_fraction)
        records.append(RayLimitRecord(
            theta=float(theta_j), limit=limit, window=(radii[0], radii[-1]),
            spread=spread, exceptional_fraction=exceptional, stable=stable,
            radii=list(radii), values=values))
    density = max(rec.exceptional_fraction for rec in records)
    return CRGReport(per_ray=records, exceptional_density=density)


# ---------------------------------------------------------------------------
# Four-bisector functionals


def _bisector_integral(n, t):
    """Exact integral of n(s) * s / (s^4 + t^2) ds over the positive axis,
    via the antiderivative arctan(s^2/t) / (2t) and the constant tail."""
    if t <= 0.0:
        raise BadInput(f"need t > 0, got {t}")
    pts = n.points
    if not pts:
        return 0.0
    if n.offset != 0.0:
        raise BadInput("counting function must vanish near 0")

    def anti(s):
        return math.atan2(s * s, t) / (2.0 * t)

    total = 0.0
    for i in range(len(pts) - 1):
        level = n(0.5 * (pts[i] + pts[i + 1]))
        if level:
            total += level * (anti(pts[i + 1]) - anti(pts[i]))
    tail_level = n(pts[-1])
    if tail_level:
        total += tail_level * (math.pi / (4.0 * t) - anti(pts[-1]))
    return total


def exgr2_functionals(counts, t_grid=(10.0, 100.0, 1000.0), r_grid=None,
                      quad_tol=1e-10):
    """Four-bisector diagnostics: the pair integrals
    b_k(t) = 2 * int (n_k + n_{k+1})(s) s ds / (s^4 + t^2), their
    sqrt(t)-scaled limit candidates, and the alternating log-averaged trace
    L(r) = int_1^r (1/t) sum_k i^{k+1} (b_k(t)/2) dt.

    The raw b_k(t) decay like 1/sqrt(t) for counting functions of linear
    growth; sqrt(t) * b_k(t) is the quantity with a finite limit, and its
    pairwise sums match indicator sums of the underlying potentials.
    """
    if len(counts) != 4:
        raise BadInput("exactly four bisector counting functions are required")
    for n in counts:
        if not isinstance(n, StepFunction):
            raise BadInput("counting functions must be StepFunctions")

    def b_at(t):
        return [2.0 * (_bisector_integral(counts[k], t)
                       + _bisector_integral(counts[(k + 1) % 4], t))
                for k in range(4)]

    t_grid = sorted(float(t) for t in t_grid)
    b_values = [(t, b_at(t)) for t in t_grid]
    scaled = np.asarray([[math.sqrt(t) * b for b in bs] for t, bs in b_values])
    b_limits = [float(np.median(scaled[len(scaled) // 2:, k])) for k in range(4)]

    if r_grid is None:
        r_grid = _dyadic_grid(2.0, 512.0, per_octave=1)
    r_grid = sorted(float(r) for r in r_grid)

    def integrand(t):
        bs = b_at(t)
        acc = 0.0 + 0.0j
        for k in range(4):
            acc += 1j ** (k + 1) * (bs[k] / 2.0)
        return acc / t

    trace = []
    acc_re = acc_im = 0.0
    lo = 1.0
    for r in r_grid:
        re, err_re = quad(lambda t: integrand(t).real, lo, r,
                          epsabs=quad_tol, limit=200)
        im, err_im = quad(lambda t: integrand(t).imag, lo, r,
                          epsabs=quad_tol, limit=200)
        if err_re + err_im > 1e-6:
            raise QuadratureFailure("bisector trace quadrature did not converge")
        acc_re += re
        acc_im += im
        trace.append((r, complex(acc_re, acc_im)))
        lo = r
    tail_vals = [t for _, t in trace[len(trace) // 2:]]
    L_limit = complex(float(np.median([t.real for t in tail_vals])),
                      float(np.median([t.imag for t in tail_vals])))
    return {
        "b_values": b_values,
        "b_scaled_limits": b_limits,
        "L_trace": trace,
        "L_limit": L_limit,
    }


# ---------------------------------------------------------------------------
# Angular density


def _in_closed_sector(z, alpha, width):
    if z == 0:
        return True
    rel = normalize_angle(cmath.phase(z) - alpha)
    return rel <= width + ANGULAR_TOL or rel >= TWO_PI - ANGULAR_TOL


def angular_density(nu, alpha, beta, p, radii=None):
    """Mass of the closed sector [alpha, beta] in the closed disk of radius r,
    scaled by r^p, over a radius grid; fitted limit candidate; for integer p
    also the Lindelof sum trace with exponent p."""
    if p <= 0.0:
        raise BadInput(f"need p > 0, got {p}")
    width = beta - alpha
    if not (0.0 < width <= TWO_PI + ANGULAR_TOL):
        raise BadInput(f"need aperture in (0, 2*pi], got {width}")
    if radii is None:
        supports = [abs(z) for z, _ in nu.atoms] or [1.0]
        r_hi = max(supports)
        r_lo = max(1.0, r_hi / 2.0 ** 8)
        if r_lo >= r_hi:
            r_lo, r_hi = 0.5 * r_hi, r_hi
        radii = _dyadic_grid(r_lo, r_hi, per_octave=4)
    radii = sorted(float(r) for r in radii)

    inside = [(abs(z), m) for z, m in nu.atoms if _in_closed_sector(z, alpha, width)]
    ratios = []
    for r in radii:
        mass = math.fsum(m for az, m in inside if az <= r)
        ratios.append(mass / r ** p)
    tail = ratios[len(ratios) // 2:]
    limit = float(np.median(tail))
    out = {"radii": radii, "ratios": ratios, "limit": limit}
    if abs(p - round(p)) < 1e-12:
        q = int(round(p))
        r0 = radii[0]
        out["lindelof_trace"] = [
            (r, lindelof_sum(nu, q, r0, r)) for r in radii[1:]]
    return out
