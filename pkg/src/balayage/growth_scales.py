"""Order, type, and convergence-class diagnostics for monotone step data.

All quantities are estimators over explicit radius windows: a dyadic grid
augmented with the function's own jump points, which makes suprema of
f(r)/r^p exact for step functions (between jumps the ratio only decreases).
Integrals against step functions are exact finite sums; the two
integration-by-parts identities tying the Stieltjes and Lebesgue forms
together are verified to machine accuracy as a self-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadInput
from .stepfn import StepFunction

ORDER_CAP = 64.0  # estimates above this are reported as +inf


def _window_grid(f, r_lo, r_hi):
    if not (0.0 < r_lo < r_hi):
        raise BadInput(f"need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]")
    grid = {r_lo, r_hi}
    r = r_lo
    while r < r_hi:
        grid.add(r)
        r *= 2.0
    grid.update(p for p in f.points if r_lo <= p <= r_hi)
    return sorted(grid)


def order_at_infinity(f, r_lo, r_hi):
    """Max of log(1 + f^+(r)) / log r over the top half of the window grid.

    The ratio is biased upward at small radii, so the lower (geometric) half
    of the window is burn-in and only the top half enters the max; widening
    the window therefore drives the estimate toward the tail exponent.
    Estimates above ORDER_CAP are reported as +inf.
    """
    cut = math.sqrt(r_lo * r_hi)
    best = 0.0
    for r in _window_grid(f, r_lo, r_hi):
        if r <= 1.0 or r < cut:
            continue
        v = max(f(r), 0.0)
        best = max(best, math.log1p(v) / math.log(r))
    return math.inf if best > ORDER_CAP else best


def type_at(f, p, r_lo, r_hi):
    """Sup of f^+(r) / r^p over the window grid (exact for step functions)."""
    if p < 0.0:
        raise BadInput(f"need p >= 0, got {p}")
    return max(max(f(r), 0.0) / r ** p for r in _window_grid(f, r_lo, r_hi))


def _abs_integral(f, p, lo, hi):
    """Exact integral of |f(t)| / t^{p+1} over [lo, hi], lo > 0 allowed to be 0
    only when f vanishes identically near 0."""
    anti = math.log if p == 0.0 else (lambda x: -x ** (-p) / p)
    cuts = [lo] + [q for q in f.points if lo < q < hi] + [hi]
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        c = abs(f(a))
        if c == 0.0:
            continue
        if a == 0.0:
            return math.inf
        total += c * (anti(b) - anti(a))
    return total


@dataclass
class ConvergenceReport:
    value: float
    trend: str  # "convergent" | "divergent"
    samples: list[tuple[float, float]]
    stieltjes_tail: float
    parts_residual: float


def convergence_integral_inf(f, p, r0, R):
    """Integral of |f(t)|/t^{p+1} over [r0, R], exactly, with a dyadic trend
    verdict and the companion Stieltjes tail; also verifies the parts identity
      int_(r,R] df/t^p = f(R)/R^p - f(r)/r^p + p int_r^R f/t^{p+1} dt
    (for the signed f) and reports its residual."""
    if not (0.0 < r0 < R):
        raise BadInput(f"need 0 < r0 < R, got [{r0}, {R}]")
    samples = []
    r = 2.0 * r0
    while r < R:
        samples.append((r, _abs_integral(f, p, r0, r)))
        r *= 2.0
    value = _abs_integral(f, p, r0, R)
    samples.append((R, value))
    if len(samples) >= 3:
        from .charges import fit_slope_vs_log
        slope = fit_slope_vs_log([s[0] for s in samples[-8:]],
                                 [s[1] for s in samples[-8:]])
        trend = "divergent" if slope > 0.1 else "convergent"
    else:
        trend = "convergent" if math.isfinite(value) else "divergent"
    tail = f.integral_df((lambda t: t ** (-p)) if p != 0.0 else (lambda t: 1.0), r0, R)
    lhs = tail
    rhs = (f(R) / R ** p - f(r0) / r0 ** p
           + p * f.integral_f_power(p, r0, R)) if p != 0.0 else f(R) - f(r0)
    return ConvergenceReport(value=value, trend=trend, samples=samples,
                             stieltjes_tail=tail, parts_residual=abs(lhs - rhs))


@dataclass
class ZeroReport:
    value: float
    f_log_limit: float
    log_stieltjes: float
    poch_residual: float | None
    log_residual: float


def convergence_integral_zero(f, p, r0):
    """Exact zero-side integrals for a step function on (0, r0]:

    value          : int_0^{r0} |f(t)|/t^{p+1} dt (+inf when f(0) != 0)
    f_log_limit    : lim_{r->0} f(r) log r (0 or signed inf for steps)
    log_stieltjes  : int_(0,r0] log t df(t)
    poch_residual  : residual of the p > 0 parts identity on f - f(0)
    log_residual   : residual of the p = 0 logarithmic parts identity
    """
    if r0 <= 0.0:
        raise BadInput(f"need r0 > 0, got {r0}")
    if p < 0.0:
        raise BadInput(f"need p >= 0, got {p}")
    value = _abs_integral(f, p, 0.0, r0)
    f0 = f(0.0)
    f_log_limit = 0.0 if f0 == 0.0 else math.copysign(math.inf, -f0)
    if any(q == 0.0 for q in f.points):
        s0 = f.jumps[f.points.index(0.0)]
        log_st = math.copysign(math.inf, -s0)
    else:
        log_st = f.integral_df(math.log, 0.0, r0)

    # shifted function g = f - f(0): integrals of g against dt start cleanly at 0
    g = StepFunction(list(f.points), list(f.jumps), 0.0)
    if g.points and g.points[0] == 0.0:
        g = StepFunction(g.points[1:], g.jumps[1:], 0.0)
    poch_residual = None
    if p > 0.0:
        lhs = _signed_shifted_integral(g, p, r0)
        rhs = -(g(r0)) / (p * r0 ** p) + g.integral_df(lambda t: t ** (-p), 0.0, r0) / p
        poch_residual = abs(lhs - rhs)
    lhs0 = _signed_shifted_integral(g, 0.0, r0)
    rhs0 = g(r0) * math.log(r0) - g.integral_df(math.log, 0.0, r0)
    return ZeroReport(value=value, f_log_limit=f_log_limit, log_stieltjes=log_st,
                      poch_residual=poch_residual, log_residual=abs(lhs0 - rhs0))


def _signed_shifted_integral(g, p, r0):
    """Exact int_0^{r0} g(t)/t^{p+1} dt for g vanishing near 0 (signed)."""
    anti = math.log if p == 0.0 else (lambda x: -x ** (-p) / p)
    cuts = [q for q in g.points if q < r0] + [r0]
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        c = g(a)
        if c != 0.0:
            total += c * (anti(b) - anti(a))
    return total


@dataclass
class GrowthReport:
    order_estimate: float
    type_estimate: float
    convergence: ConvergenceReport

    @property
    def type_is_finite(self):
        return math.isfinite(self.type_estimate)


def growth_report(f, p, r_lo, r_hi):
    """Bundle the three diagnostics over one window at one comparison order."""
    return GrowthReport(order_estimate=order_at_infinity(f, r_lo, r_hi),
                        type_estimate=type_at(f, p, r_lo, r_hi),
                        convergence=convergence_integral_inf(f, p, r_lo, r_hi))
