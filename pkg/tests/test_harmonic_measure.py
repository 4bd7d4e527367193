import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from balayage import (BoundarySegment, EndpointSingularity, Interval,
                      NotInUpperHalfPlane, RaySystem, Sector, hm_bounds,
                      hm_interval, hm_interval_quad, hm_sector_disk,
                      hm_sector_disk_bounds, hm_sector_segment, hm_system,
                      poisson_kernel)

PI = math.pi


def test_poisson_kernel_values():
    assert poisson_kernel(0.0, 1j) == pytest.approx(1 / PI, abs=1e-15)
    assert poisson_kernel(1.0, 1j) == pytest.approx(1 / (2 * PI), abs=1e-15)
    with pytest.raises(NotInUpperHalfPlane):
        poisson_kernel(0.0, 1.0 - 0.5j)


def test_poisson_kernel_total_mass():
    z = 0.3 + 1.7j
    val, _ = quad(lambda t: poisson_kernel(t, z), -np.inf, np.inf,
                  epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_hm_interval_closed_forms():
    I = Interval(-1.0, 1.0)
    assert hm_interval(1j, I) == pytest.approx(0.5, abs=1e-15)
    assert hm_interval(1j * math.sqrt(3.0), I) == pytest.approx(1 / 3, abs=1e-14)
    assert hm_interval(2j, I) == pytest.approx(math.atan(4 / 3) / PI, abs=1e-15)
    # outside-semidisk single-arctan arithmetic
    assert hm_interval(10j, I) == pytest.approx(math.atan(20 / 99) / PI,
                                                abs=1e-15)


def test_hm_interval_real_axis_dirac():
    I = Interval(-1.0, 1.0)
    assert hm_interval(0.5, I) == 1.0
    assert hm_interval(2.0, I) == 0.0
    with pytest.raises(EndpointSingularity):
        hm_interval(1.0, I)


def test_hm_interval_semicircle_half():
    I = Interval(-2.0, 4.0)
    x0, r = I.center, I.radius
    for th in np.linspace(0.05, PI - 0.05, 9):
        z = x0 + r * complex(math.cos(th), math.sin(th))
        assert hm_interval(z, I) == pytest.approx(0.5, abs=1e-10)


def test_hm_interval_quad_oracle():
    I = Interval(-1.0, 1.0)
    assert hm_interval_quad(1j, I) == pytest.approx(0.5, abs=1e-8)
    z = 0.5 + 0.5j
    J = Interval(0.0, 1.0)
    assert hm_interval_quad(z, J) == pytest.approx(hm_interval(z, J), abs=1e-8)
    assert hm_interval_quad(10j, I) == pytest.approx(math.atan(20 / 99) / PI,
                                                     abs=1e-8)


def test_hm_interval_probability():
    big = Interval(-1e6, 1e6)
    for z in (0.1j, 3 + 0.5j, -9 + 10j):
        assert hm_interval(z, big) >= 1.0 - 1e-5


@given(a=st.floats(-20.0, 20.0), gap1=st.floats(0.05, 10.0),
       gap2=st.floats(0.05, 10.0), re=st.floats(-30.0, 30.0),
       im=st.floats(0.01, 50.0))
def test_hm_interval_additivity(a, gap1, gap2, re, im):
    b, c = a + gap1, a + gap1 + gap2
    z = complex(re, im)
    whole = hm_interval(z, Interval(a, c))
    parts = hm_interval(z, Interval(a, b)) + hm_interval(z, Interval(b, c))
    assert abs(whole - parts) <= 1e-12


def test_hm_bounds_far_point():
    I = Interval(-1.0, 1.0)
    rep = hm_bounds(10j, I, a=0.1)
    exact = hm_interval(10j, I)
    assert rep.exact == pytest.approx(exact, abs=1e-15)
    by_name = {e.name: e for e in rep.entries}
    up = by_name["far_upper"]
    assert up.side == "upper"
    assert up.value == pytest.approx(2 / (PI * 0.81 * 10), rel=1e-12)
    assert up.value >= exact
    lo = by_name["far_lower"]
    assert lo.side == "lower"
    assert lo.value == pytest.approx(2 * 0.9 / (80 * PI), rel=1e-12)
    assert lo.value <= exact
    assert rep.all_hold


def test_hm_bounds_semicircle_omits_semidisk_pair():
    I = Interval(-1.0, 1.0)
    z = 1j  # apex of the semicircle: the on-circle case is float-exact here
    rep = hm_bounds(z, I)
    names = {e.name for e in rep.entries}
    assert "outside_semidisk_upper" not in names
    assert "inside_semidisk_lower" not in names
    assert any(s[0] == "semidisk_linearization" for s in rep.skipped)
    assert rep.all_hold


def test_hm_bounds_random_bracketing():
    rng = np.random.default_rng(7)
    for _ in range(400):
        z = complex(rng.uniform(-20, 20), rng.uniform(0.01, 40.0))
        t1 = rng.uniform(-20, 20)
        t2 = t1 + rng.uniform(0.05, 20.0)
        rep = hm_bounds(z, Interval(t1, t2), a=rng.uniform(0.1, 0.9),
                        b=rng.uniform(1.2, 4.0))
        assert rep.all_hold, (z, t1, t2, [(e.name, e.value) for e in rep.entries])


def test_hm_sector_segment_identity_reduction():
    sec = Sector(0.0, PI)
    val = hm_sector_segment(sec, 1j, BoundarySegment(0, 0.0, 1.0))
    assert val == pytest.approx(0.25, abs=1e-14)


def test_hm_sector_segment_quarter():
    sec = Sector(0.0, PI / 2)
    z = 2 * cmath.exp(1j * PI / 4)
    val = hm_sector_segment(sec, z, BoundarySegment(0, 0.0, 1.0))
    assert val == pytest.approx(math.atan(1 / 4) / PI, abs=1e-13)


def test_hm_sector_segment_full_aperture_quadrature():
    sec = Sector(0.0, 2 * PI)
    z = -1.0 + 0.0j  # interior of the slit plane; reduces to (-1)^(1/2) = i
    val = hm_sector_segment(sec, z, BoundarySegment(0, 0.0, 1.0))
    oracle, _ = quad(lambda t: poisson_kernel(t, 1j), 0.0, 1.0, epsabs=1e-12)
    assert val == pytest.approx(oracle, abs=1e-8)


def test_hm_sector_disk_values():
    sec = Sector(0.0, PI / 2)
    z = 2 * cmath.exp(1j * PI / 4)
    assert hm_sector_disk(sec, z, 1.0) == pytest.approx(
        math.atan(8 / 15) / PI, abs=1e-14)
    half = Sector(0.0, PI)
    for b in (1.5, 2.0, 7.0):
        assert hm_sector_disk(half, 1j * b, 1.0) == pytest.approx(
            math.atan(2 * b / (b * b - 1)) / PI, abs=1e-13)


def test_hm_sector_disk_bound_dominance():
    rng = np.random.default_rng(11)
    for _ in range(200):
        alpha = rng.uniform(0, 2 * PI)
        aperture = rng.uniform(0.3, 2 * PI)
        sec = Sector(alpha, alpha + aperture)
        a = rng.uniform(0.1, 0.9)
        r = rng.uniform(0.1, 5.0)
        zr = r / a * rng.uniform(1.0, 4.0)
        z = zr * cmath.exp(1j * (alpha + rng.uniform(0.05, 0.95) * aperture))
        bounds = hm_sector_disk_bounds(sec, z, r, a)
        assert "disk_upper" in bounds
        assert hm_sector_disk(sec, z, r) <= bounds["disk_upper"] + 1e-12


def test_hm_system_half_plane_segment():
    S = RaySystem([0.0, PI])
    val = hm_system(S, 1j, segments=(BoundarySegment(0, 0.0, 1.0),
                                     BoundarySegment(1, 0.0, 1.0)))
    assert val == pytest.approx(0.5, abs=1e-14)


def test_hm_system_dirac_on_system():
    S = RaySystem([0.0, PI])
    assert hm_system(S, 2.0, segments=(BoundarySegment(0, 0.0, 3.0),)) == 1.0
    assert hm_system(S, 5.0, segments=(BoundarySegment(0, 0.0, 3.0),)) == 0.0


def test_hm_system_cross_disk():
    S = RaySystem([0.0, PI / 2, PI, 3 * PI / 2])
    z = 2 * cmath.exp(1j * PI / 4)
    assert hm_system(S, z, disk=1.0) == pytest.approx(
        math.atan(8 / 15) / PI, abs=1e-14)
