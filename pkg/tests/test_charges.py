import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from balayage import (AtomicCharge, BadInput, HypothesisViolated, Interval,
                      RaySystem, RayTestFunction, SupportOffAxis,
                      SupportTouchesInterval, balayage_halfplane,
                      balayage_system, blaschke_halfplane,
                      blaschke_outside_system, blaschke_sector,
                      check_fubini, check_ges_bound, check_ges_bound_system,
                      check_lindelof_preservation, check_lipschitz,
                      check_thcup_bound, complementary_sectors,
                      distribution_on_R, divergence_verdict, lindelof_sum,
                      radial_counting, seq_balayage_distribution)
from conftest import random_charge

PI = math.pi


def test_charge_validation():
    nu = AtomicCharge([(1j, 1.0), (2.0, 0.0)])
    assert len(nu.atoms) == 1  # zero masses dropped
    assert nu.total_mass == 1.0
    with pytest.raises(BadInput):
        AtomicCharge([(1j, math.inf)])


def test_radial_counting_examples():
    f = radial_counting(AtomicCharge([(1j, 1.0)]))
    assert f(0.5) == 0.0 and f(1.0) == 1.0 and f(2.0) == 1.0
    sym = AtomicCharge([(1j, 1.0), (-1j, -1.0)])
    assert radial_counting(sym)(5.0) == 0.0
    assert radial_counting(sym, variation=True)(5.0) == 2.0
    stair = radial_counting(AtomicCharge([(1.0, 1.0), (2j, 1.0), (-3.0, 1.0)]))
    assert [stair(r) for r in (1, 2, 3)] == [1.0, 2.0, 3.0]


def test_distribution_on_R_atoms():
    nu = AtomicCharge([(2.0, 1.0)])
    assert distribution_on_R(nu, 3.0) == 1.0
    assert distribution_on_R(nu, 1.0) == 0.0
    with pytest.raises(SupportOffAxis):
        distribution_on_R(AtomicCharge([(1j, 1.0)]), 1.0)


def test_distribution_balayage_2i():
    bal = balayage_halfplane(AtomicCharge([(2j, 1.0)]))
    assert distribution_on_R(bal, 2.0) == 0.25


def test_distribution_antisymmetric_pair_vanishes():
    nu = AtomicCharge([(1j, 1.0), (-1j, -1.0)])
    bal = balayage_system(nu, RaySystem([0.0, PI]))
    for x in np.linspace(-5.0, 5.0, 11):
        assert distribution_on_R(bal, float(x)) == 0.0


def test_variation_density_antisymmetric_pair():
    var = AtomicCharge([(1j, 1.0), (-1j, 1.0)])
    bal = balayage_system(var, RaySystem([0.0, PI]))
    for t in np.linspace(0.3, 4.0, 10):
        want = 2.0 / (PI * (1.0 + t * t))
        assert bal.ray_density(0, float(t)) == pytest.approx(want, abs=1e-12)
        assert bal.ray_density(1, float(t)) == pytest.approx(want, abs=1e-12)


def test_blaschke_halfplane_trends():
    # purely imaginary atoms: partial sums grow like log N
    radii, sums = [], []
    for N in (8, 32, 128, 512, 2048):
        nu = AtomicCharge([(1j * k, 1.0) for k in range(1, N + 1)])
        radii.append(float(N))
        sums.append(blaschke_halfplane(nu, 0.5))
    slope, growing = divergence_verdict(radii, sums)
    assert growing
    # horizontal line atoms: bounded by the closed form
    nu = AtomicCharge([(k + 1j, 1.0) for k in range(1, 4000)])
    total = blaschke_halfplane(nu, 0.5)
    limit = (PI / math.tanh(PI) - 1.0) / 2.0
    assert total < limit
    assert total == pytest.approx(limit, abs=5e-4)
    # lower half-plane only
    assert blaschke_halfplane(AtomicCharge([(1 - 2j, 3.0)]), 1.0) == 0.0


def test_blaschke_sector_reduction():
    nu = AtomicCharge([(2 * cmath.exp(1j * PI / 4), 1.0)])
    secs = complementary_sectors(RaySystem([0.0, PI / 2, PI, 3 * PI / 2]))
    assert blaschke_sector(nu, secs[0], 1.0) == pytest.approx(0.25, abs=1e-13)
    assert blaschke_sector(nu, secs[1], 1.0) == 0.0
    half = complementary_sectors(RaySystem([0.0, PI]))[0]
    up = AtomicCharge([(0.3 + 2j, 1.0), (-1 + 1j, 0.5)])
    assert blaschke_sector(up, half, 0.9) == pytest.approx(
        blaschke_halfplane(up, 0.9), abs=1e-13)


def test_blaschke_outside_system_per_sector():
    S = RaySystem([0.0, PI])
    nu = AtomicCharge([(2j, 1.0), (-3j, 2.0)])
    sums = blaschke_outside_system(nu, S, 1.0)
    assert sums[0] == pytest.approx(0.5, abs=1e-13)
    assert sums[1] == pytest.approx(2.0 / 3.0, abs=1e-13)


def test_lindelof_sum_examples():
    sine = AtomicCharge([(k * PI, 1.0) for k in range(1, 50)]
                        + [(-k * PI, 1.0) for k in range(1, 50)])
    assert abs(lindelof_sum(sine, 1, 0.5, 200.0)) <= 1e-14
    one = AtomicCharge([(2.0, 1.0)])
    assert lindelof_sum(one, 1, 1.0, 3.0) == 0.5
    # harmonic partial sums along the imaginary axis are unbounded
    vals = []
    for r in (8.0, 64.0, 512.0):
        nu = AtomicCharge([(1j * k, 1.0) for k in range(1, int(r) + 1)])
        vals.append(abs(lindelof_sum(nu, 1, 0.5, r)))
    assert vals[0] < vals[1] < vals[2]


def test_balayage_halfplane_density_and_mass():
    bal = balayage_halfplane(AtomicCharge([(1j, 1.0)]))
    assert not bal.kept.atoms
    for t in (0.0, 0.7, -2.0):
        want = 1.0 / (PI * (1.0 + t * t))
        got = bal.ray_density(0, abs(t)) if t >= 0 else bal.ray_density(1, abs(t))
        if t == 0.0:
            got = bal.ray_density(0, 1e-300)
        assert got == pytest.approx(want, rel=1e-12)
    total, _ = quad(lambda t: bal.ray_density(0, t), 0.0, np.inf)
    total2, _ = quad(lambda t: bal.ray_density(1, t), 0.0, np.inf)
    assert total + total2 == pytest.approx(1.0, abs=1e-10)


def test_balayage_halfplane_keeps_lower_atoms():
    bal = balayage_halfplane(AtomicCharge([(-3j, 2.0)]))
    assert bal.kept.atoms == [(-3j, 2.0)]
    assert not bal.swept


def test_balayage_system_halfplane_consistency():
    nu = AtomicCharge([(2j, 1.0), (1 - 1j, 0.5)])
    S = RaySystem([0.0, PI])
    bal = balayage_system(nu, S)
    half_up = balayage_halfplane(nu.restricted(lambda z: z.imag > 0))
    for x in (0.5, 1.5, -2.0):
        lhs = distribution_on_R(bal, x)
        # mirror the lower atom into the upper half-plane by hand
        low = balayage_halfplane(AtomicCharge([(1 + 1j, 0.5)]))
        rhs = distribution_on_R(half_up, x)
        rhs += (low.ray_segment_mass(0, 0.0, x) if x >= 0
                else -low.ray_segment_mass(1, 0.0, -x))
        assert lhs == pytest.approx(rhs, abs=1e-13)


def test_balayage_system_cross_example():
    nu = AtomicCharge([(2 * cmath.exp(1j * PI / 4), 1.0)])
    S = RaySystem([0.0, PI / 2, PI, 3 * PI / 2])
    bal = balayage_system(nu, S)
    assert bal.ray_segment_mass(0, 0.0, 1.0) == pytest.approx(
        math.atan(1 / 4) / PI, abs=1e-13)
    # positivity of every segment mass for positive input
    rng = np.random.default_rng(3)
    for _ in range(20):
        j = int(rng.integers(0, 4))
        a = rng.uniform(0.0, 3.0)
        b = a + rng.uniform(0.01, 3.0)
        assert bal.ray_segment_mass(j, a, b) >= 0.0


def test_balayage_on_system_kept():
    S = RaySystem([0.0, PI / 2])
    nu = AtomicCharge([(3j, 1.0), (2.0, 1.0), (0.0, 4.0)])
    bal = balayage_system(nu, S)
    kept = sorted(bal.kept.atoms, key=lambda zm: (zm[0].real, zm[0].imag))
    assert kept == [(0.0 + 0j, 4.0), (3j, 1.0), (2.0 + 0j, 1.0)]
    assert not bal.swept


def test_balayage_linearity_exact():
    nu1 = AtomicCharge([(1 + 2j, 1.0)])
    nu2 = AtomicCharge([(-2 + 1j, -0.5)])
    S = RaySystem([0.0, 2.0, 4.0])
    b1 = balayage_system(nu1, S)
    b2 = balayage_system(nu2, S)
    b12 = balayage_system(nu1 + nu2, S)
    for j in range(3):
        for x in (0.5, 2.0, 7.0):
            assert b12.ray_segment_mass(j, 0.0, x) == pytest.approx(
                b1.ray_segment_mass(j, 0.0, x) + b2.ray_segment_mass(j, 0.0, x),
                abs=1e-15)


def test_variation_dominance_on_segments():
    rng = np.random.default_rng(17)
    S = RaySystem([0.0, PI])
    for _ in range(25):
        nu = random_charge(rng, 6)
        bal = balayage_system(nu, S)
        bal_var = balayage_system(
            AtomicCharge([(z, abs(m)) for z, m in nu.atoms]), S)
        for j in (0, 1):
            a = rng.uniform(0.0, 4.0)
            b = a + rng.uniform(0.1, 4.0)
            signed = abs(bal.ray_segment_mass(j, a, b))
            upper = bal_var.ray_segment_mass(j, a, b)
            assert signed <= upper + 1e-12


def test_seq_balayage_distribution():
    assert seq_balayage_distribution([2j], 2.0) == 0.25
    assert seq_balayage_distribution([2j], 1e9) == pytest.approx(0.5, abs=1e-8)
    assert seq_balayage_distribution([1.0, 2.0], 1.5) == 1.0


def test_check_thcup_examples():
    res = check_thcup_bound(AtomicCharge([(10j, 1.0)]), 1.0, 2.0, 0.5)
    assert res.holds
    on_axis = AtomicCharge([(1.5, 1.0), (5.0, 2.0)])
    res = check_thcup_bound(on_axis, 1.0, 2.0, 0.5)
    assert res.holds and res.lhs == 1.0
    with pytest.raises(HypothesisViolated):
        check_thcup_bound(on_axis, -1.0, 2.0, 0.5)


def test_check_thcup_random_suite():
    rng = np.random.default_rng(23)
    for _ in range(60):
        nu = random_charge(rng, int(rng.integers(1, 9)), positive=True)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        t1 = sign * rng.uniform(0.2, 5.0)
        t2 = t1 + rng.uniform(0.05, 3.0)
        if t1 * t2 < 0.0:
            t2 = -t1 / 2.0 if t1 < 0 else t1 + 0.01
        if not t1 < t2:
            t1, t2 = min(t1, t2), max(t1, t2)
        if t1 * t2 < 0:
            continue
        res = check_thcup_bound(nu, t1, t2, rng.uniform(0.15, 0.85))
        assert res.holds, (nu.atoms, t1, t2)


def test_check_ges_examples():
    res = check_ges_bound(AtomicCharge([(2j, 1.0)]), lambda r: 2.0 * r, 1.0)
    assert res.lhs == pytest.approx(math.atan(4 / 3) / PI, abs=1e-13)
    assert res.rhs == pytest.approx(4.0 / PI, rel=1e-13)
    assert res.holds
    on_axis = AtomicCharge([(1.0, 1.0), (-2.0, 1.0)])
    res = check_ges_bound(on_axis, lambda r: 2.0 * r, 3.0)
    assert res.holds and res.detail["tail_integral"] == 0.0


def test_check_ges_system_suite():
    rng = np.random.default_rng(5)
    S = RaySystem([0.0, 2 * PI / 3, 4 * PI / 3])
    for _ in range(25):
        nu = random_charge(rng, 8, positive=True)
        r = rng.uniform(0.5, 5.0)
        res = check_ges_bound_system(nu, S, lambda s: 2.5 * s, r)
        assert res.holds


def test_check_lipschitz():
    rep = check_lipschitz(AtomicCharge([(1j, 1.0)]), 1.0, 2.0)
    assert rep.modulus == pytest.approx(1.0 / (2.0 * PI), rel=2e-2)
    assert check_lipschitz(AtomicCharge([]), 1.0, 2.0).modulus == 0.0
    with pytest.raises(SupportTouchesInterval):
        check_lipschitz(AtomicCharge([(1.5, 1.0)]), 1.0, 2.0)


def test_check_fubini_examples():
    S = RaySystem([0.0, PI])
    F = RayTestFunction(S, {0: [(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]})
    res = check_fubini(AtomicCharge([(2j, 1.0)]), S, F)
    assert res.holds and abs(res.lhs - res.rhs) <= 1e-8
    # charge already on the system: both sides are the exact pairing
    on_s = AtomicCharge([(0.5, 2.0), (-1.5, 1.0)])
    res = check_fubini(on_s, S, F)
    assert res.lhs == pytest.approx(2.0 * 0.5, abs=1e-12)
    assert res.holds


def test_check_fubini_linearity():
    S = RaySystem([0.0, PI])
    F = RayTestFunction(S, {0: [(0.0, 0.0), (1.0, 1.0), (3.0, 0.0)],
                            1: [(0.5, 0.0), (1.0, 2.0), (2.0, 0.0)]})
    nu1 = AtomicCharge([(1 + 1j, 1.0)])
    nu2 = AtomicCharge([(0.5 - 1j, -0.5)])
    r1 = check_fubini(nu1, S, F)
    r2 = check_fubini(nu2, S, F)
    r12 = check_fubini(nu1 + nu2, S, F)
    assert r12.rhs == pytest.approx(r1.rhs + r2.rhs, abs=1e-12)
    assert r12.holds


def test_lindelof_preservation_symmetric():
    S = RaySystem([0.0, PI])
    nu = AtomicCharge([(2j, 1.0), (-2j, 1.0)])
    rep = check_lindelof_preservation(nu, S, 1, radii=(4, 8, 16, 32))
    assert rep["bounded"]
    nu2 = AtomicCharge([(2j, 1.0)])
    rep2 = check_lindelof_preservation(nu2, S, 1, radii=(4, 8, 16, 32, 64))
    assert rep2["bounded"]
