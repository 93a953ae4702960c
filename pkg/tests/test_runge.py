import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grushin.regions import AngularRegion, DeltaNeighborhood, annular_sector, pacman
from grushin.runge import (
    PolePushSchedule, RungeScheduleError, approximate_pole, arnoldi_fit,
    build_counterexample, default_schedule,
)

DISK = AngularRegion(((0.0, 2 * math.pi),), 0.0, 0.5)
T = 0.5
BAND = (math.pi - 1, math.pi + 1)
TOY_Z0 = cmath.exp(1j * math.pi - 2 * T)
TOY_UD = DeltaNeighborhood(pacman(BAND), 0.2)


@pytest.fixture(scope="module")
def toy_family():
    s = PolePushSchedule(TOY_Z0)
    return [approximate_pole(s.with_degree(K), TOY_UD) for K in (2, 4, 8, 16, 32, 64)]


@pytest.mark.parametrize("method", ["least_squares", "pole_push"])
@pytest.mark.parametrize("K", [4, 10, 20])
def test_disk_example_geometric_tail(method, K):
    s = PolePushSchedule(2.0, hops=0, final_degree=K)
    r = approximate_pole(s, DISK, method=method)
    assert r.sup_error_on_compact <= 0.25 ** (K + 1) / 1.5 * (1 + 1e-6) + 1e-15
    taylor = -1.0 / 2.0 ** (np.arange(K + 1) + 1)
    assert np.allclose(r.poly.as_array(), taylor, atol=1e-13)


def test_arnoldi_fit_recovers_polynomial():
    rng = np.random.default_rng(1)
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    nodes = np.exp(2j * math.pi * rng.random(200)) * rng.uniform(0.3, 1, 200)
    vals = np.polynomial.polynomial.polyval(nodes, c)
    assert np.allclose(arnoldi_fit(vals, nodes, 7), c, atol=1e-12)
    with pytest.raises(ValueError):
        arnoldi_fit(vals[:5], nodes[:5], 7)


def test_pacman_example_error_decreases():
    z0 = cmath.exp(1j * math.pi) * math.exp(-2)
    compact = pacman((math.pi - 0.5, math.pi + 0.5), 1.1, 0.05)
    s = PolePushSchedule(z0)
    errs = [approximate_pole(s.with_degree(K), compact).sup_error_on_compact
            for K in (20, 40, 80)]
    assert errs[0] > errs[1] > errs[2]


def test_pole_push_rejects_enclosed_pole():
    z0 = cmath.exp(1j * math.pi) * math.exp(-2)
    compact = pacman((math.pi - 0.5, math.pi + 0.5), 1.1, 0.05)
    with pytest.raises(RungeScheduleError):
        approximate_pole(PolePushSchedule(z0), compact, method="pole_push")


def test_pole_push_valid_where_laurent_converges():
    # The compact sits in a small disk; the pole is pushed along a ray away from it.
    compact = AngularRegion(((0.0, 2 * math.pi),), 0.0, 0.3)
    z0 = 0.5
    s = PolePushSchedule(z0, sigma=1.1, hops=2, terms_per_hop=60, final_degree=80)
    r = approximate_pole(s, compact, method="pole_push")
    assert r.sup_error_on_compact < 1e-8
    assert max(r.hop_ratios) < 1 and r.final_ratio < 1


def test_rejects_compact_meeting_ray():
    with pytest.raises(RungeScheduleError):
        approximate_pole(PolePushSchedule(0.3), DISK)
    with pytest.raises(ValueError):
        approximate_pole(PolePushSchedule(2.0), DISK, method="chebyshev")


def test_default_schedule_reaches_four_radii():
    s = default_schedule(0.2 + 0.1j, 1.1, 30)
    assert abs(s.poles[-1]) > 4.4
    assert s.sigma == 2 and s.terms_per_hop == 40


def test_beyond_last_pole_on_cut_diverges(toy_family):
    r = toy_family[-1]
    z = TOY_Z0 * 3.0
    assert abs(r.poly(z) - 1 / (z - TOY_Z0)) > 1.0


def test_convergence_and_locality(toy_family):
    errs = [r.sup_error_on_compact for r in toy_family]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    at_z0 = [abs(r.poly(TOY_Z0)) for r in toy_family]
    assert all(a < b for a, b in zip(at_z0, at_z0[1:]))
    assert at_z0[-1] > 5 * at_z0[0]
    zb = TOY_UD.boundary_points(4001)
    target_sup = np.max(np.abs(1 / (zb - TOY_Z0)))
    for r in toy_family:
        assert np.max(np.abs(r.poly(zb))) <= 2 * target_sup


def test_horner_matches_compensated(toy_family):
    rng = np.random.default_rng(7)
    z = np.sqrt(rng.random(30)) * np.exp(2j * math.pi * rng.random(30))
    for r in toy_family:
        h = r.poly(z)
        c = np.array([r.poly.eval_compensated(x) for x in z])
        assert np.max(np.abs(h - c) / np.abs(c)) < 1e-9


@pytest.mark.parametrize("N", [0, 1, 3])
def test_counterexample_vanishing_order(N):
    s = PolePushSchedule(TOY_Z0, final_degree=16)
    base = approximate_pole(s, TOY_UD)
    r = build_counterexample(TOY_Z0, N, s, TOY_UD)
    assert r.poly.vanishing_order >= N
    a = r.poly.as_array()
    assert np.all(a[: N + 1] == 0)
    assert np.allclose(a[N + 1:], base.poly.as_array())
    z = np.array([0.3 + 0.1j, -0.2j])
    assert np.allclose(r.poly(z), z ** (N + 1) * base.poly(z))


def test_counterexample_bounded_on_pacman_growing_at_z0():
    s = PolePushSchedule(TOY_Z0)
    zb = TOY_UD.boundary_points(4001)
    M = np.max(np.abs(zb ** 4 / (zb - TOY_Z0)))
    vals = []
    for K in (2, 8, 16, 32, 64):
        r = build_counterexample(TOY_Z0, 3, s.with_degree(K), TOY_UD)
        assert np.max(np.abs(r.poly(zb))) <= M + r.sup_error_on_compact * (1 + 1e-9)
        vals.append(abs(r.poly(TOY_Z0)))
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 5 * vals[0]


def test_counterexample_argument_checks():
    s = PolePushSchedule(TOY_Z0)
    with pytest.raises(ValueError):
        build_counterexample(TOY_Z0, -1, s, TOY_UD)
    with pytest.raises(ValueError):
        build_counterexample(TOY_Z0 * 0.9, 0, s, TOY_UD)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.6, 3.0), st.floats(-math.pi, math.pi), st.integers(2, 25))
def test_outside_disk_pole_fits_below_taylor_bound(mod, arg, K):
    z0 = cmath.rect(mod, arg)
    r = approximate_pole(PolePushSchedule(z0, final_degree=K), DISK)
    q = 0.5 / mod
    assert r.sup_error_on_compact <= q ** (K + 1) / (mod - 0.5) * (1 + 1e-6) + 1e-13


def test_annular_compact_fit():
    # Not star-shaped, but the boundary is sampled directly.
    compact = annular_sector(BAND, T)
    s = PolePushSchedule(TOY_Z0)
    errs = [approximate_pole(s.with_degree(K), compact).sup_error_on_compact
            for K in (8, 16, 32)]
    assert errs[0] > errs[1] > errs[2]
