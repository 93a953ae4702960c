import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grushin.contour import (
    Contour, FactorProfile, QuadratureError, arc, integrate,
    integrate_gaussian_tail_truncation, line, make_gamma_paths, path_log,
)


def test_gamma_path_layout():
    gp, gm = make_gamma_paths(0.5, 0.0, 40.0)
    assert len(gp.segments) == 3
    assert gp.segments[0].initial_point == -40 and gp.segments[0].final_point == -0.5
    mid = gp.segments[1].point(0.5)
    assert abs(mid - 0.5j) < 1e-15
    assert gp.segments[2].final_point == 40
    for t in np.linspace(0, 1, 7):
        for a, b in zip(gp.segments, gm.segments):
            assert abs(np.conj(a.point(t)) - b.point(t)) < 1e-15


def test_rotated_ray():
    gp, _ = make_gamma_paths(0.5, np.pi / 6, 40.0)
    out = gp.segments[2]
    assert abs(out.final_point - 40 * np.exp(-1j * np.pi / 6)) < 1e-12
    assert abs(out.initial_point - 0.5 * np.exp(-1j * np.pi / 6)) < 1e-12


@pytest.mark.parametrize("eps,R", [(0.0, 10.0), (-1.0, 10.0), (2.0, 1.0)])
def test_gamma_path_rejects_bad_geometry(eps, R):
    with pytest.raises(ValueError):
        make_gamma_paths(eps, 0.0, R)


def test_segment_validation():
    with pytest.raises(ValueError):
        line(1.0, 1.0)
    with pytest.raises(ValueError):
        arc(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Contour((line(0, 1), line(2, 3)))


def test_residue_unit_circle():
    c = Contour((arc(0.0, 1.0, 0.0, 2 * np.pi),), closed=True)
    r = integrate(lambda z: 1 / z, c, rel_tol=1e-12)
    assert abs(r.value - 2j * np.pi) < 1e-12
    assert r.evaluations > 0


def test_gaussian_line():
    r = integrate(lambda s: np.exp(-s * s), line(-40, 40), rel_tol=1e-13)
    assert abs(r.value - math.sqrt(math.pi)) < 1e-13
    assert r.error_estimate <= 1e-13 * abs(r.value) or r.roundoff_limited


def test_keyhole_residue_difference():
    gp, gm = make_gamma_paths(0.5, 0.0, integrate_gaussian_tail_truncation(3.0))
    f = lambda s: np.exp(-3 * (1 + s / 2) ** 2) / s
    d = integrate(f, gp, rel_tol=1e-13).value - integrate(f, gm, rel_tol=1e-13).value
    assert abs(d - (-2j * np.pi * math.exp(-3))) < 1e-13


def test_log_branch():
    assert abs(path_log(-2.0 - 0.0j, "above") - (math.log(2) + 1j * math.pi)) < 1e-15
    assert abs(path_log(-2.0 + 0.0j, "below") - (math.log(2) - 1j * math.pi)) < 1e-15
    assert path_log(1.0, "above") == 0 and path_log(1.0, "below") == 0


def test_log_branch_continuous_along_paths():
    for phi in (0.0, 0.3, -0.4):
        for path, br in zip(make_gamma_paths(0.5, phi, 5.0), ("above", "below")):
            pts = np.concatenate([s.point(np.linspace(0, 1, 400)) for s in path.segments])
            lg = path_log(pts, br, phi)
            assert np.max(np.abs(np.diff(lg.imag))) < 0.05
            assert abs(lg[-1].imag + phi) < 1e-14


def test_tail_truncation():
    R3 = integrate_gaussian_tail_truncation(3.0)
    # Left-ray bound: exp(-3 (R/2 - 1)^2) = 1e-18.
    assert R3 == pytest.approx(2 + 2 * math.sqrt(18 * math.log(10) / 3), rel=1e-9)
    assert integrate_gaussian_tail_truncation(100.0) < R3
    Rc = integrate_gaussian_tail_truncation(3 * np.exp(1j * np.pi / 4))
    assert Rc == pytest.approx(2 + 2 * math.sqrt(18 * math.log(10) / (3 * math.cos(np.pi / 4))),
                               rel=1e-9)
    assert integrate_gaussian_tail_truncation(3.0, FactorProfile(log_power=2)) > R3


def test_tail_truncation_rejects_no_decay():
    with pytest.raises(ValueError):
        integrate_gaussian_tail_truncation(1j, FactorProfile(ray_angle=0.0))


def test_reverse_negates():
    gp, _ = make_gamma_paths(0.5, 0.2, 12.0)
    f = lambda s: np.exp(-3 * (1 + s / 2) ** 2) * np.cos(s)
    a = integrate(f, gp, rel_tol=1e-12)
    b = integrate(f, gp.reversed(), rel_tol=1e-12)
    assert abs(a.value + b.value) <= 10 * (a.error_estimate + b.error_estimate) + 1e-15


@settings(max_examples=25, deadline=None)
@given(idx=st.integers(0, 2), t=st.floats(0.05, 0.95))
def test_split_additivity(idx, t):
    gp, _ = make_gamma_paths(0.5, 0.0, 12.0)
    f = lambda s: np.exp(-2 * (1 + s / 2) ** 2) / (s - 3j)
    whole = integrate(f, gp, rel_tol=1e-12)
    p, q = gp.split(idx, t)
    parts = integrate(f, p, rel_tol=1e-12).value + integrate(f, q, rel_tol=1e-12).value
    assert abs(parts - whole.value) < 1e-11 * max(1.0, abs(whole.value))


@pytest.mark.parametrize("f", [lambda z: np.exp(z), lambda z: 1 / (z - 3), lambda z: z ** 7])
def test_closed_contour_holomorphic_zero(f):
    c = Contour((line(-1 - 1j, 1 - 1j), line(1 - 1j, 1 + 1j),
                 arc(0, math.sqrt(2), np.pi / 4, 3 * np.pi / 4), line(-1 + 1j, -1 - 1j)),
                closed=True)
    r = integrate(f, c, rel_tol=1e-10)
    assert abs(r.value) <= 10 * r.error_estimate + 1e-14


def test_bit_identical():
    gp, _ = make_gamma_paths(0.5, 0.0, 12.0)
    f = lambda s: np.exp(-5 * (1 + s / 2) ** 2) * path_log(s, "above")
    a = integrate(f, gp, rel_tol=1e-12)
    b = integrate(f, gp, rel_tol=1e-12)
    assert a.value == b.value and a.error_estimate == b.error_estimate


def test_vector_valued_integrand():
    r = integrate(lambda z: np.stack([np.ones_like(z), z, z * z], axis=1), line(0, 1))
    assert np.allclose(r.value, [1, 0.5, 1 / 3], atol=1e-15)


def test_budget_failure_carries_estimate():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda z: np.sin(1 / (z.real + 1e-9)), line(0, 1), rel_tol=1e-12,
                  max_evals=2000)
    assert info.value.best.evaluations <= 2000
