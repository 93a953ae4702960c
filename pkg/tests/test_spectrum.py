import math

import numpy as np
import pytest

from grushin.spectrum import (
    agmon_ratio, complex_eigenfunction, eigenfunction, gamma_asymptote, ground_eigen,
    l2_norm, spectral_records,
)
from oracles import fd_ground_state

# Richardson-extrapolated finite differences (tests/oracles.py), frozen.
FD_LAMBDA = {1.0: 2.5969196497526, 2.0: 2.9719715670739, 5.0: 5.1530382852503}
FD_NORM_1 = 0.9928421037902881


@pytest.mark.parametrize("alpha", [1.0, 2.0, 5.0])
def test_matches_finite_difference_oracle(alpha):
    lam_fd, _ = fd_ground_state(alpha)
    assert lam_fd == pytest.approx(FD_LAMBDA[alpha], rel=1e-12)
    assert abs(ground_eigen(alpha).lam - lam_fd) / lam_fd <= 1e-6


def test_l2_norm_matches_oracle():
    _, n2 = fd_ground_state(1.0)
    assert math.sqrt(n2) == pytest.approx(FD_NORM_1, rel=1e-10)
    assert abs(l2_norm(ground_eigen(1.0)) - FD_NORM_1) < 1e-6


def test_alpha_ten_scaled_eigenvalue():
    e = ground_eigen(10.0)
    assert e.lam > 10 and 1 < e.mu < 1.01


def test_alpha_twelve_rho():
    e = ground_eigen(12.0)
    predicted = 4 / math.sqrt(math.pi) * 12 ** 1.5 * math.exp(-12)
    assert e.rho == pytest.approx(predicted, rel=0.2)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 3.0, 8.0, 15.0, 30.0])
def test_eigenfunction_shape(alpha):
    e = ground_eigen(alpha)
    v = e.vs
    assert e.lam > alpha
    assert v[e.xs.size // 2] == 1.0
    assert abs(v[0]) < 1e-9 and abs(v[-1]) < 1e-9
    assert np.max(np.abs(v - v[::-1])) < 1e-10
    half = v[e.xs.size // 2:]
    assert np.all(np.diff(half) <= 1e-12)
    assert np.all(v[1:-1] > 0)


def test_eigenfunction_reevaluation_matches_samples():
    e = ground_eigen(6.0)
    idx = np.arange(0, e.xs.size, 97)
    assert np.allclose(eigenfunction(e, e.xs[idx]), e.vs[idx], atol=1e-12)


def test_norm_approaches_whole_line_value():
    for a in (20.0, 40.0):
        assert l2_norm(ground_eigen(a)) == pytest.approx((math.pi / a) ** 0.25, rel=1e-6)


def test_scaled_l2_norm_bounded_below():
    vals = [n ** 0.25 * l2_norm(ground_eigen(n)) for n in range(1, 41)]
    assert min(vals) > 0.5 * vals[-1]


def test_agmon_trivial_weight():
    for a in (2.0, 10.0):
        e = ground_eigen(a)
        assert agmon_ratio(e, 1.0) == pytest.approx(a ** -0.75, rel=1e-12)


def test_agmon_bounded():
    r = [agmon_ratio(ground_eigen(a), 0.5) for a in (5, 10, 20, 40)]
    assert max(r) / min(r) <= 5


def test_gamma_asymptotics_approach():
    ratios = [ground_eigen(n).gamma / gamma_asymptote(n) for n in range(8, 21)]
    assert 0.7 <= ratios[0] <= 1.3
    d = [abs(r - 1) for r in ratios]
    assert all(b < a for a, b in zip(d, d[1:]))


def test_complex_eigenfunction_real_alpha_agrees():
    e = ground_eigen(8.0)
    xs = e.xs[::50]
    v = complex_eigenfunction(8.0, e.gamma, xs)
    assert np.max(np.abs(v - e.vs[::50])) < 1e-8
    assert complex_eigenfunction(8.0 + 2j, 1.0, [0.0])[0] == 1.0
    assert abs(complex_eigenfunction(8.0, e.gamma, [1.0, -1.0])).max() < 1e-6


def test_records_ordered():
    recs = spectral_records([3.0, 2.0])
    assert [r.alpha for r in recs] == [3.0, 2.0]
    assert all(r.rho > 0 and r.gamma_empirical > 0 for r in recs)


@pytest.mark.parametrize("alpha,tol", [(0.1, 1e-12), (5.0, 1e-3)])
def test_preconditions(alpha, tol):
    with pytest.raises(ValueError):
        ground_eigen(alpha, tol)
