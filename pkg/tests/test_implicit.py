import cmath
import math

import numpy as np
import pytest

from grushin.implicit import (
    PhiContext, VALIDATED_MAX_ARG, VALIDATED_MIN_ALPHA, d2phi, dphi, phi,
    phi_at_zero_closed_form, phi_derivatives, rho_max_constant, solve_rho,
)
from grushin.newton import NewtonDivergence
from grushin.spectrum import ground_eigen
from grushin.stphase import dphi_asymptotic, dphi_bracket


@pytest.mark.parametrize("alpha", [2, 3, 5, 10, 5 * cmath.exp(1j * math.pi / 8)])
def test_phi_zero_identity(alpha):
    ref = phi_at_zero_closed_form(alpha)
    assert abs(phi(0, PhiContext(alpha)) - ref) <= 1e-10 * 4 * math.pi * math.exp(-alpha.real
                                                                                  if isinstance(alpha, complex) else -alpha)


def test_phi_zero_reference_values():
    assert phi(0, PhiContext(3.0)) == pytest.approx(-0.6256428j, abs=1e-7)
    assert phi(0, PhiContext(10.0)).imag == pytest.approx(-5.7053e-4, rel=1e-4)


@pytest.mark.parametrize("eps", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("angle", [0.0, math.pi / 12])
def test_path_independence(eps, angle):
    ref = phi(0.2 + 0.1j, PhiContext(7.0))
    val = phi(0.2 + 0.1j, PhiContext(7.0, epsilon=eps, ray_angle=angle))
    assert abs(val - ref) < 1e-12


def test_phi_vanishes_at_shooting_root():
    e = ground_eigen(8.0)
    ctx = PhiContext(8.0)
    assert abs(phi(e.rho_tilde, ctx)) < 1e-13 * abs(dphi(0, ctx))


def test_dphi_central_difference():
    ctx = PhiContext(10.0)
    h = 1e-5
    fd = (phi(0.1 + h, ctx) - phi(0.1 - h, ctx)) / (2 * h)
    d = dphi(0.1, ctx)
    assert abs(d - fd) <= 1e-6 * abs(d)
    fd2 = (dphi(0.1 + h, ctx) - dphi(0.1 - h, ctx)) / (2 * h)
    assert abs(d2phi(0.1, ctx) - fd2) <= 1e-6 * abs(d2phi(0.1, ctx))


def test_dphi_continuity():
    ctx = PhiContext(10.0)
    a, b = dphi(-0.01, ctx), dphi(0.01, ctx)
    assert abs(a - b) <= 0.02 * 2 * max(abs(d2phi(r, ctx)) for r in (-0.01, 0, 0.01))


def test_dphi_prefactor_resolved_by_quadrature():
    """Quadrature agrees with the i pi^(3/2) alpha^(-1/2) normalisation, not half of it."""
    for alpha in (25.0, 100.0, 400.0):
        q = dphi(0, PhiContext(alpha))
        corrected = dphi_asymptotic(0, alpha)
        assert corrected == pytest.approx(1j * math.pi ** 1.5 / math.sqrt(alpha))
        assert abs(q - corrected) / abs(q) < 1.0 / alpha
        printed = dphi_asymptotic(0, alpha, printed=True)
        assert abs(q / printed) == pytest.approx(2.0, rel=1.0 / alpha)


def test_dphi_asymptotic_in_rho():
    alpha = 200.0
    for rho in (0.3, -0.4 + 0.2j):
        q = dphi(rho, PhiContext(alpha))
        assert abs(q - dphi_asymptotic(rho, alpha)) / abs(q) < 2.0 / alpha


def test_rho_max():
    r = rho_max_constant()
    # closed form: pi cos x - log2 sin x = A cos(x + atan(log2/pi)), A = hypot(pi, log2)
    x = math.acos(math.pi / 2 / math.hypot(math.pi, math.log(2))) - math.atan(math.log(2) / math.pi)
    assert r == pytest.approx(2 * x / math.pi, abs=1e-14)
    assert 0 < r < 1
    assert dphi_bracket(0) == pytest.approx(math.pi)
    rs = np.linspace(-r, r, 201)
    assert np.all(np.abs([dphi_bracket(x) for x in rs]) >= math.pi / 2 - 1e-12)


def test_bracket_zero():
    from scipy.optimize import brentq
    root = brentq(lambda x: dphi_bracket(x).real, 0.5, 1.0, xtol=1e-15)
    assert root == pytest.approx(2 / math.pi * math.atan(math.pi / math.log(2)), abs=1e-12)
    assert abs(dphi_asymptotic(root, 9.0)) < 1e-12


@pytest.mark.parametrize("alpha", [6.0, 8.0, 12.0, 16.0])
def test_dual_method_eigenvalue(alpha):
    s = solve_rho(PhiContext(alpha))
    assert s.certificate.admissible and s.newton.converged
    assert abs(s.lam.real - ground_eigen(alpha).lam) <= 1e-9
    assert s.imag_noise < 1e-12
    assert s.rho_tilde_real > 0
    assert abs(s.lam - s.alpha - s.gamma * cmath.exp(-s.alpha)) <= 1e-14 * abs(s.lam)


def test_gamma_at_twelve():
    s = solve_rho(PhiContext(12.0))
    assert 0.8 <= s.gamma.real / (4 / math.sqrt(math.pi) * 12 ** 1.5) <= 1.2


def test_newton_trace_quadratic():
    s = solve_rho(PhiContext(6.0))
    r = s.newton.residuals
    A = s.certificate.A
    for a, b in zip(r[:-1], r[1:]):
        assert b <= 1.1 * A / 2 * a * a + 1e-15


def test_complex_alpha_continuity():
    gammas = []
    for th in np.linspace(0, math.pi / 6, 7):
        s = solve_rho(PhiContext(10 * cmath.exp(1j * th)))
        assert s.newton.converged and s.newton.residuals[-1] < 1e-12
        gammas.append(s.gamma / (4 / math.sqrt(math.pi) * s.alpha ** 1.5))
    steps = np.abs(np.diff(gammas))
    assert steps.max() < 0.05


def test_validated_sector_admissible():
    for r in (VALIDATED_MIN_ALPHA, 10.0, 20.0):
        for th in (0.0, VALIDATED_MAX_ARG):
            assert solve_rho(PhiContext(r * cmath.exp(1j * th))).certificate.admissible


def test_small_alpha_root_outside_guard():
    with pytest.raises(NewtonDivergence):
        solve_rho(PhiContext(2.0))


def test_context_validation():
    with pytest.raises(ValueError):
        PhiContext(-1.0)
    with pytest.raises(ValueError):
        PhiContext(10j, ray_angle=0.0)
    with pytest.raises(ValueError):
        phi_derivatives(2.5, PhiContext(5.0))


def test_deterministic():
    ctx = PhiContext(9.0)
    assert phi(0.05, ctx) == phi(0.05, ctx)
