import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grushin.regions import DeltaNeighborhood, disk_integral, pacman
from grushin.symbols import (
    ComplexPolynomial, SectorDomain, Symbol, apply_H, apply_H_contour, builtin_symbol,
    calibrate_poisson_prefactor, estimate_operator_constant, fourier, fourier_bound_check,
    grushin_symbol_family, in_continuation_domain, kernel_continuation, kernel_evaluate,
    kernel_series,
    make_kernel_continuation, operator_ratio, seminorm,
)

B = builtin_symbol

CLOSED_FORMS = {
    "exp": lambda z: 1 / (1 - z / math.e),
    "recip": lambda z: -cmath.log(1 - z) / z,
    "one": lambda z: 1 / (1 - z),
    "xexp": lambda z: (z / math.e) / (1 - z / math.e) ** 2,
}


@pytest.mark.parametrize("name", ["one", "z", "z2", "exp", "xexp", "recip"])
def test_builtin_symbols_cauchy_riemann(name):
    g = B(name)
    rng = np.random.default_rng(3)
    z = rng.uniform(0.5, 5, 20) * np.exp(1j * rng.uniform(-1.4, 1.4, 20))
    h = 1e-6
    dx = (g(z + h) - g(z - h)) / (2 * h)
    dy = (g(z + 1j * h) - g(z - 1j * h)) / (2 * h)
    assert np.allclose(dy, 1j * dx, atol=1e-7)


def test_sector_validation():
    with pytest.raises(ValueError):
        SectorDomain(math.pi / 2)
    with pytest.raises(ValueError):
        Symbol(lambda z: z, (SectorDomain(1.0, 2.0), SectorDomain(1.2, 1.0)))


def test_seminorm_examples():
    assert seminorm(B("exp"), math.pi / 4, 0.1) == pytest.approx(1.0, abs=1e-9)
    assert seminorm(B("one"), 1.0, 0.3) == pytest.approx(1.0, abs=1e-9)
    eps = 0.1
    assert seminorm(B("z2"), 1.0, eps) == pytest.approx((2 / eps) ** 2 * math.exp(-2), rel=1e-5)


def test_fourier_examples():
    assert fourier(B("exp"), -2j) == pytest.approx(1 / 3, abs=1e-14)
    assert fourier(B("xexp"), -1j) == pytest.approx(1 / 4, abs=1e-14)
    xi = 1 - 1j
    assert fourier(B("z"), xi) == pytest.approx(-1 / xi ** 2, abs=1e-13)


def test_fourier_rotated_ray_extends():
    # closed form 1/(1 + i xi)^2 beyond the lower half plane
    for xi in (2 + 0.5j, -3 + 1j, 4j * cmath.exp(-1.2j)):
        assert fourier(B("xexp"), xi) == pytest.approx(1 / (1 + 1j * xi) ** 2, abs=1e-12)


def test_fourier_non_decaying():
    with pytest.raises(ValueError):
        fourier(B("exp"), 2j, ray_angle=0.0)


def _xi_samples(seed, n=30):
    rng = np.random.default_rng(seed)
    r = 1 + rng.exponential(5, n)
    th = rng.uniform(-math.pi / 6, math.pi / 6, n)
    return -1j * r * np.exp(1j * th)


def test_fourier_bound_xexp():
    xs = _xi_samples(1)
    for x in xs:
        assert abs(fourier(B("xexp"), x)) * abs(x) ** 2 <= abs(x) ** 2 / abs(1 + 1j * x) ** 2 + 1e-12
    rep = fourier_bound_check(B("xexp"), 1.4, 0.5, xs)
    assert 0 < rep.C_empirical <= rep.C_explicit
    assert rep.eta == pytest.approx(0.25 * math.cos(1.4))


def test_fourier_bound_scaling_and_resampling():
    a = fourier_bound_check(B("xexp"), 1.4, 0.5, _xi_samples(1))
    b = fourier_bound_check(B("xexp").scaled(2), 1.4, 0.5, _xi_samples(1))
    assert b.numerator_max == pytest.approx(2 * a.numerator_max, rel=1e-12)
    assert b.C_empirical == pytest.approx(a.C_empirical, rel=1e-9)
    c = fourier_bound_check(B("xexp"), 1.4, 0.5, _xi_samples(2))
    assert abs(c.C_empirical / a.C_empirical - 1) <= 0.2


def test_poisson_prefactor_calibration():
    assert calibrate_poisson_prefactor() == pytest.approx(1.0, abs=1e-10)
    assert calibrate_poisson_prefactor(-0.3 + 0.7j) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_series_continuation_agreement(name):
    kc = make_kernel_continuation(B(name))
    for th in (0.5, 1.5, 2.5, -2.0, math.pi):
        z = 0.9 * cmath.exp(1j * th)
        series = kernel_series(B(name), z)
        assert abs(series - CLOSED_FORMS[name](z)) < 1e-10
        assert abs(kernel_continuation(kc, z) - series) < 1e-8


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_continuation_outside_disk(name):
    kc = make_kernel_continuation(B(name))
    rng = np.random.default_rng(2024)
    count = 0
    while count < 10:
        z = rng.uniform(1, 3) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        dist = abs(z.imag) if z.real >= 1 else abs(z - 1)
        if dist < 0.2:
            continue
        count += 1
        assert abs(kernel_continuation(kc, z) - CLOSED_FORMS[name](z)) < 1e-6


def test_kernel_examples():
    kc = make_kernel_continuation(B("exp"))
    assert kernel_continuation(kc, 2j) == pytest.approx(1 / (1 - 2j / math.e), abs=1e-12)
    kc = make_kernel_continuation(B("recip"))
    for z in (-3, 1.5j):
        assert kernel_continuation(kc, z) == pytest.approx(-cmath.log(1 - z) / z, abs=1e-12)
    kc = make_kernel_continuation(B("one"))
    assert kernel_continuation(kc, 3j) == pytest.approx(1 / (1 - 3j), abs=1e-15)


def test_kernel_diagnostics_and_cut():
    kc = make_kernel_continuation(B("recip"))
    ev = kernel_evaluate(kc, -2 + 1j)
    assert ev.k_max == 20
    assert ev.accelerated_tail_bound < 1e-12 < ev.raw_tail_bound
    with pytest.raises(ValueError):
        kernel_continuation(kc, 2.0)
    assert kc.n1 == 1 and kc.prefix == (1.0,)


def test_apply_H_examples():
    f = ComplexPolynomial((0, 0, 1, 0, 0, 3))
    assert apply_H(B("one"), f).coefficients == f.coefficients
    assert apply_H(B("z"), f).coefficients == (0, 0, 2, 0, 0, 15)
    g = apply_H(B("exp"), ComplexPolynomial((0,) * 7 + (1,)))
    assert g.coefficients[-1] == pytest.approx(math.exp(-7))
    assert g.degree == 7


def test_polynomial_invariants():
    p = ComplexPolynomial((0, 0, 2, 0, 0))
    assert p.degree == 2 and p.vanishing_order == 1
    assert ComplexPolynomial((1, 2)).vanishing_order == -1
    with pytest.raises(ValueError):
        ComplexPolynomial((1, 2), vanishing_order=0)
    assert p(1 + 1j) == pytest.approx(2 * (1 + 1j) ** 2)
    assert p.eval_compensated(1 + 1j) == pytest.approx(2 * (1 + 1j) ** 2)


def test_disk_l2_matches_quadrature():
    rng = np.random.default_rng(7)
    p = ComplexPolynomial.from_array(rng.standard_normal(31) + 1j * rng.standard_normal(31))
    r = math.exp(-0.5)
    q = disk_integral(lambda z: np.abs(p(z)) ** 2, r, n_r=48, n_theta=96)
    assert p.disk_l2_squared(r) == pytest.approx(q, rel=1e-12)


coeffs = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                  min_size=2, max_size=10)


@settings(max_examples=40, deadline=None)
@given(coeffs)
def test_apply_H_composition(c):
    f = ComplexPolynomial(tuple([0j] + c))
    g1, g2 = B("exp"), B("recip")
    lhs = apply_H(g1, apply_H(g2, f)).as_array()
    rhs = apply_H(g1.times(g2), f).as_array()
    np.testing.assert_allclose(lhs, rhs, rtol=1e-14, atol=0)


def test_apply_H_contour_examples():
    assert apply_H_contour(B("one"), lambda w: w ** 3, 0.5, 2.0) == pytest.approx(0.125, abs=1e-14)
    assert apply_H_contour(B("exp"), lambda w: w ** 2, 0.3, 2.0) == \
        pytest.approx(math.exp(-2) * 0.09, abs=1e-15)
    with pytest.raises(ValueError):
        apply_H_contour(B("one"), lambda w: w, 1.99, 2.0)


def test_apply_H_contour_random_polynomial():
    rng = np.random.default_rng(12)
    a = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    a[0] = 0
    f = ComplexPolynomial.from_array(a)
    for z in (0.5 + 0.3j, -0.9j, 1.2):
        exact = apply_H(B("recip"), f)(z)
        assert abs(apply_H_contour(B("recip"), f, z, 2.0) - exact) <= 1e-8 * abs(exact)


U_PACMAN = pacman((math.pi - 1, math.pi + 1))


def test_delta_neighbourhood_boundary():
    D = DeltaNeighborhood(U_PACMAN, 0.1)
    z = D.boundary_points(500)
    np.testing.assert_allclose(U_PACMAN.distance(z), 0.1, atol=1e-12)


def test_operator_constant_identity_symbol():
    assert estimate_operator_constant(B("one"), U_PACMAN, 0.1, 200, 15, 0) <= 1.0


def test_operator_constant_stable_and_monotone():
    c100 = estimate_operator_constant(B("exp"), U_PACMAN, 0.1, 100, 12, 5)
    c1000 = estimate_operator_constant(B("exp"), U_PACMAN, 0.1, 1000, 12, 5)
    assert 0 < c100 <= c1000 <= 1.3 * c100
    assert estimate_operator_constant(B("exp"), U_PACMAN, 0.1, 100, 12, 5) == c100
    prev = 0.0
    for d in (4, 8, 12, 16):
        c = estimate_operator_constant(B("recip"), U_PACMAN, 0.1, 50, d, 5)
        assert c >= prev
        prev = c


def test_operator_ratio_homogeneous():
    rng = np.random.default_rng(0)
    a = rng.standard_normal(9) + 0j
    a[0] = 0
    f = ComplexPolynomial.from_array(a)
    r1 = operator_ratio(B("exp"), f, U_PACMAN, 0.1)
    r7 = operator_ratio(B("exp"), f.scaled(7), U_PACMAN, 0.1)
    assert r7 == pytest.approx(r1, rel=1e-13)


def test_operator_constant_requires_star_shaped():
    with pytest.raises(ValueError):
        estimate_operator_constant(B("one"), pacman((3, 3.5), r_in=0.5), 0.1, 5, 4)


def test_grushin_symbol_family():
    alphas = np.array([8.0, 12.0, 10 * cmath.exp(0.3j)])
    s0 = grushin_symbol_family(0.0, 0.8)
    g = s0(alphas)
    from grushin.implicit import PhiContext, solve_rho
    rhos = []
    for a, v in zip(alphas, g):
        sol = solve_rho(PhiContext(a))
        rho = sol.lam - sol.alpha
        rhos.append(rho)
        assert v == pytest.approx(cmath.exp(rho * math.log(0.8)), abs=1e-14)
    # |zeta| -> 1: the weight tends to 1, leaving v(x)
    from grushin.spectrum import complex_eigenfunction
    near = grushin_symbol_family(0.4, 1 - 1e-12)(alphas)
    for a, v, sol_rho in zip(alphas, near, rhos):
        sol = solve_rho(PhiContext(a))
        assert v == pytest.approx(complex_eigenfunction(a, sol.gamma, [0.4])[0], abs=1e-12)
    T = 0.5
    c = max(abs(r) for r in rhos)
    s = grushin_symbol_family(0.4, math.exp(-T) * 1.0001j)
    vals = s(alphas)
    for a, v in zip(alphas, vals):
        sol = solve_rho(PhiContext(a))
        assert abs(v) <= math.exp(T * c) * abs(complex_eigenfunction(a, sol.gamma, [0.4])[0])


def test_grushin_symbol_family_range():
    s = grushin_symbol_family(0.2, 0.5)
    with pytest.raises(ValueError):
        s(np.array([3.0]))
    with pytest.raises(ValueError):
        s(np.array([10 * cmath.exp(1.0j)]))
    with pytest.raises(ValueError):
        grushin_symbol_family(0.2, 0.5, validated_alpha_range=(2.0, 0.5))


def test_continuation_domain_predicate():
    kc = make_kernel_continuation(builtin_symbol("exp"))
    assert in_continuation_domain(kc, -3) and in_continuation_domain(kc, 2 + 1j)
    assert not in_continuation_domain(kc, 2.0)
    z = 2.8 + 0.2j
    assert not in_continuation_domain(kc, z)
    with pytest.raises(ValueError):
        kernel_evaluate(kc, z)


@pytest.mark.parametrize("name", ["exp", "recip"])
def test_poisson_prefactor_calibrates_for_each_oracle(name):
    assert abs(calibrate_poisson_prefactor(name=name) - 1) < 1e-10
