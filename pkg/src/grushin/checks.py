"""Acceptance checks: each returns a :class:`CheckResult` with a one-line detail."""

from __future__ import annotations

from dataclasses import dataclass
import cmath
import math
import time
from typing import Callable

import numpy as np

__all__ = ["CheckResult", "CHECKS", "run_check", "run_checks", "newton_test_problems"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    time_limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _eigenvalue_asymptotics() -> tuple[bool, str]:
    from .spectrum import gamma_asymptote, ground_eigen
    ratios = [ground_eigen(n).gamma / gamma_asymptote(n) for n in range(8, 21)]
    dev = [abs(r - 1) for r in ratios]
    mono = all(b < a for a, b in zip(dev, dev[1:]))
    ok = 0.7 <= ratios[0] <= 1.3 and mono and dev[-1] <= 0.15
    return ok, f"ratio(8)={ratios[0]:.4f}, |ratio(20)-1|={dev[-1]:.4f}, monotone={mono}"


def _dual_method() -> tuple[bool, str]:
    from .implicit import PhiContext, solve_rho
    from .spectrum import ground_eigen
    worst = 0.0
    for a in (6.0, 8.0, 12.0, 16.0):
        s = solve_rho(PhiContext(a))
        worst = max(worst, abs(s.lam - ground_eigen(a).lam))
    return worst <= 1e-8, f"max |lambda_implicit - lambda_shooting| = {worst:.3g}"


def _closed_form_identity() -> tuple[bool, str]:
    from .implicit import PhiContext, phi, phi_at_zero_closed_form
    real = max(abs(phi(0, PhiContext(a)) / phi_at_zero_closed_form(a) - 1)
               for a in (2.0, 3.0, 5.0, 10.0))
    a = 5 * cmath.exp(1j * math.pi / 8)
    cplx = abs(phi(0, PhiContext(a)) / phi_at_zero_closed_form(a) - 1)
    return real <= 1e-9 and cplx <= 1e-6, f"real alpha rel err {real:.3g}, complex {cplx:.3g}"


def _lower_bounds() -> tuple[bool, str]:
    from .spectrum import ground_eigen
    eig = [ground_eigen(n) for n in range(1, 41)]
    # lambda - alpha = alpha * rho_tilde drops below the ulp of alpha near alpha = 40,
    # so the comparison uses the stored excess rather than the rounded eigenvalue.
    above = all(e.rho_tilde > 0 and e.lam >= e.alpha for e in eig)
    vals = np.array([e.alpha ** 0.25 * e.l2 for e in eig])
    ok = above and vals.min() >= 0.5 * vals[-1] and vals.min() > 0
    return ok, (f"lambda > alpha for all {len(eig)}: {above}; min n^(1/4)|v_n| = {vals.min():.4f},"
                f" value at 40 = {vals[-1]:.4f}")


def _kernel_oracles() -> tuple[bool, str]:
    from .symbols import (builtin_symbol, calibrate_poisson_prefactor, kernel_continuation,
                          make_kernel_continuation)
    closed = {"exp": lambda z: 1 / (1 - z / math.e), "recip": lambda z: -cmath.log(1 - z) / z}
    rng = np.random.default_rng(20)
    pts = []
    while len(pts) < 10:
        z = complex(rng.uniform(0.2, 3.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi)))
        off_cut = abs(z.imag) >= 0.2 or z.real < 0.8
        if off_cut:
            pts.append(z)
    outside = sum(abs(z) > 1 for z in pts)
    worst = 0.0
    for name, f in closed.items():
        kc = make_kernel_continuation(builtin_symbol(name))
        for z in pts:
            worst = max(worst, abs(kernel_continuation(kc, z) - f(z)))
    cal = [calibrate_poisson_prefactor(name=n) for n in closed]
    spread = max(abs(c - 1) for c in cal)
    ok = worst <= 1e-6 and outside >= 1 and spread <= 1e-8
    return ok, (f"max error {worst:.3g} over 10 points ({outside} with |zeta|>1);"
                f" prefactor {cal[0]:.15f} / {cal[1]:.15f}")


def _stationary_phase() -> tuple[bool, str]:
    from .stphase import fit_remainder_constant, gaussian_expand, gaussian_test_function
    g = gaussian_test_function("gauss")
    x2 = gaussian_test_function("x2gauss")
    C = fit_remainder_constant([g, x2], [1, 4, 16, 4j, 4 + 4j], [1, 2, 3])
    alphas = [4.0, 8.0, 16.0]
    violations, slopes = 0, []
    for N in (1, 2, 3):
        errs = []
        for a in alphas:
            e = gaussian_expand(g.derivs_at_0, g.l1_norms, a, N, C)
            err = abs(g.exact_integral(a) - e.partial_sum)
            violations += err > e.remainder_bound
            errs.append(err)
        slopes.append(float(np.polyfit(np.log(alphas), np.log(errs), 1)[0]))
    slope_ok = all(abs(s + N + 0.5) <= 0.3 for s, N in zip(slopes, (1, 2, 3)))
    return violations == 0 and slope_ok, (
        f"C={C:.4f}, violations={violations}, slopes " + ", ".join(f"{s:.3f}" for s in slopes))


def newton_test_problems(count: int, seed: int):
    """Seeded problems ``phi(z) = (z - r)(1 + kappa (z - r))`` with admissible constants.

    On the disk of radius ``5R`` about 0, ``|phi''| = 2|kappa|`` and
    ``|phi'| >= 1 - 2|kappa|(5R + |r|)``, which gives ``C1`` and ``C2`` exactly.
    """
    from .newton import NewtonConfig
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        R = rng.uniform(0.05, 1.0)
        r = complex(*rng.uniform(-R, R, 2)) * 0.3
        kappa = complex(*rng.normal(size=2)) * 0.02 / (5 * R + abs(r))
        C1 = 2 * abs(kappa)
        C2 = 1 / (1 - 2 * abs(kappa) * (5 * R + abs(r)))
        out.append(((lambda z, r=r, k=kappa: (z - r) * (1 + k * (z - r))),
                    (lambda z, r=r, k=kappa: 1 + 2 * k * (z - r)), r, NewtonConfig(R, C1, C2)))
    return out


def _newton_certificate() -> tuple[bool, str]:
    from .newton import solve_guarded
    violations, recorded, admissible = 0, 0, 0
    for phi, dphi, r, cfg in newton_test_problems(20, 7):
        res, cert = solve_guarded(phi, dphi, 0.0, cfg, stop_tol=1e-300, max_iter=8)
        admissible += cert.admissible
        for k, z in enumerate(res.iterates):
            recorded += 1
            slack = 4 * np.finfo(float).eps * max(abs(r), 1e-300)
            violations += abs(r - z) > cert.bound_at(k) + slack
    return violations == 0 and admissible == 20, (
        f"{admissible}/20 admissible, {recorded} recorded iterates, {violations} violations")


def _toy_falsification() -> tuple[bool, str]:
    from .falsifier import default_config, sweep
    reps = sweep(default_config("toy"))
    growth = reps[-1].ratio / reps[0].ratio
    rhs = [r.rhs for r in reps]
    var = max(rhs) / min(rhs)
    return growth >= 100 and var < 10, (
        f"K={reps[0].degree}..{reps[-1].degree}, ratio growth {growth:.4g}, RHS variation {var:.3g}")


def _strip_falsification() -> tuple[bool, str]:
    from .falsifier import (blow_up_factor, bruteforce_rhs, counterexample, default_config,
                            gram_rhs, modal_coefficients, sweep)
    cfg = default_config("strip")
    reps = sweep(cfg)
    growth = blow_up_factor(reps)
    a, _ = modal_coefficients(cfg, counterexample(cfg, 3))
    n_modes = int(np.count_nonzero(a))
    g, b = gram_rhs(cfg, a), bruteforce_rhs(cfg, a)
    rel = abs(g - b) / abs(b)
    return growth >= 100 and rel <= 1e-6 and n_modes <= 8, (
        f"modes {cfg.n_min}..{cfg.n_max}, ratio growth {growth:.4g}, "
        f"Gram vs tensor quadrature rel {rel:.3g} ({n_modes} modes)")


def _operator_constant() -> tuple[bool, str]:
    from .regions import pacman
    from .symbols import builtin_symbol, estimate_operator_constant
    U = pacman((math.pi - 1, math.pi + 1))
    c100 = estimate_operator_constant(builtin_symbol("exp"), U, 0.1, 100, 12, 5)
    c1000 = estimate_operator_constant(builtin_symbol("exp"), U, 0.1, 1000, 12, 5)
    one = estimate_operator_constant(builtin_symbol("one"), U, 0.1, 200, 15, 0)
    ok = abs(c1000 / c100 - 1) <= 0.3 and one <= 1.0
    return ok, f"exp: {c100:.4f} (100 trials) vs {c1000:.4f} (1000); identity: {one:.4f}"


def _agmon() -> tuple[bool, str]:
    from .spectrum import agmon_ratio, ground_eigen
    alphas = [5.0, 10.0, 20.0, 40.0]
    r = [agmon_ratio(ground_eigen(a), 0.5) for a in alphas]
    spread = max(r) / min(r)
    slope = float(np.polyfit(np.log(alphas), np.log(r), 1)[0])
    return spread <= 5 and slope <= 0.1, f"max/min {spread:.3f}, log-log slope {slope:.3f}"


CHECKS: dict[str, tuple[Callable[[], tuple[bool, str]], float | None]] = {
    "eigenvalue_asymptotics": (_eigenvalue_asymptotics, 30.0),
    "dual_method_agreement": (_dual_method, 60.0),
    "closed_form_identity": (_closed_form_identity, None),
    "lower_bounds": (_lower_bounds, None),
    "kernel_continuation": (_kernel_oracles, None),
    "stationary_phase": (_stationary_phase, None),
    "newton_certificate": (_newton_certificate, None),
    "toy_falsification": (_toy_falsification, 120.0),
    "strip_falsification": (_strip_falsification, 300.0),
    "operator_constant": (_operator_constant, None),
    "agmon_boundedness": (_agmon, None),
}


def run_check(name: str) -> CheckResult:
    fn, limit = CHECKS[name]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:       # a crash is a failed criterion, not a crashed suite
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok, detail = False, f"{detail}; exceeded {limit:.0f}s"
    return CheckResult(name, bool(ok), detail, dt, limit)


def run_checks(names=None) -> list[CheckResult]:
    """Run the named checks (all by default) in their declared order."""
    names = list(CHECKS) if names is None else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    return [run_check(n) for n in names]
