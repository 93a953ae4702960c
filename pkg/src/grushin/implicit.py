"""The implicit eigenvalue equation ``Phi(rho, alpha) = 0`` evaluated by contour quadrature.

    Phi(rho, alpha) = (1 + e^{i pi rho/2}) I_+ - (1 + e^{-i pi rho/2}) I_-,
    I_pm = int_{Gamma_pm} exp(-alpha (1 + s/2)^2 - (1 + rho/2) log s) ds,

with the keyhole paths of :mod:`grushin.contour`.  Its root ``rt`` near 0 gives
the ground-state eigenvalue ``lambda = alpha (1 + rt)`` and
``gamma(alpha) = alpha rt e^alpha``.  Derivatives in ``rho`` only bring down
powers of ``-log(s)/2``, so ``Phi``, ``Phi'`` and ``Phi''`` share one set of
log-moments ``M_k = int (log s)^k exp(...) ds``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import cmath
import math
from functools import lru_cache
from math import comb

import numpy as np
from scipy.optimize import bisect

from .contour import (FactorProfile, integrate, integrate_gaussian_tail_truncation,
                      make_gamma_paths, path_log)
from .newton import (NewtonCertificate, NewtonConfig, NewtonResult, make_certificate,
                     solve_guarded)

__all__ = [
    "PhiContext",
    "ImplicitSolve",
    "phi",
    "dphi",
    "d2phi",
    "phi_derivatives",
    "solve_rho",
    "rho_max_constant",
    "phi_at_zero_closed_form",
    "VALIDATED_MIN_ALPHA",
    "VALIDATED_MAX_ARG",
]

# Range over which the guarded Newton certificate was observed to be
# admissible with sampled constants (see tests/test_implicit.py).
VALIDATED_MIN_ALPHA = 6.0
VALIDATED_MAX_ARG = math.pi / 4

_SECTOR_MARGIN = 0.05


@dataclass(frozen=True)
class PhiContext:
    alpha: complex
    epsilon: float = 0.5
    truncation_radius: float | None = None
    ray_angle: float | None = None
    rel_tol: float = 1e-13

    def __post_init__(self) -> None:
        a = complex(self.alpha)
        object.__setattr__(self, "alpha", a)
        if not a.real > 0:
            raise ValueError("Re(alpha) must be positive")
        if self.ray_angle is None:
            object.__setattr__(self, "ray_angle", cmath.phase(a) / 2.0)
        if not -math.pi / 2 < self.ray_angle < math.pi / 2:
            raise ValueError("ray_angle must lie in (-pi/2, pi/2)")
        if abs(cmath.phase(a) - 2.0 * self.ray_angle) >= math.pi / 2 - _SECTOR_MARGIN:
            raise ValueError("alpha lies outside the sector admitted by ray_angle")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.truncation_radius is None:
            R = integrate_gaussian_tail_truncation(
                a, FactorProfile(ray_angle=self.ray_angle, log_power=2), epsilon=self.epsilon)
            object.__setattr__(self, "truncation_radius", max(R, 2.0 * self.epsilon + 4.0))
        if not self.truncation_radius > self.epsilon:
            raise ValueError("truncation_radius must exceed epsilon")

    @property
    def paths(self):
        return _paths(self.epsilon, self.ray_angle, self.truncation_radius)


@lru_cache(maxsize=64)
def _paths(eps, phi, R):
    return make_gamma_paths(eps, phi, R)


@dataclass
class ImplicitSolve:
    alpha: complex
    rho_tilde: complex
    lam: complex
    gamma: complex
    newton: NewtonResult
    certificate: NewtonCertificate
    constants: str = "empirical"
    C1: float = math.nan
    C2: float = math.nan
    R: float = math.nan

    @property
    def imag_noise(self) -> float:
        """For real alpha: the (spurious) imaginary part of the root."""
        return abs(self.rho_tilde.imag)

    @property
    def rho_tilde_real(self) -> float:
        return self.rho_tilde.real


def _moments(rho: complex, ctx: PhiContext, kmax: int):
    """Log-moments ``M_k`` (k = 0..kmax) along both paths, plus their L1 scale."""
    rho = complex(rho)
    a, ang = ctx.alpha, ctx.ray_angle
    out = {}
    scale = 0.0
    for path, branch in zip(ctx.paths, ("above", "below")):
        def f(s, branch=branch):
            L = path_log(s, branch, ang)
            e = np.exp(-a * (1.0 + 0.5 * s) ** 2 - (1.0 + 0.5 * rho) * L)
            cols = [e]
            for _ in range(kmax):
                cols.append(cols[-1] * L)
            return np.stack(cols, axis=1)
        r = integrate(f, path, rel_tol=ctx.rel_tol)
        out[branch] = r.value
        scale += abs(r.value[0])
    return out, scale


def phi_derivatives(rho: complex, ctx: PhiContext, order: int = 2) -> list[complex]:
    """``[Phi, Phi', ..., Phi^(order)]`` at ``rho``."""
    rho = complex(rho)
    if abs(rho) >= 2:
        raise ValueError("|rho| must be below 2")
    M, _ = _moments(rho, ctx, order)
    ep = cmath.exp(1j * math.pi * rho / 2)
    em = cmath.exp(-1j * math.pi * rho / 2)

    def cp(n):
        return 1.0 + ep if n == 0 else (1j * math.pi / 2) ** n * ep

    def cm(n):
        return 1.0 + em if n == 0 else (-1j * math.pi / 2) ** n * em

    out = []
    for j in range(order + 1):
        total = 0j
        for k in range(j + 1):
            w = comb(j, k) * (-0.5) ** k
            total += w * (cp(j - k) * M["above"][k] - cm(j - k) * M["below"][k])
        out.append(complex(total))
    return out


def phi(rho: complex, ctx: PhiContext) -> complex:
    return phi_derivatives(rho, ctx, 0)[0]


def dphi(rho: complex, ctx: PhiContext) -> complex:
    return phi_derivatives(rho, ctx, 1)[1]


def d2phi(rho: complex, ctx: PhiContext) -> complex:
    return phi_derivatives(rho, ctx, 2)[2]


def phi_at_zero_closed_form(alpha: complex) -> complex:
    return -4j * math.pi * cmath.exp(-complex(alpha))


@lru_cache(maxsize=1)
def rho_max_constant() -> float:
    """Largest ``r`` with ``|pi cos(pi x/2) - log2 sin(pi x/2)| >= pi/2`` on ``[-r, r]``.

    On real ``x`` the expression decreases from ``pi`` at 0 while growing for
    negative ``x``; the binding crossing is the positive root of ``= pi/2``.
    """
    g = lambda x: math.pi * math.cos(math.pi * x / 2) - math.log(2) * math.sin(math.pi * x / 2) \
        - math.pi / 2
    return bisect(g, 0.0, 1.0, xtol=1e-15, maxiter=200)


def solve_rho(ctx: PhiContext, stop_tol: float | None = None, max_iter: int = 20,
              n_circle: int = 12, n_radial: int = 2) -> ImplicitSolve:
    """Guarded Newton from ``rho = 0`` with disk radius ``rho_max / 10``.

    The constants ``C1 = sup|Phi''|`` and ``C2 = sup|1/Phi'|`` on the disk of
    radius ``5R`` are estimated by sampling (labelled ``"empirical"``).
    """
    R = rho_max_constant() / 10.0
    pts = [0j]
    th = 2 * math.pi * np.arange(n_circle) / n_circle
    for j in range(1, n_radial + 1):
        pts.extend(5 * R * j / n_radial * np.exp(1j * th))
    d1, d2 = [], []
    for p in pts:
        _, a1, a2 = phi_derivatives(p, ctx, 2)
        d1.append(abs(a1))
        d2.append(abs(a2))
    C1, C2 = max(d2), 1.0 / min(d1)
    cfg = NewtonConfig(R, C1, C2, 0j)
    _, scale = _moments(0.0, ctx, 0)
    tol = stop_tol if stop_tol is not None else 2e3 * np.finfo(float).eps * scale
    res, cert = solve_guarded(lambda r: phi(r, ctx), lambda r: dphi(r, ctx), 0j, cfg,
                              stop_tol=tol, max_iter=max_iter)
    rt = complex(res.root)
    a = ctx.alpha
    return ImplicitSolve(a, rt, a * (1 + rt), a * rt * cmath.exp(a), res, cert,
                         "empirical", C1, C2, R)
