"""Ground state of ``-d^2/dx^2 + (alpha x)^2`` on ``(-1, 1)`` with Dirichlet ends.

In the variable ``y = sqrt(alpha) x`` the eigenfunction is written
``v = exp(-y^2/2) (1 - rt * u(y))`` with ``rt = lambda/alpha - 1``.  Then ``u``
solves the regular initial value problem

    u'' = 2 y u' + 1 - rt u,      u(0) = u'(0) = 0,

and the boundary condition becomes ``rt * u(sqrt(alpha)) = 1``.  Because ``rt``
enters multiplicatively, it is resolved to full relative precision even when
it is far below machine epsilon relative to ``lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass
import cmath
import math
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

__all__ = [
    "OscillatorEigen",
    "SpectralRecord",
    "BracketError",
    "ground_eigen",
    "l2_norm",
    "agmon_ratio",
    "eigenfunction",
    "complex_eigenfunction",
    "spectral_record",
    "spectral_records",
    "gamma_asymptote",
]

_RTOL = 1e-13


class BracketError(RuntimeError):
    pass


@dataclass(frozen=True)
class OscillatorEigen:
    alpha: float
    lam: float
    mu: float
    rho_tilde: float
    xs: np.ndarray
    vs: np.ndarray
    l2: float

    @property
    def rho(self) -> float:
        """``lambda - alpha``, computed without cancellation."""
        return self.alpha * self.rho_tilde

    @property
    def gamma(self) -> float:
        return self.alpha * self.rho_tilde * math.exp(self.alpha)


@dataclass(frozen=True)
class SpectralRecord:
    alpha: float
    lam: float
    rho: float
    gamma_empirical: float
    l2_norm: float
    agmon_sup: float

    @property
    def gamma_over_asymptote(self) -> float:
        return self.gamma_empirical / gamma_asymptote(self.alpha)


def gamma_asymptote(alpha: float) -> float:
    """Leading behaviour ``4 pi^(-1/2) alpha^(3/2)``."""
    return 4.0 / math.sqrt(math.pi) * alpha ** 1.5


def _rhs(rt: float):
    def f(y, s):
        # s = (u, u', int_0^y exp(-t^2) (1 - rt u)^2 dt)
        w = 1.0 - rt * s[0]
        return [s[1], 2.0 * y * s[1] + 1.0 - rt * s[0], math.exp(-y * y) * w * w]
    return f


def _shoot(rt: float, ymax: float, t_eval=None, dense=False):
    sol = solve_ivp(_rhs(rt), (0.0, ymax), [0.0, 0.0, 0.0], method="DOP853",
                    rtol=_RTOL, atol=_RTOL, t_eval=t_eval, dense_output=dense)
    if sol.status != 0:
        raise RuntimeError(f"shooting integration failed: {sol.message}")
    return sol


def _residual(rt: float, ymax: float) -> float:
    return rt * _shoot(rt, ymax).y[0, -1] - 1.0


def ground_eigen(alpha: float, tol: float = 1e-13, n_samples: int = 2001) -> OscillatorEigen:
    """Shooting solve for the ground state, normalised by ``v(0) = 1``."""
    alpha = float(alpha)
    if not alpha >= 0.5:
        raise ValueError("alpha must be at least 0.5")
    if not 1e-15 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-15, 1e-6]")
    if alpha > 700:
        raise ValueError("alpha too large: exp(alpha) overflows in gamma")
    ymax = math.sqrt(alpha)
    lo = 0.0                      # residual -1 at rt = 0
    hi = 0.5
    searched = []
    while _residual(hi, ymax) < 0.0:
        searched.append(hi)
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            raise BracketError(f"no sign change for rt in [0, {hi}] at alpha={alpha}")
    rt = brentq(lambda r: _residual(r, ymax), lo, hi, xtol=1e-300,
                rtol=max(tol, 4.5e-16), maxiter=400)
    xs = np.linspace(-1.0, 1.0, n_samples)
    ys = np.sqrt(alpha) * np.abs(xs[xs >= 0])
    sol = _shoot(rt, ymax, t_eval=ys)
    w = 1.0 - rt * sol.y[0]
    v_half = np.exp(-0.5 * ys ** 2) * w
    v_half[-1] = 0.0 if abs(v_half[-1]) < 1e-12 else v_half[-1]
    vs = np.concatenate([v_half[1:][::-1], v_half]) if xs[0] < 0 else v_half
    l2 = math.sqrt(2.0 * sol.y[2, -1] / math.sqrt(alpha))
    return OscillatorEigen(alpha, alpha * (1.0 + rt), 1.0 + rt, rt, xs, vs, l2)


def eigenfunction(eig: OscillatorEigen, xs: Sequence[float]) -> np.ndarray:
    """Evaluate ``v_alpha`` at arbitrary points of ``[-1, 1]`` by re-integration."""
    xs = np.asarray(xs, dtype=float)
    if np.any(np.abs(xs) > 1.0):
        raise ValueError("points must lie in [-1, 1]")
    ys = math.sqrt(eig.alpha) * np.abs(xs)
    order = np.argsort(ys, kind="stable")
    uniq, inv = np.unique(ys[order], return_inverse=True)
    sol = _shoot(eig.rho_tilde, max(float(uniq[-1]), 1e-300), t_eval=uniq)
    vals = np.exp(-0.5 * uniq ** 2) * (1.0 - eig.rho_tilde * sol.y[0])
    out = np.empty_like(ys)
    out[order] = vals[inv]
    return out


def l2_norm(eig: OscillatorEigen) -> float:
    """``||v_alpha||`` on ``(-1, 1)``, integrated alongside the shooting ODE."""
    return eig.l2


def agmon_ratio(eig: OscillatorEigen, epsilon: float) -> float:
    """``sup_x exp(alpha (1-eps) x^2 / 2) |v(x)| / alpha^(3/4)`` over the samples."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    x = eig.xs
    ys2 = eig.alpha * x * x
    # exp(alpha(1-eps)x^2/2) v = exp(-eps alpha x^2 / 2) * w with w = v exp(alpha x^2/2).
    w = eig.vs * np.exp(0.5 * ys2)
    weighted = np.exp(-0.5 * epsilon * ys2) * np.abs(w)
    return float(weighted.max() / eig.alpha ** 0.75)


def complex_eigenfunction(alpha: complex, gamma_of_alpha: complex,
                          xs: Sequence[float]) -> np.ndarray:
    """Even solution of ``-v'' + (alpha x)^2 v = lambda v`` with ``v(0) = 1``,
    where ``lambda = alpha + gamma exp(-alpha)``.

    Written as ``v = exp(-alpha x^2 / 2) (1 - rt q(|x|))`` with
    ``rt = gamma exp(-alpha) / alpha`` and ``q'' = 2 alpha x q' + alpha (1 - rt q)``.
    """
    alpha = complex(alpha)
    if not alpha.real > 0:
        raise ValueError("Re(alpha) must be positive")
    rt = complex(gamma_of_alpha) * cmath.exp(-alpha) / alpha
    xs = np.asarray(xs, dtype=float)
    ax = np.abs(xs)
    order = np.argsort(ax, kind="stable")
    uniq, inv = np.unique(ax[order], return_inverse=True)
    xmax = float(uniq[-1])
    if xmax == 0.0:
        return np.ones(xs.shape, dtype=complex)

    def f(x, s):
        return [s[1], 2.0 * alpha * x * s[1] + alpha * (1.0 - rt * s[0])]

    sol = solve_ivp(f, (0.0, xmax), [0j, 0j], method="DOP853", rtol=_RTOL, atol=_RTOL,
                    t_eval=uniq)
    if sol.status != 0 or not np.all(np.isfinite(sol.y)):
        raise FloatingPointError(f"complex shooting blew up at alpha={alpha}")
    vals = np.exp(-0.5 * alpha * uniq ** 2) * (1.0 - rt * sol.y[0])
    out = np.empty(xs.shape, dtype=complex)
    out[order] = vals[inv]
    return out


def spectral_record(alpha: float, epsilon: float = 0.5) -> SpectralRecord:
    eig = ground_eigen(alpha)
    return SpectralRecord(eig.alpha, eig.lam, eig.rho, eig.gamma, eig.l2,
                          agmon_ratio(eig, epsilon))


def spectral_records(alphas: Iterable[float], epsilon: float = 0.5,
                     workers: int | None = None) -> list[SpectralRecord]:
    """Records for each alpha, in input order."""
    alphas = list(alphas)
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(spectral_record, alphas, [epsilon] * len(alphas)))
    return [spectral_record(a, epsilon) for a in alphas]
