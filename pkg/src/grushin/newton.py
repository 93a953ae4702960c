"""Guarded Newton iteration with an a-priori quadratic convergence certificate.

With ``C1 >= sup|phi''|`` and ``C2 >= sup|1/phi'|`` on the disk of radius
``5R`` around the centre, and ``A = C1 C2^2``, a start point with
``|phi(z0)| <= min(1/(2A), 2R/C2)`` yields a root ``z*`` and the bound
``|z* - z_k| <= 2/(C1 C2) (A |phi(z0)|)^(2^k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Callable

import numpy as np

__all__ = [
    "NewtonConfig",
    "NewtonCertificate",
    "NewtonResult",
    "NewtonError",
    "DerivativeVanishes",
    "NewtonDivergence",
    "make_certificate",
    "certificate_bound",
    "solve_guarded",
    "estimate_constants",
]


@dataclass(frozen=True)
class NewtonConfig:
    R: float
    C1: float
    C2: float
    center: complex = 0j

    def __post_init__(self) -> None:
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError("R must be positive and finite")
        if not (self.C1 >= 0 and math.isfinite(self.C1)):
            raise ValueError("C1 must be finite and non-negative")
        if not (self.C2 > 0 and math.isfinite(self.C2)):
            raise ValueError("C2 must be finite and positive")

    @property
    def A(self) -> float:
        return self.C1 * self.C2 ** 2


@dataclass(frozen=True)
class NewtonCertificate:
    A: float
    eps0: float
    admissible: bool
    C1: float
    C2: float
    R: float

    def bound_at(self, k: int) -> float:
        return certificate_bound(self, k)


@dataclass
class NewtonResult:
    root: complex
    iterates: list[complex]
    residuals: list[float]
    converged: bool
    stop_reason: str = ""
    bounds: list[float] = field(default_factory=list)


class NewtonError(RuntimeError):
    def __init__(self, message: str, iterates=(), residuals=()):
        super().__init__(message)
        self.iterates = list(iterates)
        self.residuals = list(residuals)


class DerivativeVanishes(NewtonError):
    pass


class NewtonDivergence(NewtonError):
    pass


def make_certificate(cfg: NewtonConfig, eps0: float) -> NewtonCertificate:
    A = cfg.A
    limit = 2.0 * cfg.R / cfg.C2
    if A > 0:
        limit = min(limit, 1.0 / (2.0 * A))
    return NewtonCertificate(A, float(eps0), bool(eps0 <= limit), cfg.C1, cfg.C2, cfg.R)


def certificate_bound(cert: NewtonCertificate, k: int) -> float:
    """``2/(C1 C2) (A eps0)^(2^k)``, written as ``2 C2 eps0 (A eps0)^(2^k - 1)``
    so that ``C1 = 0`` (a linear map) is handled."""
    if not cert.admissible:
        raise ValueError("certificate is not admissible")
    if k < 0:
        raise ValueError("k must be non-negative")
    q = cert.A * cert.eps0
    if q == 0.0:
        return 2.0 * cert.C2 * cert.eps0 if k == 0 else 0.0
    # Work in logs: (A eps0)^(2^k) underflows quickly.
    expo = (2.0 ** k - 1.0) * math.log(q)
    if expo < -745.0:
        return 0.0
    return 2.0 * cert.C2 * cert.eps0 * math.exp(expo)


def solve_guarded(phi: Callable[[complex], complex], dphi: Callable[[complex], complex],
                  z0: complex, cfg: NewtonConfig, stop_tol: float = 1e-14,
                  max_iter: int = 50) -> tuple[NewtonResult, NewtonCertificate]:
    """Run ``z <- z - phi(z)/phi'(z)`` from ``z0``.

    Stops when the residual or (for an admissible certificate) the a-priori
    bound drops below ``stop_tol``.  An inadmissible certificate is recorded
    but does not stop the iteration.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    z = complex(z0)
    f = complex(phi(z))
    cert = make_certificate(cfg, abs(f))
    iterates, residuals, bounds = [z], [abs(f)], []
    for k in range(max_iter + 1):
        b = cert.bound_at(k) if cert.admissible else math.inf
        bounds.append(b)
        if residuals[-1] <= stop_tol:
            return NewtonResult(z, iterates, residuals, True, "residual", bounds), cert
        if b <= stop_tol:
            return NewtonResult(z, iterates, residuals, True, "certificate", bounds), cert
        if k == max_iter:
            break
        d = complex(dphi(z))
        if not abs(d) > 1e-300:
            raise DerivativeVanishes(f"derivative vanishes at {z}", iterates, residuals)
        z = z - f / d
        if not (np.isfinite(z) and abs(z - cfg.center) <= 6.0 * cfg.R):
            raise NewtonDivergence(f"iterate {z} left the disk of radius {6 * cfg.R}",
                                   iterates + [z], residuals)
        f = complex(phi(z))
        iterates.append(z)
        residuals.append(abs(f))
    return NewtonResult(z, iterates, residuals, False, "max_iter", bounds), cert


def estimate_constants(dphi: Callable, d2phi: Callable, center: complex, R: float,
                       n_circle: int = 32, n_radial: int = 3) -> tuple[float, float]:
    """Sampled (non-rigorous) estimates of ``sup|phi''|`` and ``sup|1/phi'|`` on
    the disk of radius ``5R``.

    ``dphi``/``d2phi`` are called on scalars.  Points lie on ``n_radial``
    concentric circles plus the centre.
    """
    pts = [complex(center)]
    th = 2.0 * np.pi * np.arange(n_circle) / n_circle
    for j in range(1, n_radial + 1):
        rad = 5.0 * R * j / n_radial
        pts.extend(complex(center) + rad * np.exp(1j * th))
    d1 = np.array([abs(complex(dphi(p))) for p in pts])
    d2 = np.array([abs(complex(d2phi(p))) for p in pts])
    if np.any(d1 == 0):
        raise DerivativeVanishes("derivative vanishes on the sampling disk")
    return float(d2.max()), float((1.0 / d1).max())
