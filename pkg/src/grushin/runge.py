"""Explicit polynomial approximation of ``z -> 1/(z - z0)`` on compacts avoiding
the ray ``z0 [1, inf)``.

Two constructions are provided.

``least_squares`` (default) fits a polynomial of degree ``K`` to the target on
boundary samples of the compact.  The fit is done in a discrete orthonormal basis
generated by Arnoldi iteration (Vandermonde with Arnoldi), which stays well
conditioned where the monomial Vandermonde matrix does not.  By the maximum
principle the boundary fit controls the whole compact, and for a compact with
connected complement the best approximations converge geometrically (Walsh).
Monomial coefficients are read off by an FFT of the fitted polynomial on the
unit circle.

``pole_push`` chains the re-expansions

    (z - w)^-(n+1) = sum_{m >= n} C(m, n) (-(w' - w))^(m-n) (z - w')^-(m+1)

along ``w_j = z0 sigma^j`` with truncation ``m <= M`` and expands the result in
powers of ``z``.  The hop matrices are lower triangular, so the chain reproduces
exactly the truncated Laurent expansion of ``1/(z - z0)`` about the last pole
``w_J``.  That series converges only where ``|z - w_J| > |z0 - w_J|``, so the
construction is valid only when the whole compact lies in that exterior.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Protocol

import numpy as np

from .symbols import ComplexPolynomial

__all__ = [
    "PolePushSchedule",
    "RungeApproximant",
    "RungeScheduleError",
    "CompactSampler",
    "METHODS",
    "default_schedule",
    "approximate_pole",
    "build_counterexample",
    "arnoldi_fit",
]

METHODS = ("least_squares", "pole_push")


class CompactSampler(Protocol):
    def distance(self, z) -> np.ndarray: ...
    def boundary_points(self, n: int) -> np.ndarray: ...
    @property
    def radius(self) -> float: ...


class RungeScheduleError(ValueError):
    """The schedule does not keep every expansion convergent on the compact."""


@dataclass(frozen=True)
class PolePushSchedule:
    z0: complex
    sigma: float = 2.0
    hops: int = 4
    terms_per_hop: int = 40
    final_degree: int = 40

    def __post_init__(self) -> None:
        object.__setattr__(self, "z0", complex(self.z0))
        if self.z0 == 0:
            raise ValueError("z0 must be non-zero")
        if not self.sigma > 1:
            raise ValueError("sigma must exceed 1")
        if self.hops < 0 or self.terms_per_hop < 0 or self.final_degree < 0:
            raise ValueError("hops, terms_per_hop and final_degree must be non-negative")

    @property
    def poles(self) -> np.ndarray:
        return self.z0 * self.sigma ** np.arange(self.hops + 1)

    def with_degree(self, K: int, M: int | None = None) -> "PolePushSchedule":
        return PolePushSchedule(self.z0, self.sigma, self.hops,
                                self.terms_per_hop if M is None else M, K)


@dataclass(frozen=True)
class RungeApproximant:
    poly: ComplexPolynomial
    z0: complex
    N: int
    sup_error_on_compact: float
    schedule: PolePushSchedule
    method: str = "least_squares"
    hop_ratios: tuple[float, ...] = ()
    final_ratio: float = float("nan")

    @property
    def cut_direction(self) -> complex:
        return self.z0 / abs(self.z0)

    def target(self, z):
        z = np.asarray(z, dtype=complex)
        return z ** (self.N + 1) / (z - self.z0) if self.N >= 0 else 1.0 / (z - self.z0)


def default_schedule(z0: complex, compact_radius: float, final_degree: int,
                     sigma: float = 2.0, terms_per_hop: int = 40) -> PolePushSchedule:
    """Enough hops that the last pole is beyond four times the compact radius."""
    z0 = complex(z0)
    J = max(0, math.ceil(math.log(4.0 * compact_radius / abs(z0)) / math.log(sigma)))
    if abs(z0) * sigma ** J <= 4.0 * compact_radius:
        J += 1
    return PolePushSchedule(z0, sigma, J, terms_per_hop, final_degree)


# ---------------------------------------------------------------------------
# Least squares in an Arnoldi basis

def _arnoldi(x: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Columns ``q_k(x)`` orthonormal in the discrete mean, ``deg q_k = k``."""
    M = x.size
    Q = np.zeros((M, n + 1), dtype=complex)
    H = np.zeros((n + 1, n), dtype=complex)
    Q[:, 0] = 1.0
    for k in range(n):
        q = x * Q[:, k]
        for _ in range(2):          # classical Gram-Schmidt, reorthogonalized
            h = Q[:, : k + 1].conj().T @ q / M
            q = q - Q[:, : k + 1] @ h
            H[: k + 1, k] += h
        H[k + 1, k] = np.linalg.norm(q) / math.sqrt(M)
        Q[:, k + 1] = q / H[k + 1, k]
    return Q, H


def _arnoldi_eval(d: np.ndarray, H: np.ndarray, s: np.ndarray) -> np.ndarray:
    n = H.shape[1]
    W = np.ones((s.size, n + 1), dtype=complex)
    for k in range(n):
        w = s * W[:, k] - W[:, : k + 1] @ H[: k + 1, k]
        W[:, k + 1] = w / H[k + 1, k]
    return W @ d


def arnoldi_fit(values: np.ndarray, nodes: np.ndarray, K: int) -> np.ndarray:
    """Monomial coefficients of the discrete least-squares polynomial of degree ``K``."""
    nodes = np.asarray(nodes, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if nodes.size < K + 1:
        raise ValueError("need at least K + 1 nodes")
    Q, H = _arnoldi(nodes, K)
    d = np.linalg.lstsq(Q, values, rcond=None)[0]
    nf = 1 << int(math.ceil(math.log2(2 * (K + 1))))
    s = np.exp(2j * math.pi * np.arange(nf) / nf)
    return (np.fft.fft(_arnoldi_eval(d, H, s)) / nf)[: K + 1]


# ---------------------------------------------------------------------------
# Pole pushing

def _hop(c: np.ndarray, d: complex) -> np.ndarray:
    """Coefficients about ``w + d`` of ``sum_n c_n (z - w)^-(n+1)`` (truncated)."""
    M = c.size - 1
    out = np.zeros_like(c)
    row = np.zeros(M + 1, dtype=complex)
    row[0] = 1.0
    out[0] = c[0]
    for m in range(1, M + 1):
        nxt = np.empty_like(row)
        nxt[0] = -d * row[0]
        nxt[1:] = row[:-1] - d * row[1:]
        row = nxt
        out[m] = row[: m + 1] @ c[: m + 1]
    return out


def _power_coefficients(c: np.ndarray, w: complex, K: int) -> np.ndarray:
    """Taylor coefficients at 0 (degree <= K) of ``sum_m c_m (z - w)^-(m+1)``."""
    M = c.size - 1
    m = np.arange(M + 1)
    # (z - w)^-(m+1) = (-1)^(m+1) w^-(m+1) sum_n C(n+m, m) (z/w)^n
    lead = c * (-1.0) ** (m + 1) * np.exp(-(m + 1) * np.log(complex(w)))
    t = np.ones(M + 1, dtype=complex)        # t_{m,n} = C(n+m, m) w^-n
    a = np.empty(K + 1, dtype=complex)
    for n in range(K + 1):
        a[n] = lead @ t
        t = t * (n + m + 1) / ((n + 1) * w)
    return a


def _check_ray(schedule: PolePushSchedule, compact, margin: float) -> None:
    if compact.distance(np.array([schedule.z0]))[0] <= margin:
        raise RungeScheduleError("z0 lies in or near the compact")
    far = max(schedule.sigma ** schedule.hops, 4.0 * compact.radius / abs(schedule.z0), 1.0)
    ray = schedule.z0 * np.linspace(1.0, far, 4000)
    if np.any(compact.distance(ray) <= margin):
        raise RungeScheduleError("the compact meets the ray z0 [1, inf)")


def _check_pole_push(schedule: PolePushSchedule, compact):
    w = schedule.poles
    ratios = []
    for j in range(schedule.hops):
        d = abs(w[j + 1] - w[j])
        ratios.append(float(d / compact.distance(np.array([w[j + 1]]))[0]))
    if any(r >= 1 for r in ratios):
        raise RungeScheduleError(f"hop expansion ratio {max(ratios):.3g} >= 1; refine the schedule")
    laurent = float(abs(schedule.z0 - w[-1]) / compact.distance(np.array([w[-1]]))[0])
    if laurent >= 1:
        raise RungeScheduleError(
            f"chained expansion ratio |z0 - w_J| / dist(w_J, compact) = {laurent:.3g} >= 1")
    final = float(compact.radius / abs(w[-1]))
    if final >= 1:
        raise RungeScheduleError("the compact is not inside |z| < |w_J|; add hops")
    return tuple(ratios) + (laurent,), final


def _sample_count(K: int, n_samples: int | None) -> int:
    return n_samples or max(16 * (K + 1), 2000)


def approximate_pole(schedule: PolePushSchedule, compact: CompactSampler,
                     margin: float = 1e-3, n_samples: int | None = None,
                     method: str = "least_squares") -> RungeApproximant:
    """Polynomial of degree ``final_degree`` approximating ``1/(z - z0)`` on the compact."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    _check_ray(schedule, compact, margin)
    K = schedule.final_degree
    if method == "pole_push":
        ratios, final = _check_pole_push(schedule, compact)
        w = schedule.poles
        c = np.zeros(schedule.terms_per_hop + 1, dtype=complex)
        c[0] = 1.0
        for j in range(schedule.hops):
            c = _hop(c, w[j + 1] - w[j])
        a = _power_coefficients(c, w[-1], K)
    else:
        ratios, final = (), float("nan")
        nodes = compact.boundary_points(_sample_count(K, n_samples))
        a = arnoldi_fit(1.0 / (nodes - schedule.z0), nodes, K)
    poly = ComplexPolynomial(tuple(a))
    err = _sup_error(poly, schedule.z0, -1, compact, K, n_samples)
    return RungeApproximant(poly, schedule.z0, -1, err, schedule, method, ratios, final)


def _sup_error(poly: ComplexPolynomial, z0: complex, N: int, compact, K: int,
               n_samples: int | None) -> float:
    # A different sample count than the fit, so the check uses fresh points.
    z = compact.boundary_points(3 * _sample_count(K, n_samples) + 1)
    target = 1.0 / (z - z0) if N < 0 else z ** (N + 1) / (z - z0)
    return float(np.max(np.abs(poly(z) - target)))


def build_counterexample(z0: complex, N: int, schedule: PolePushSchedule,
                         compact: CompactSampler, margin: float = 1e-3,
                         n_samples: int | None = None,
                         method: str = "least_squares") -> RungeApproximant:
    """``z^(N+1)`` times the pole approximant; vanishes to order ``N`` at 0."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if complex(z0) != schedule.z0:
        raise ValueError("schedule must start at z0")
    base = approximate_pole(schedule, compact, margin, n_samples, method)
    a = (0j,) * (N + 1) + base.poly.coefficients
    poly = ComplexPolynomial(a, N)
    err = _sup_error(poly, schedule.z0, N, compact, schedule.final_degree, n_samples)
    return RungeApproximant(poly, schedule.z0, N, err, schedule, method,
                            base.hop_ratios, base.final_ratio)
