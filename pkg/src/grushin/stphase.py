"""Stationary-phase expansions for Gaussian weights.

``gaussian_expand`` builds the partial sums of
``int exp(-alpha x^2 / 2) u(x) dx ~ sum_k sqrt(2 pi) u^(2k)(0) / (2^k k! alpha^(k+1/2))``
together with the remainder scale
``C / (2^N N! |alpha|^(N+1/2)) * sum_{j=0..2} ||u^(2N+j)||_1``.
The constant ``C`` is not known in closed form; :func:`fit_remainder_constant`
calibrates it on functions with known integrals.
"""

from __future__ import annotations

from dataclasses import dataclass
import cmath
import math
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial import hermite as H
from numpy.polynomial import polynomial as P

__all__ = [
    "GaussianExpansion",
    "gaussian_expand",
    "contour_leading_term",
    "dphi_asymptotic",
    "dphi_bracket",
    "TestFunction",
    "gaussian_test_function",
    "fit_remainder_constant",
]


@dataclass(frozen=True)
class GaussianExpansion:
    alpha: complex
    N: int
    terms: tuple[complex, ...]
    remainder_bound: float
    C: float = 1.0

    @property
    def partial_sum(self) -> complex:
        return complex(math.fsum(t.real for t in self.terms),
                       math.fsum(t.imag for t in self.terms))


def _check_alpha(alpha: complex) -> complex:
    alpha = complex(alpha)
    if alpha == 0 or alpha.real < 0:
        raise ValueError("alpha must be non-zero with Re(alpha) >= 0")
    return alpha


def gaussian_expand(u_derivs_at_0: Sequence[complex],
                    deriv_l1_norms: Sequence[float] | Mapping[int, float],
                    alpha: complex, N: int, C: float = 1.0) -> GaussianExpansion:
    """Partial sum of ``N`` terms and its remainder scale.

    ``u_derivs_at_0[j]`` is ``u^(j)(0)``; ``deriv_l1_norms`` maps a derivative
    order to its L1 norm (a sequence indexed by order, or a dict) and must cover
    orders ``2N .. 2N+2``.
    """
    alpha = _check_alpha(alpha)
    if N < 1:
        raise ValueError("N must be at least 1")
    if len(u_derivs_at_0) < 2 * N - 1:
        raise ValueError(f"need derivatives up to order {2 * N - 2}")
    log_a = cmath.log(alpha)
    terms = []
    for k in range(N):
        denom = 2.0 ** k * math.factorial(k) * cmath.exp((k + 0.5) * log_a)
        terms.append(math.sqrt(2 * math.pi) * complex(u_derivs_at_0[2 * k]) / denom)
    norm_sum = sum(float(deriv_l1_norms[2 * N + j]) for j in range(3))
    bound = C * norm_sum / (2.0 ** N * math.factorial(N) * abs(alpha) ** (N + 0.5))
    return GaussianExpansion(alpha, N, tuple(terms), float(bound), float(C))


def _log_minus_two(branch: str) -> complex:
    if branch == "above":
        return complex(math.log(2.0), math.pi)
    if branch == "below":
        return complex(math.log(2.0), -math.pi)
    raise ValueError("branch must be 'above' or 'below'")


def contour_leading_term(rho: complex, alpha: complex, m: int, branch: str) -> complex:
    """Leading stationary-phase value ``2 sqrt(pi/alpha) f(-2)`` of
    ``int exp(-alpha (1 + s/2)^2) f(s) ds`` along the keyhole path, for
    ``f(s) = s^-(1 + rho/2) (log s)^m``."""
    if m not in (0, 1, 2):
        raise ValueError("m must be 0, 1 or 2")
    if abs(complex(rho)) > 1:
        raise ValueError("|rho| must not exceed 1")
    alpha = _check_alpha(alpha)
    L = _log_minus_two(branch)
    f = cmath.exp(-(1 + complex(rho) / 2) * L) * L ** m
    return 2.0 * cmath.sqrt(math.pi / alpha) * f


def dphi_bracket(rho: complex) -> complex:
    """``pi cos(pi rho / 2) - log(2) sin(pi rho / 2)``."""
    x = math.pi * complex(rho) / 2
    return math.pi * cmath.cos(x) - math.log(2.0) * cmath.sin(x)


def dphi_asymptotic(rho: complex, alpha: complex, printed: bool = False) -> complex:
    """Leading asymptotics of the rho-derivative of the implicit function.

    The default uses the prefactor confirmed by quadrature,
    ``i sqrt(pi/alpha) 2^-(rho/2) (pi cos - log2 sin)``.  ``printed=True`` gives
    the variant with an extra factor 1/2, ``i sqrt(pi/alpha) 2^-(1+rho/2) (...)``.
    """
    alpha = _check_alpha(alpha)
    rho = complex(rho)
    expo = -(1 + rho / 2) if printed else -rho / 2
    return 1j * cmath.sqrt(math.pi / alpha) * 2.0 ** expo * dphi_bracket(rho)


@dataclass(frozen=True)
class TestFunction:
    """A Gaussian test function with exact derivative data and integrals."""

    name: str
    derivs_at_0: tuple[float, ...]
    l1_norms: Mapping[int, float]

    def exact_integral(self, alpha: complex) -> complex:
        a = complex(alpha) / 2 + 1.0
        if self.name == "gauss":
            return cmath.sqrt(math.pi / a)
        return cmath.sqrt(math.pi) / (2.0 * cmath.exp(1.5 * cmath.log(a)))


def _derivative_poly(name: str, n: int) -> np.ndarray:
    """Coefficients (power basis) of ``p`` with ``u^(n)(x) = p(x) exp(-x^2)``."""
    def gauss_poly(j: int) -> np.ndarray:
        c = np.zeros(j + 1)
        c[j] = 1.0
        return (-1) ** j * H.herm2poly(c)
    if name == "gauss":
        return gauss_poly(n)
    # Leibniz rule for x^2 exp(-x^2).
    out = P.polymul([0, 0, 1], gauss_poly(n))
    if n >= 1:
        out = P.polyadd(out, n * P.polymul([0, 2], gauss_poly(n - 1)))
    if n >= 2:
        out = P.polyadd(out, n * (n - 1) / 2 * 2 * gauss_poly(n - 2))
    return out


def _l1_norm(poly: np.ndarray) -> float:
    from scipy.integrate import quad

    roots = np.sort(np.real(P.polyroots(poly)[np.abs(np.imag(P.polyroots(poly))) < 1e-9])) \
        if len(poly) > 1 else np.array([])
    f = lambda x: abs(P.polyval(x, poly)) * math.exp(-x * x)
    edges = np.concatenate([[-14.0], roots[(roots > -14) & (roots < 14)], [14.0]])
    return math.fsum(quad(f, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
                     for a, b in zip(edges[:-1], edges[1:]))


def gaussian_test_function(name: str, max_order: int = 12) -> TestFunction:
    """``"gauss"`` is ``exp(-x^2)``; ``"x2gauss"`` is ``x^2 exp(-x^2)``."""
    if name not in ("gauss", "x2gauss"):
        raise ValueError("unknown test function")
    derivs = tuple(float(_derivative_poly(name, n)[0]) for n in range(max_order + 1))
    norms = {n: _l1_norm(_derivative_poly(name, n)) for n in range(max_order + 1)}
    return TestFunction(name, derivs, norms)


def fit_remainder_constant(functions: Sequence[TestFunction], alphas: Sequence[complex],
                           Ns: Sequence[int], include_limit: bool = True) -> float:
    """Smallest ``C`` with ``|exact - partial sum| <= remainder_bound`` on the grid.

    With ``include_limit`` the ``alpha -> +inf`` value of the ratio is added;
    there the error is dominated by the first omitted term, giving
    ``sqrt(2 pi) |u^(2N)(0)| / sum_j ||u^(2N+j)||_1``.
    """
    worst = 0.0
    for u in functions:
        if include_limit:
            for N in Ns:
                norms = sum(u.l1_norms[2 * N + j] for j in range(3))
                worst = max(worst, math.sqrt(2 * math.pi) * abs(u.derivs_at_0[2 * N]) / norms)
        for a in alphas:
            for N in Ns:
                e = gaussian_expand(u.derivs_at_0, u.l1_norms, a, N)
                err = abs(u.exact_integral(a) - e.partial_sum)
                worst = max(worst, err / e.remainder_bound)
    return worst
