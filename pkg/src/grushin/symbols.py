"""Symbols, their kernels ``K_gamma(z) = sum gamma(n) z^n`` and the operators ``H_gamma``.

A symbol is a function holomorphic with sub-exponential growth on a family of
sectors ``U_{theta, r(theta)} = {|z| > r(theta), |arg z| < theta}``.  The
kernel is continued beyond the unit disk by writing

    K_gamma(zeta) = sum_{n_start <= n < n1} gamma(n) zeta^n
                    + gamma(n1) zeta^n1 / (1 - zeta) + zeta^n1 K_gt(zeta),

with ``gt(z) = gamma(z + n1) - gamma(n1)`` and the Poisson sum
``K_gt(zeta) = P sum_k gt^(i log zeta + 2 pi k)``, ``P`` the Poisson prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import cmath
import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .contour import QuadratureError, integrate, line
from .regions import AngularRegion, DeltaNeighborhood

__all__ = [
    "SectorDomain",
    "Symbol",
    "builtin_symbol",
    "shifted_symbol",
    "seminorm",
    "fourier",
    "FourierBoundReport",
    "fourier_bound_check",
    "KernelContinuation",
    "KernelEvaluation",
    "KernelTailError",
    "make_kernel_continuation",
    "kernel_continuation",
    "kernel_evaluate",
    "in_continuation_domain",
    "kernel_series",
    "calibrate_poisson_prefactor",
    "POISSON_PREFACTOR",
    "ComplexPolynomial",
    "apply_H",
    "apply_H_contour",
    "estimate_operator_constant",
    "operator_ratio",
    "grushin_symbol_family",
]

# Fixed by calibrate_poisson_prefactor against the geometric series of exp(-n).
POISSON_PREFACTOR = 1.0


@dataclass(frozen=True)
class SectorDomain:
    theta: float
    r: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < math.pi / 2:
            raise ValueError("theta must lie in (0, pi/2)")
        if not self.r >= 0.0:
            raise ValueError("r must be non-negative")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (np.abs(z) > self.r) & (np.abs(np.angle(z)) < self.theta)


@dataclass(frozen=True)
class Symbol:
    eval: Callable[[np.ndarray], np.ndarray]
    sectors: tuple[SectorDomain, ...]
    label: str = ""

    def __post_init__(self) -> None:
        secs = tuple(sorted(self.sectors, key=lambda s: s.theta))
        if not secs:
            raise ValueError("a symbol needs at least one sector")
        if any(b.r < a.r for a, b in zip(secs, secs[1:])):
            raise ValueError("r(theta) must be non-decreasing")
        object.__setattr__(self, "sectors", secs)

    def __call__(self, z):
        return self.eval(np.asarray(z, dtype=complex))

    @property
    def r0(self) -> float:
        return self.sectors[0].r

    def sector(self, theta: float) -> SectorDomain:
        """Smallest declared sector with opening at least ``theta``."""
        for s in self.sectors:
            if s.theta >= theta - 1e-15:
                return s
        raise ValueError(f"no declared sector with theta >= {theta}")

    def scaled(self, c: complex) -> "Symbol":
        f = self.eval
        return Symbol(lambda z: c * f(z), self.sectors, f"{c}*{self.label}")

    def times(self, other: "Symbol") -> "Symbol":
        f, g = self.eval, other.eval
        secs = tuple(SectorDomain(s.theta, max(s.r, other.sector(s.theta).r))
                     for s in self.sectors if s.theta <= other.sectors[-1].theta)
        return Symbol(lambda z: f(z) * g(z), secs, f"{self.label}*{other.label}")


_WIDE = (SectorDomain(math.pi / 4), SectorDomain(1.4), SectorDomain(1.5))


def builtin_symbol(name: str) -> Symbol:
    """Named test symbols: ``one``, ``z``, ``z2``, ``exp`` (e^-z), ``xexp`` (z e^-z),
    ``recip`` (1/(z+1))."""
    table = {
        "one": lambda z: np.ones_like(z),
        "z": lambda z: z,
        "z2": lambda z: z * z,
        "exp": lambda z: np.exp(-z),
        "xexp": lambda z: z * np.exp(-z),
        "recip": lambda z: 1.0 / (z + 1.0),
    }
    if name not in table:
        raise ValueError(f"unknown symbol {name!r}")
    return Symbol(table[name], _WIDE, name)


def shifted_symbol(gamma: Symbol, n1: int) -> Symbol:
    """``z -> gamma(z + n1) - gamma(n1)``, holomorphic on the sectors with ``r = 0``."""
    g = gamma.eval
    c = complex(g(np.array([complex(n1)]))[0])
    secs = tuple(SectorDomain(s.theta, 0.0) for s in gamma.sectors if s.r < n1)
    if not secs:
        raise ValueError("n1 must exceed r(theta) for some declared sector")
    return Symbol(lambda z: g(z + n1) - c, secs, f"{gamma.label}~{n1}")


def seminorm(gamma: Symbol, theta: float, eps: float, sample_density: int = 64) -> float:
    """Sampled ``sup |gamma(z) e^{-eps |z|}|`` over ``U_{theta, r(theta)}`` (a lower bound).

    Rays at several angles up to ``theta`` are sampled on ``[r(theta), Rmax]``;
    ``Rmax`` doubles until the sampled profile peaks well inside and decreases
    towards the end.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    r0 = gamma.sector(theta).r
    th = np.linspace(-theta, theta, 9) * (1 - 1e-12)
    Rmax = max(2.0 * r0, r0 + 4.0 / eps, 1.0)
    n = max(int(sample_density), 16) * 8
    for _ in range(40):
        rr = r0 + np.concatenate([np.geomspace(1e-12, 1.0, n // 4), np.linspace(1.0, Rmax - r0, n)])
        z = rr[:, None] * np.exp(1j * th)[None, :]
        with np.errstate(over="ignore", invalid="ignore"):
            v = np.abs(gamma(z)) * np.exp(-eps * np.abs(z))
        v = np.where(np.isfinite(v), v, np.inf)
        prof = v.max(axis=1)
        peak = int(np.argmax(prof))
        tail = prof[-n // 4:]
        if np.isfinite(prof).all() and rr[peak] < 0.5 * Rmax and np.all(np.diff(tail) <= 0):
            return float(prof[peak])
        Rmax *= 2.0
    raise ValueError("symbol does not appear to have sub-exponential growth")


def _ray_angle_for(xi: complex, theta_max: float) -> float:
    w = math.remainder(cmath.phase(xi) + math.pi / 2, 2 * math.pi)
    return float(np.clip(w / 2, -theta_max, theta_max))


def fourier(gamma_shifted: Symbol, xi: complex, ray_angle: float | None = None,
            rel_tol: float = 1e-12) -> complex:
    """``int_0^inf gamma(x) e^{-i x xi} dx`` along the ray ``e^{-i ray_angle} [0, inf)``."""
    xi = complex(xi)
    tmax = gamma_shifted.sectors[-1].theta * (1 - 1e-9)
    if ray_angle is None:
        ray_angle = _ray_angle_for(xi, tmax)
    if abs(ray_angle) > tmax:
        raise ValueError("ray leaves the declared sectors")
    u = cmath.exp(-1j * ray_angle)
    kappa = (1j * u * xi).real          # decay rate of |e^{-i t u xi}|
    if not kappa > 0:
        raise ValueError("e^{-i z xi} does not decay along the chosen ray")
    g = gamma_shifted.eval
    L, peak = _truncation_length(lambda t: np.abs(g(t * u)), kappa)
    if peak == 0.0:
        return 0j
    f = lambda z: g(z) * np.exp(-1j * z * xi)
    try:
        r = integrate(f, line(0j, L * u), rel_tol=rel_tol, abs_tol=1e-17 * peak / kappa)
    except QuadratureError as exc:
        r = exc.best
    return complex(r.value)


def _truncation_length(mag: Callable, kappa: float, floor: float = 1e-17):
    """Length where ``mag(t) e^{-kappa t}`` has dropped below ``floor`` times its peak."""
    t = np.concatenate([np.linspace(0.0, 1.0, 33)[1:], np.geomspace(1.0, 1e6, 400)[1:]]) / kappa
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        v = mag(t.astype(complex)) * np.exp(-kappa * t)
    v = np.where(np.isfinite(v), v, np.inf)
    peak = float(np.max(v[np.isfinite(v)], initial=0.0))
    if peak == 0.0:
        return 1.0 / kappa, 0.0
    ok = v < floor * peak
    # first index after which every sample is negligible
    bad = np.nonzero(~ok)[0]
    if bad.size == 0:
        return float(t[0]), peak
    last = bad[-1]
    if last + 1 >= t.size:
        raise ValueError("integrand does not decay along the ray")
    return float(t[last + 1]), peak


@dataclass(frozen=True)
class FourierBoundReport:
    C_empirical: float
    numerator_max: float
    p_small: float
    p_eta: float
    eta: float
    C_explicit: float
    n_samples: int


def _p_small(gamma: Symbol, theta0: float, n: int = 64) -> float:
    r = np.geomspace(1e-6, 1.0, n)
    th = np.linspace(-theta0, theta0, 17) * (1 - 1e-12)
    z = r[:, None] * np.exp(1j * th)[None, :]
    return float(np.max(np.abs(gamma(z)) / np.abs(z)))


def _explicit_constant(theta0: float, eps: float, eta: float) -> tuple[float, float]:
    """Coefficients ``(a, b)`` with ``|gt^(xi)| <= (a p + b p_eta) |xi|^-2``."""
    c = 4.0 * math.exp(-2.0)
    C2 = 2.0 * c * math.exp(eta) / (eps * math.cos(theta0))
    cos2 = math.cos(theta0) ** 2
    return 1.0 / cos2, C2 / cos2


def fourier_bound_check(gamma_shifted: Symbol, theta0: float, eps: float,
                        xi_samples: Sequence[complex]) -> FourierBoundReport:
    """Empirical ``C`` in ``|gt^(xi)| <= C (p(gt) + p_{theta0, eta}(gt)) |xi|^-2``."""
    eta = 0.5 * eps * math.cos(theta0)
    p = _p_small(gamma_shifted, theta0)
    pe = seminorm(gamma_shifted, theta0, eta)
    num = max(abs(fourier(gamma_shifted, x)) * abs(x) ** 2 for x in xi_samples)
    a, b = _explicit_constant(theta0, eps, eta)
    denom = p + pe
    C = num / denom if denom > 0 else 0.0
    explicit = (a * p + b * pe) / denom if denom > 0 else 0.0
    return FourierBoundReport(float(C), float(num), p, pe, eta, float(explicit), len(xi_samples))


# --- kernel continuation -------------------------------------------------


class KernelTailError(RuntimeError):
    def __init__(self, message: str, evaluation: "KernelEvaluation"):
        super().__init__(message)
        self.evaluation = evaluation


@dataclass(frozen=True)
class KernelContinuation:
    symbol: Symbol
    n1: int
    prefix: tuple[complex, ...]
    pole_coeff: complex
    theta0: float
    eta: float
    poisson_k_max: int = 20
    n_start: int = 0
    taylor: tuple[complex, ...] = ()
    p_small: float = math.nan
    p_eta: float = math.nan
    eps: float = 0.5

    def __post_init__(self) -> None:
        if not self.n1 > self.symbol.sector(self.theta0).r:
            raise ValueError("n1 must exceed r(theta0)")

    @property
    def shifted(self) -> Symbol:
        return _shifted_cached(self.symbol, self.n1)


@lru_cache(maxsize=64)
def _shifted_cached(symbol: Symbol, n1: int) -> Symbol:
    return shifted_symbol(symbol, n1)


def _cauchy_derivatives(f: Callable, z0: complex, radius: float, order: int,
                        n: int = 128) -> list[complex]:
    w = np.exp(2j * math.pi * np.arange(n) / n)
    c = np.fft.fft(f(z0 + radius * w)) / n      # Taylor coefficients times radius^j
    return [complex(c[j]) * math.factorial(j) / radius ** j for j in range(order + 1)]


def make_kernel_continuation(symbol: Symbol, theta0: float | None = None, n_start: int = 0,
                             poisson_k_max: int = 20, n_taylor: int = 6,
                             eps: float = 0.5) -> KernelContinuation:
    """Set up the continuation; ``n1 = floor(r(theta0)) + 1``."""
    if theta0 is None:
        theta0 = symbol.sectors[-1].theta
    r = symbol.sector(theta0).r
    n1 = int(math.floor(r)) + 1
    n1 = max(n1, n_start)
    g = symbol.eval
    prefix = tuple(complex(v) for v in g(np.arange(n_start, n1, dtype=complex))) \
        if n1 > n_start else ()
    pole = complex(g(np.array([complex(n1)]))[0])
    rad = min(0.5, 0.9 * (n1 - r), 0.9 * n1 * math.sin(theta0))
    taylor = tuple(_cauchy_derivatives(g, complex(n1), rad, n_taylor + 1))
    eta = 0.5 * eps * math.cos(theta0)
    gt = _shifted_cached(symbol, n1)
    p = _p_small(gt, theta0)
    pe = seminorm(gt, theta0, eta)
    return KernelContinuation(symbol, n1, prefix, pole, float(theta0), eta, int(poisson_k_max),
                              int(n_start), taylor, p, pe, eps)


def _cot_derivative_polys(m: int) -> list[np.ndarray]:
    """``P_n`` with ``d^n/dc^n cot(c/2) = P_n(cot(c/2))`` for ``n < m``."""
    from numpy.polynomial import polynomial as P
    polys = [np.array([0.0, 1.0])]
    for _ in range(1, m):
        d = P.polyder(polys[-1])
        polys.append(P.polymul(d, [-0.5, 0.0, -0.5]))
    return polys


def _lattice_sums(c: complex, m_max: int) -> list[complex]:
    """``S_m = sum_k (c + 2 pi k)^-m`` for ``m = 2..m_max`` (index m)."""
    from numpy.polynomial import polynomial as P
    C = 1.0 / cmath.tan(c / 2)
    polys = _cot_derivative_polys(m_max)
    out = [0j, 0j]
    for m in range(2, m_max + 1):
        out.append((-1) ** (m - 1) / math.factorial(m - 1) * 0.5 * complex(P.polyval(C, polys[m - 1])))
    return out


@dataclass(frozen=True)
class KernelEvaluation:
    value: complex
    poisson_sum: complex
    k_max: int
    accelerated_tail_bound: float
    raw_tail_bound: float


def kernel_evaluate(kc: KernelContinuation, zeta: complex, tol: float = 1e-9) -> KernelEvaluation:
    """Continuation of ``K_gamma`` at ``zeta`` with tail diagnostics.

    The Poisson terms are accelerated by subtracting their large-``xi``
    expansion ``sum_j gamma^(j)(n1) / (i xi)^(j+1)`` and adding it back through
    exact lattice sums.  ``accelerated_tail_bound`` estimates what is left
    beyond ``|k| > k_max``; ``raw_tail_bound`` is the unaccelerated estimate
    from the ``|xi|^-2`` bound with its explicit constant.
    """
    zeta = complex(zeta)
    if zeta == 0:
        return KernelEvaluation(kc.prefix[0] if kc.n_start == 0 and kc.prefix else
                                (kc.pole_coeff if kc.n1 == 0 else 0j), 0j, 0, 0.0, 0.0)
    if zeta.imag == 0 and zeta.real >= 1:
        raise ValueError("zeta lies on the cut [1, inf)")
    c = 1j * cmath.log(zeta)
    K = kc.poisson_k_max
    J = len(kc.taylor) - 2
    d = kc.taylor
    gt = kc.shifted
    ks = np.arange(-K, K + 1)
    xis = c + 2 * math.pi * ks
    if np.min(np.abs(xis)) < 1e-8:
        raise ValueError("xi too close to the origin")

    def asym(x):
        return sum(d[j] / (1j * x) ** (j + 1) for j in range(1, J + 1))

    parts = []
    for x in xis:
        parts.append(fourier(gt, x) - asym(x))
    S = _lattice_sums(c, J + 1)
    added = sum(d[j] * (1j) ** (-(j + 1)) * S[j + 1] for j in range(1, J + 1))
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts)) + added
    total *= POISSON_PREFACTOR

    far = np.abs(c + 2 * math.pi * np.concatenate([np.arange(K + 1, K + 4001),
                                                   -np.arange(K + 1, K + 4001)]))
    acc = 10.0 * abs(d[J + 1]) * float(np.sum(far ** -(J + 2)))
    a, b = _explicit_constant(kc.theta0, kc.eps, kc.eta)
    raw = (a * kc.p_small + b * kc.p_eta) * (float(np.sum(far ** -2.0)) + 1.0 / (2 * math.pi ** 2 * (K + 4000)))

    n = np.arange(kc.n_start, kc.n1)
    pref = sum(v * zeta ** int(k) for v, k in zip(kc.prefix, n))
    zn1 = zeta ** kc.n1
    value = pref + kc.pole_coeff * zn1 / (1 - zeta) + zn1 * total
    ev = KernelEvaluation(complex(value), total, K, acc, raw)
    if acc * abs(zn1) > tol * max(1.0, abs(value)):
        raise KernelTailError(f"Poisson tail estimate {acc:.3g} exceeds tolerance", ev)
    return ev


def in_continuation_domain(kc: KernelContinuation, zeta: complex, margin: float = 0.0) -> bool:
    """Whether every Poisson frequency at ``zeta`` has a decaying ray inside the sectors.

    ``margin`` is a lower bound on the relative decay rate ``kappa / |xi|``.
    """
    zeta = complex(zeta)
    if zeta == 0:
        return True
    if zeta.imag == 0 and zeta.real >= 1:
        return False
    tmax = kc.shifted.sectors[-1].theta * (1 - 1e-9)
    c = 1j * cmath.log(zeta)
    for k in range(-kc.poisson_k_max, kc.poisson_k_max + 1):
        xi = c + 2 * math.pi * k
        if abs(xi) < 1e-8:
            return False
        u = cmath.exp(-1j * _ray_angle_for(xi, tmax))
        if not (1j * u * xi).real > margin * abs(xi):
            return False
    return True


def kernel_continuation(kc: KernelContinuation, zeta: complex, tol: float = 1e-9) -> complex:
    return kernel_evaluate(kc, zeta, tol).value


def kernel_series(symbol: Symbol, zeta: complex, n_start: int = 0,
                  tol: float = 1e-17) -> complex:
    """Direct summation of ``sum_{n >= n_start} gamma(n) zeta^n`` for ``|zeta| < 1``."""
    zeta = complex(zeta)
    a = abs(zeta)
    if a >= 1:
        raise ValueError("direct summation needs |zeta| < 1")
    if a == 0:
        return complex(symbol(np.array([0j]))[0]) if n_start == 0 else 0j
    n_terms = int(math.ceil(math.log(tol) / math.log(a))) + 64
    out = 0j
    re, im = [], []
    start = n_start
    while True:
        n = np.arange(start, start + n_terms)
        terms = symbol(n.astype(complex)) * np.exp(n * cmath.log(zeta))
        re.extend(terms.real)
        im.extend(terms.imag)
        out = complex(math.fsum(re), math.fsum(im))
        if np.max(np.abs(terms[-16:])) <= tol * max(abs(out), 1e-300):
            return out
        start += n_terms
        if start - n_start > 10 ** 7:
            raise RuntimeError("series did not converge")


_CALIBRATION_ORACLES = {
    "exp": lambda z: 1.0 / (1.0 - z / math.e),
    "recip": lambda z: -cmath.log(1.0 - z) / z,
}


def calibrate_poisson_prefactor(zeta: complex = 0.5 + 0.3j, name: str = "exp") -> float:
    """Ratio between a closed-form oracle and the unscaled Poisson sum.

    ``name`` is ``"exp"`` (``gamma(n) = e^{-n}``) or ``"recip"``
    (``gamma(n) = 1/(n+1)``).  The ratio is 1 with the ``int gamma e^{-i x xi}``
    convention.
    """
    if name not in _CALIBRATION_ORACLES:
        raise ValueError(f"no calibration oracle for {name!r}")
    kc = make_kernel_continuation(builtin_symbol(name))
    ev = kernel_evaluate(kc, zeta)
    zeta = complex(zeta)
    oracle = _CALIBRATION_ORACLES[name](zeta)
    zn1 = zeta ** kc.n1
    pref = sum(v * zeta ** k for k, v in enumerate(kc.prefix, start=kc.n_start))
    target = (oracle - pref - kc.pole_coeff * zn1 / (1 - zeta)) / zn1
    return float(abs(target / (ev.poisson_sum / POISSON_PREFACTOR)))


# --- polynomials and the operator H_gamma ----------------------------------


@dataclass(frozen=True)
class ComplexPolynomial:
    coefficients: tuple[complex, ...]
    vanishing_order: int = field(default=-2)

    def __post_init__(self) -> None:
        c = [complex(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))
        first = next((i for i, x in enumerate(c) if x != 0), None)
        actual = (len(c) - 1 if first is None else first - 1)
        if self.vanishing_order == -2:
            object.__setattr__(self, "vanishing_order", actual)
        elif self.vanishing_order > actual and first is not None:
            raise ValueError("coefficients below vanishing_order must be zero")

    @classmethod
    def from_array(cls, a) -> "ComplexPolynomial":
        return cls(tuple(np.asarray(a, dtype=complex)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for a in reversed(self.coefficients):
            out = out * z + a
        return out

    def eval_compensated(self, z: complex) -> complex:
        z = complex(z)
        terms = [a * z ** n for n, a in enumerate(self.coefficients)]
        return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))

    def scaled(self, c: complex) -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(c * a for a in self.coefficients))

    def disk_l2_squared(self, radius: float) -> float:
        """``int_{D(0, radius)} |f|^2`` from the coefficients."""
        a = np.abs(self.as_array()) ** 2
        n = np.arange(a.size)
        return float(math.fsum(a * math.pi * radius ** (2 * n + 2) / (n + 1)))


def apply_H(gamma: Symbol, f: ComplexPolynomial) -> ComplexPolynomial:
    """``sum a_n z^n -> sum gamma(n) a_n z^n``."""
    if f.degree < 0:
        return f
    r0 = gamma.r0
    if f.vanishing_order < math.floor(r0):
        raise ValueError("f must vanish to order floor(r(0)) at 0")
    n = np.arange(f.degree + 1)
    a = f.as_array()
    used = a != 0
    if np.any(n[used] <= r0):
        raise ValueError("gamma(n) needed outside the declared sectors")
    g = np.zeros_like(a)
    g[used] = gamma(n[used].astype(complex))
    return ComplexPolynomial(tuple(g * a), f.vanishing_order)


def apply_H_contour(gamma: Symbol, f: Callable, z: complex, curve_radius: float,
                    n_nodes: int | None = None, margin: float = 0.05,
                    n_start: int = 1) -> complex:
    """``H_gamma(f)(z)`` as the trapezoid rule for
    ``(2 pi i)^-1 \\oint_{|w| = R} K_gamma(z / w) f(w) dw / w``.

    On the circle ``|z/w| < 1 - margin``, so the kernel is summed directly.
    """
    z = complex(z)
    R = float(curve_radius)
    if abs(z) >= R * (1 - margin):
        raise ValueError("z too close to the integration circle")
    q = abs(z) / R
    if n_nodes is None:
        n_nodes = 256 if q == 0 else max(256, int(math.ceil(40 / -math.log(q))))
    w = R * np.exp(2j * math.pi * np.arange(n_nodes) / n_nodes)
    if q == 0:
        return complex(np.mean(f(w) * (complex(gamma(np.array([0j]))[0]) if n_start == 0 else 0)))
    n_terms = int(math.ceil(math.log(1e-18) / math.log(q))) + 32
    n = np.arange(n_start, n_start + n_terms)
    gn = gamma(n.astype(complex))
    # K(z/w) = sum gamma(n) (z/w)^n evaluated by Horner in 1/w
    u = z / w
    K = np.zeros(n_nodes, dtype=complex)
    for coef in reversed(gn):
        K = K * u + coef
    K *= u ** n_start
    return complex(np.mean(K * f(w)))


def operator_ratio(gamma: Symbol, f: ComplexPolynomial, U: AngularRegion, delta: float,
                   n_boundary: int | None = None) -> float:
    """``sup_U |H f| / sup_{U^delta} |f|`` for one polynomial, by boundary sampling."""
    nb = n_boundary or max(8 * max(f.degree, 1), 64)
    num = np.max(np.abs(apply_H(gamma, f)(U.boundary_points(nb))))
    den = np.max(np.abs(f(DeltaNeighborhood(U, delta).boundary_points(4 * nb))))
    return float(num / den)


def estimate_operator_constant(gamma: Symbol, U: AngularRegion, delta: float, trials: int,
                               max_degree: int, rng_seed: int = 0,
                               min_degree: int | None = None) -> float:
    """Max over seeded random polynomials of ``sup_U |H f| / sup_{U^delta} |f|``.

    Degree ``d`` uses the stream ``default_rng([rng_seed, d])`` so the estimate
    is monotone in ``trials`` and ``max_degree``.
    """
    if not U.star_shaped:
        raise ValueError("U must be star-shaped about 0")
    n_min = int(math.floor(gamma.r0)) + 1 if min_degree is None else int(min_degree)
    nb = max(8 * max_degree, 64)
    zU = U.boundary_points(nb)
    zD = DeltaNeighborhood(U, delta).boundary_points(4 * nb)
    n = np.arange(n_min, max_degree + 1)
    gn = gamma(n.astype(complex))
    VU = zU[:, None] ** n[None, :]
    VD = zD[:, None] ** n[None, :]
    best = 0.0
    for d in range(n_min, max_degree + 1):
        k = d - n_min + 1
        rng = np.random.default_rng([rng_seed, d])
        x = rng.standard_normal((trials, k, 2))
        A = x[..., 0] + 1j * x[..., 1]
        num = np.max(np.abs(VU[:, :k] @ (A * gn[:k]).T), axis=0)
        den = np.max(np.abs(VD[:, :k] @ A.T), axis=0)
        best = max(best, float(np.max(num / den)))
    return best


# --- symbols from the eigenvalue problem ----------------------------------


@lru_cache(maxsize=512)
def _solve_gamma(alpha: complex):
    from .implicit import PhiContext, solve_rho
    s = solve_rho(PhiContext(alpha))
    return s.gamma, s.lam - s.alpha


def grushin_symbol_family(x: float, zeta: complex,
                          validated_alpha_range: tuple[float, float] | None = None) -> Symbol:
    """``alpha -> v(x)(alpha) |zeta|^{rho(alpha)}`` with ``rho = lambda - alpha``.

    ``validated_alpha_range`` is ``(min |alpha|, max |arg alpha|)``; it defaults
    to the range over which the implicit solver is certified.
    """
    from .implicit import VALIDATED_MAX_ARG, VALIDATED_MIN_ALPHA
    from .spectrum import complex_eigenfunction

    x = float(x)
    if not -1.0 < x < 1.0:
        raise ValueError("x must lie in (-1, 1)")
    az = abs(complex(zeta))
    if not 0.0 < az < 1.0:
        raise ValueError("|zeta| must lie in (0, 1)")
    amin, amax = validated_alpha_range or (VALIDATED_MIN_ALPHA, VALIDATED_MAX_ARG)
    if amin < VALIDATED_MIN_ALPHA or amax > VALIDATED_MAX_ARG:
        raise ValueError("requested range exceeds the validated range of the implicit solver")
    log_z = math.log(az)

    def ev(alpha):
        arr = np.atleast_1d(np.asarray(alpha, dtype=complex))
        out = np.empty(arr.shape, dtype=complex)
        for i, a in np.ndenumerate(arr):
            a = complex(a)
            if abs(a) < amin or abs(cmath.phase(a)) > amax:
                raise ValueError(f"alpha={a} outside the validated range")
            g, rho = _solve_gamma(a)
            v = complex_eigenfunction(a, g, [x])[0]
            out[i] = v * cmath.exp(rho * log_z)
        return out.reshape(np.shape(alpha))

    sec = SectorDomain(min(amax, math.pi / 2 - 1e-9), amin)
    return Symbol(ev, (sec,), f"grushin(x={x}, |zeta|={az})")
