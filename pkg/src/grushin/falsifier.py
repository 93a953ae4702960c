"""Both sides of the observability inequalities on explicit counterexample families.

For each variant the Runge polynomials ``f_k = z^(N+1) p_k`` with
``p_k ~ 1/(z - z0)`` on ``U^delta`` are turned into solutions and the ratio

    LHS / RHS = (final-state norm) / (observation-region norm)

is computed.  Along ``k`` the RHS stays bounded while the LHS grows, so no
observability constant exists.

Variants:

``toy``
    holomorphic model, ``LHS = int_{D(0, e^-T)} |f|^2``, ``RHS = int_D |f|^2``
    over the annular sector ``D = {e^-T < |z| < 1, arg z in omega}``.
``line``
    the same LHS against ``int_x int_{e^(-x^2/2) D} |f|^2 dx``.
``strip``
    modes ``v_n(x) e^(-lambda_n t) e^(i n y)`` on ``(-1, 1) x T``; ``a_n`` is the
    coefficient of ``z^(n-1)`` in ``f``.
``rectangle``
    modes ``v_(n pi)(x) e^(-lambda t) sin(n pi y)`` on ``(-1, 1) x (0, 1)``.

The modal RHS is evaluated as a Hermitian form with Gram factors that are closed
form in ``t`` and ``y`` and use Gauss-Legendre quadrature in ``x``.  The
brute-force tensor quadrature of the same integral is kept as a small-instance
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import cmath
from functools import lru_cache
import hashlib
import math

import numpy as np

from .regions import AngularRegion, DeltaNeighborhood, annular_sector, pacman, symmetric_pacman
from .runge import PolePushSchedule, RungeApproximant, build_counterexample
from .spectrum import eigenfunction, ground_eigen

__all__ = [
    "VARIANTS",
    "FalsifierError",
    "ExperimentConfig",
    "GeometryDescriptors",
    "ObservabilityReport",
    "Lemma1Report",
    "default_config",
    "geometry",
    "counterexample",
    "modal_coefficients",
    "toy_ratio",
    "line_ratio",
    "strip_ratio",
    "rectangle_ratio",
    "ratio",
    "sweep",
    "blow_up_factor",
    "gram_matrix",
    "gram_rhs",
    "bruteforce_rhs",
    "holomorphic_gram_rhs",
    "lemma1_ratio",
    "lemma1_check",
]

VARIANTS = ("toy", "line", "strip", "rectangle")
TWO_PI = 2.0 * math.pi
X_CUT = math.sqrt(16.0 * math.log(10.0))      # exp(-x^2) < 1e-16 beyond


class FalsifierError(RuntimeError):
    """A numerical consistency check failed during an experiment."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    ``band`` is the removed arc ``[a, b]`` (radians; a subset of ``(0, 1)`` for the
    rectangle).  ``theta`` defaults to the band midpoint (times ``pi`` for the
    rectangle).  Polynomial degrees are ``degree_base * 2^k`` (``doubling``) or
    ``degree_base + degree_step * k`` (``linear``).  With ``observe_everywhere``
    the counterexamples are built for ``band`` but observed on the full annulus.
    """

    variant: str
    T: float
    band: tuple[float, float]
    delta: float
    z0_modulus: float
    theta: float | None = None
    N: int = 0
    k_range: tuple[int, ...] = tuple(range(7))
    degree_base: int = 1
    degree_growth: str = "doubling"
    degree_step: int = 1
    n_min: int = 2
    n_max: int = 20
    n_r: int = 120
    n_theta: int = 240
    n_x: int = 48
    n_gram_x: int = 200
    observe_everywhere: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "band", tuple(float(b) for b in self.band))
        object.__setattr__(self, "k_range", tuple(int(k) for k in self.k_range))
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if not self.T > 0:
            raise ValueError("T must be positive")
        a, b = self.band
        if not b > a:
            raise ValueError("band must be a non-trivial interval a < b")
        if self.variant == "rectangle":
            if not 0.0 < a < b < 1.0:
                raise ValueError("rectangle band must satisfy 0 < a < b < 1")
        elif b - a >= TWO_PI:
            raise ValueError("band removes the whole circle")
        r_T = self.disk_radius
        if not 0 < self.delta < r_T:
            raise ValueError(f"delta must lie in (0, {r_T:.6g})")
        if not self.delta < self.z0_modulus < r_T:
            raise ValueError(f"z0_modulus must lie in (delta, {r_T:.6g})")
        lo, hi = (math.pi * a, math.pi * b) if self.variant == "rectangle" else (a, b)
        if not lo < self.arg_z0 < hi:
            raise ValueError("theta must lie inside the removed band")
        if self.N < 0:
            raise ValueError("N must be non-negative")
        if self.degree_growth not in ("doubling", "linear"):
            raise ValueError("degree_growth must be 'doubling' or 'linear'")
        if self.degree_base < 0 or self.degree_step < 1:
            raise ValueError("degree_base >= 0 and degree_step >= 1 required")
        if not self.k_range or min(self.k_range) < 0:
            raise ValueError("k_range must be a non-empty list of non-negative integers")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        if min(self.n_r, self.n_theta, self.n_x, self.n_gram_x) < 4:
            raise ValueError("quadrature densities must be at least 4")
        U = _pacman(self)
        if DeltaNeighborhood(U, self.delta).contains(np.array([self.z0]))[0]:
            raise ValueError("z0 must lie outside the closure of U^delta")

    @property
    def disk_radius(self) -> float:
        return math.exp(-(math.pi if self.variant == "rectangle" else 1.0) * self.T)

    @property
    def arg_z0(self) -> float:
        if self.theta is not None:
            return float(self.theta)
        a, b = self.band
        return 0.5 * math.pi * (a + b) if self.variant == "rectangle" else 0.5 * (a + b)

    @property
    def z0(self) -> complex:
        return cmath.rect(self.z0_modulus, self.arg_z0)

    def degree(self, k: int) -> int:
        if self.degree_growth == "doubling":
            return self.degree_base * 2 ** k
        return self.degree_base + self.degree_step * k


def default_config(variant: str, **overrides) -> ExperimentConfig:
    """Tuned configurations for which the blow-up is visible at desk scale."""
    base = {
        "toy": dict(T=0.5, band=(math.pi - 1, math.pi + 1), delta=0.2,
                    z0_modulus=math.exp(-1.0)),
        "line": dict(T=0.5, band=(math.pi - 1, math.pi + 1), delta=0.2,
                     z0_modulus=math.exp(-1.0)),
        "strip": dict(T=0.3, band=(math.pi - 0.8, math.pi + 0.8), delta=0.05,
                      z0_modulus=0.2, k_range=tuple(range(10)), degree_base=0,
                      degree_growth="linear", degree_step=2, n_min=2, n_max=20),
        "rectangle": dict(T=0.1, band=(0.2, 0.8), delta=0.05, z0_modulus=0.3,
                          k_range=tuple(range(11)), degree_base=0,
                          degree_growth="linear", degree_step=3, n_min=2, n_max=32),
    }
    if variant not in base:
        raise ValueError(f"variant must be one of {VARIANTS}")
    params = dict(base[variant])
    params.update(overrides)
    return ExperimentConfig(variant=variant, **params)


@dataclass(frozen=True)
class GeometryDescriptors:
    D_annulus: AngularRegion
    U_pacman: AngularRegion
    U_delta: DeltaNeighborhood
    disk_radius: float


def _pacman(cfg: ExperimentConfig) -> AngularRegion:
    if cfg.variant == "rectangle":
        return symmetric_pacman(cfg.band)
    return pacman(cfg.band)


def geometry(cfg: ExperimentConfig) -> GeometryDescriptors:
    U = _pacman(cfg)
    r_T = cfg.disk_radius
    if cfg.observe_everywhere:
        D = AngularRegion(((0.0, TWO_PI),), r_T, 1.0)
    elif cfg.variant == "rectangle":
        D = symmetric_pacman(cfg.band, r_in=r_T)
    else:
        D = annular_sector(cfg.band, cfg.T)
    return GeometryDescriptors(D, U, DeltaNeighborhood(U, cfg.delta), r_T)


@dataclass(frozen=True)
class ObservabilityReport:
    variant: str
    k: int
    degree: int
    lhs: float
    rhs: float
    ratio: float
    modal_coefficients_digest: str
    diagnostics: dict = field(default_factory=dict, compare=False)


def _digest(a: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(a, dtype="<c16").tobytes()).hexdigest()


def _report(cfg: ExperimentConfig, k: int, lhs: float, rhs: float, coeffs: np.ndarray,
            diagnostics: dict) -> ObservabilityReport:
    if not (lhs > 0 and rhs > 0):
        raise FalsifierError(f"non-positive side: lhs={lhs!r}, rhs={rhs!r}")
    return ObservabilityReport(cfg.variant, k, cfg.degree(k), float(lhs), float(rhs),
                               float(lhs / rhs), _digest(coeffs), diagnostics)


# ---------------------------------------------------------------------------
# Counterexamples

def _construction_key(cfg: ExperimentConfig) -> ExperimentConfig:
    # Fields that do not affect the polynomial are normalised for caching.
    return replace(cfg, observe_everywhere=False, k_range=(0,), n_r=4, n_theta=4,
                   n_x=4, n_gram_x=4, n_min=1, n_max=1, variant=(
                       "rectangle" if cfg.variant == "rectangle" else "toy"))


@lru_cache(maxsize=256)
def _counterexample_cached(key: ExperimentConfig, K: int) -> RungeApproximant:
    g = geometry(key)
    s = PolePushSchedule(key.z0, final_degree=K)
    return build_counterexample(key.z0, key.N, s, g.U_delta)


def counterexample(cfg: ExperimentConfig, k: int) -> RungeApproximant:
    """``f_k`` for the configuration, of degree ``N + 1 + degree(k)``."""
    return _counterexample_cached(_construction_key(cfg), cfg.degree(k))


def modal_coefficients(cfg: ExperimentConfig, f: RungeApproximant | np.ndarray):
    """``(a, dropped)``: ``a[n]`` is the coefficient of ``z^(n-1)`` in ``f`` for
    ``n_min <= n <= n_max`` (zero elsewhere) and ``dropped`` is the l2 norm of
    the coefficients outside the window."""
    c = f.poly.as_array() if isinstance(f, RungeApproximant) else np.asarray(f, complex)
    a = np.zeros(cfg.n_max + 1, dtype=complex)
    n = np.arange(1, c.size + 1)
    keep = (n >= cfg.n_min) & (n <= cfg.n_max)
    a[n[keep]] = c[keep]
    dropped = float(np.sqrt(np.sum(np.abs(c[~keep]) ** 2)))
    return a, dropped


# ---------------------------------------------------------------------------
# Holomorphic variants

def _polar_rhs(poly, D: AngularRegion, n_r: int, n_theta: int, scale: float = 1.0) -> float:
    z, w = D.polar_nodes(n_r, n_theta)
    return float(scale ** 2 * np.sum(np.abs(poly(scale * z)) ** 2 * w))


def _annulus_quadrature(f, D, cfg) -> tuple[float, float]:
    rhs = _polar_rhs(f.poly, D, cfg.n_r, cfg.n_theta)
    coarse = _polar_rhs(f.poly, D, (3 * cfg.n_r) // 4, (3 * cfg.n_theta) // 4)
    return rhs, abs(rhs - coarse) / rhs


def _require_variant(cfg: ExperimentConfig, variant: str) -> None:
    if cfg.variant != variant:
        raise ValueError(f"configuration is for {cfg.variant!r}, not {variant!r}")


def toy_ratio(cfg: ExperimentConfig, k: int) -> ObservabilityReport:
    _require_variant(cfg, "toy")
    g = geometry(cfg)
    f = counterexample(cfg, k)
    lhs = f.poly.disk_l2_squared(g.disk_radius)
    rhs, qerr = _annulus_quadrature(f, g.D_annulus, cfg)
    diag = {"rhs_quadrature_change": qerr, "sup_error_on_U_delta": f.sup_error_on_compact,
            "abs_f_at_z0": float(abs(f.poly(cfg.z0)))}
    return _report(cfg, k, lhs, rhs, f.poly.as_array(), diag)


def _target_sup_on_pacman(cfg: ExperimentConfig, U: AngularRegion, n: int = 4000) -> float:
    z = U.boundary_points(n)
    z = z[z != 0]
    return float(np.max(np.abs(z ** (cfg.N + 1) / (z - cfg.z0))))


def line_ratio(cfg: ExperimentConfig, k: int) -> ObservabilityReport:
    """RHS ``int_x int_{s D} |f|^2``, ``s = exp(-x^2/2)``, truncated at
    ``|x| = X_CUT`` where ``exp(-x^2) < 1e-16``."""
    _require_variant(cfg, "line")
    g = geometry(cfg)
    f = counterexample(cfg, k)
    lhs = f.poly.disk_l2_squared(g.disk_radius)
    xg, wg = np.polynomial.legendre.leggauss(cfg.n_x)
    x = 0.5 * X_CUT * (xg + 1.0)            # integrand is even in x
    wx = X_CUT * wg                         # 2 * (X_CUT / 2) * wg
    inner = np.array([_polar_rhs(f.poly, g.D_annulus, cfg.n_r, cfg.n_theta, math.exp(-xi * xi / 2))
                      for xi in x])
    rhs = float(np.sum(wx * inner))
    M = _target_sup_on_pacman(cfg, g.U_pacman)
    zb = g.U_pacman.boundary_points(4000)
    M_k = float(np.max(np.abs(f.poly(zb))))
    diag = {"cap": math.pi ** 1.5 * M ** 2, "cap_sampled": math.pi ** 1.5 * M_k ** 2,
            "M": M, "M_k": M_k, "x_cut": X_CUT,
            "x0_slice": _polar_rhs(f.poly, g.D_annulus, cfg.n_r, cfg.n_theta),
            "sup_error_on_U_delta": f.sup_error_on_compact}
    return _report(cfg, k, lhs, rhs, f.poly.as_array(), diag)


def holomorphic_gram_rhs(cfg: ExperimentConfig, c: np.ndarray) -> float:
    """Closed form of the toy or line RHS for ``f = sum c_n z^n``.

    ``int_D z^n conj(z)^m = G_nm (1 - r^(n+m+2)) / (n+m+2)`` with
    ``G_nm = int_omega e^(i(n-m)theta)``; the line variant multiplies each term by
    ``int exp(-(n+m+2) x^2 / 2) dx = sqrt(2 pi / (n+m+2))``.
    """
    c = np.asarray(c, dtype=complex)
    n = np.arange(c.size)
    g = geometry(cfg)
    G = _arc_gram(g.D_annulus.intervals, n[:, None] - n[None, :])
    p = n[:, None] + n[None, :] + 2.0
    W = G * (1.0 - g.disk_radius ** p) / p
    if cfg.variant == "line":
        W = W * np.sqrt(TWO_PI / p)
    return float(np.real(c @ W @ c.conj()))


def _arc_gram(intervals, j: np.ndarray) -> np.ndarray:
    """``sum over intervals of int e^(i j y) dy``."""
    out = np.zeros(j.shape, dtype=complex)
    zero = j == 0
    jj = np.where(zero, 1, j)
    for lo, hi in intervals:
        out += np.where(zero, hi - lo, (np.exp(1j * jj * hi) - np.exp(1j * jj * lo)) / (1j * jj))
    return out


# ---------------------------------------------------------------------------
# Modal variants

def _alpha(cfg: ExperimentConfig, n: int) -> float:
    return float(n) * (math.pi if cfg.variant == "rectangle" else 1.0)


@lru_cache(maxsize=512)
def _spectral(alpha: float, n_x: int):
    """``(lambda, ||v||^2, v at the Gauss-Legendre nodes)``."""
    e = ground_eigen(alpha)
    xg, _ = np.polynomial.legendre.leggauss(n_x)
    return e.lam, e.l2 ** 2, eigenfunction(e, xg)


def _spectral_table(cfg: ExperimentConfig, ns: np.ndarray):
    data = [_spectral(_alpha(cfg, int(n)), cfg.n_gram_x) for n in ns]
    lam = np.array([d[0] for d in data])
    nrm = np.array([d[1] for d in data])
    V = np.array([d[2] for d in data])
    return lam, nrm, V


def _sine_gram(band01, n: np.ndarray, m: np.ndarray) -> np.ndarray:
    """``int_{(0, a) u (b, 1)} sin(n pi y) sin(m pi y) dy``."""
    a, b = band01
    d = n - m
    s = n + m
    dd = np.where(d == 0, 1, d)

    def F(y):
        diff = np.where(d == 0, 0.5 * y, np.sin(dd * math.pi * y) / (2 * dd * math.pi))
        return diff - np.sin(s * math.pi * y) / (2 * s * math.pi)
    return F(a) - F(0.0) + F(1.0) - F(b)


def _y_gram(cfg: ExperimentConfig, ns: np.ndarray) -> np.ndarray:
    n, m = ns[:, None], ns[None, :]
    if cfg.variant == "rectangle":
        if cfg.observe_everywhere:
            return np.where(n == m, 0.5, 0.0).astype(complex)
        return _sine_gram(cfg.band, n, m).astype(complex)
    intervals = ((0.0, TWO_PI),) if cfg.observe_everywhere else pacman(cfg.band).intervals
    return _arc_gram(intervals, n - m)


def gram_matrix(cfg: ExperimentConfig, ns) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(G, lambda, ||v||^2)`` with ``G_nm = G^x G^t G^y`` over the modes ``ns``."""
    ns = np.asarray(ns, dtype=int)
    lam, nrm, V = _spectral_table(cfg, ns)
    _, wg = np.polynomial.legendre.leggauss(cfg.n_gram_x)
    Gx = (V * wg) @ V.T
    L = lam[:, None] + lam[None, :]
    Gt = -np.expm1(-L * cfg.T) / L
    return Gx * Gt * _y_gram(cfg, ns), lam, nrm


def gram_rhs(cfg: ExperimentConfig, a: np.ndarray) -> float:
    """Hermitian-form RHS for modal coefficients ``a[n]`` (index ``n``)."""
    a = np.asarray(a, dtype=complex)
    ns = np.nonzero(a)[0]
    if ns.size == 0:
        return 0.0
    G, _, _ = gram_matrix(cfg, ns)
    return float(np.real(a[ns] @ G @ a[ns].conj()))


def bruteforce_rhs(cfg: ExperimentConfig, a: np.ndarray, n_t: int = 40, n_y: int = 96,
                   n_x: int = 160) -> float:
    """Tensor Gauss-Legendre quadrature of ``|u|^2`` over ``(-1,1) x (0,T) x omega``.

    Independent of the Gram factors; meant for a handful of modes.
    """
    a = np.asarray(a, dtype=complex)
    ns = np.nonzero(a)[0]
    xg, wx = np.polynomial.legendre.leggauss(n_x)
    tg, wt = np.polynomial.legendre.leggauss(n_t)
    t, wt = 0.5 * cfg.T * (tg + 1.0), 0.5 * cfg.T * wt
    if cfg.variant == "rectangle":
        pieces = ((0.0, 1.0),) if cfg.observe_everywhere else ((0.0, cfg.band[0]), (cfg.band[1], 1.0))
    elif cfg.variant == "strip":
        pieces = ((0.0, TWO_PI),) if cfg.observe_everywhere else pacman(cfg.band).intervals
    else:
        raise ValueError("bruteforce_rhs covers the modal variants only")
    yg, wyg = np.polynomial.legendre.leggauss(n_y)
    ys = np.concatenate([lo + 0.5 * (hi - lo) * (yg + 1.0) for lo, hi in pieces])
    wy = np.concatenate([0.5 * (hi - lo) * wyg for lo, hi in pieces])
    u = np.zeros((n_x, n_t, ys.size), dtype=complex)
    for n in ns:
        e = ground_eigen(_alpha(cfg, int(n)))
        v = eigenfunction(e, xg)
        ymode = np.sin(n * math.pi * ys) if cfg.variant == "rectangle" else np.exp(1j * n * ys)
        u += a[n] * v[:, None, None] * np.exp(-e.lam * t)[None, :, None] * ymode[None, None, :]
    w = wx[:, None, None] * wt[None, :, None] * wy[None, None, :]
    return float(np.sum(np.abs(u) ** 2 * w))


def _modal_ratio(cfg: ExperimentConfig, k: int) -> ObservabilityReport:
    f = counterexample(cfg, k)
    a, dropped = modal_coefficients(cfg, f)
    ns = np.nonzero(a)[0]
    if ns.size == 0:
        raise FalsifierError("no coefficients inside the modal window")
    G, lam, nrm = gram_matrix(cfg, ns)
    an = a[ns]
    weight = 0.5 if cfg.variant == "rectangle" else 1.0
    lhs = weight * math.fsum(nrm * np.abs(an) ** 2 * np.exp(-2.0 * lam * cfg.T))
    form = an @ G @ an.conj()
    rhs = float(np.real(form))
    scale = float(np.sum(np.abs(an) ** 2 * np.abs(np.diag(G))))
    if rhs < -1e-10 * scale:
        raise FalsifierError(f"Gram form negative: {rhs!r} (scale {scale!r})")
    min_eig = float(np.linalg.eigvalsh(0.5 * (G + G.conj().T)).min())
    diag = {"windowed_out_l2": dropped, "modes": [int(ns[0]), int(ns[-1])],
            "gram_min_eigenvalue": min_eig, "gram_scale": scale,
            "imag_part_of_form": float(abs(np.imag(form))),
            "sup_error_on_U_delta": f.sup_error_on_compact}
    return _report(cfg, k, lhs, rhs, a, diag)


def strip_ratio(cfg: ExperimentConfig, k: int) -> ObservabilityReport:
    _require_variant(cfg, "strip")
    return _modal_ratio(cfg, k)


def rectangle_ratio(cfg: ExperimentConfig, k: int) -> ObservabilityReport:
    _require_variant(cfg, "rectangle")
    return _modal_ratio(cfg, k)


_RATIO = {"toy": toy_ratio, "line": line_ratio, "strip": strip_ratio,
          "rectangle": rectangle_ratio}


def ratio(cfg: ExperimentConfig, k: int) -> ObservabilityReport:
    return _RATIO[cfg.variant](cfg, k)


def sweep(cfg: ExperimentConfig) -> list[ObservabilityReport]:
    """Reports for every ``k`` in ``cfg.k_range``, in ascending ``k``."""
    return [ratio(cfg, k) for k in sorted(set(cfg.k_range))]


def blow_up_factor(reports) -> float:
    r = [rep.ratio for rep in reports]
    return max(r) / min(r)


# ---------------------------------------------------------------------------
# Kernel bound on the modal sums

def lemma1_ratio(cfg: ExperimentConfig, a: np.ndarray, x, z, zeta,
                 n_boundary: int = 2000) -> np.ndarray:
    """``|sum v_n(x) a_n z^(n-1) |zeta|^rho_n| / sup_{U^delta} |sum a_n z^(n-1)|``."""
    a = np.asarray(a, dtype=complex)
    ns = np.nonzero(a)[0]
    x, z, zeta = (np.atleast_1d(np.asarray(v)) for v in (x, z, zeta))
    num = np.zeros(np.broadcast(x, z, zeta).shape, dtype=complex)
    for n in ns:
        e = ground_eigen(_alpha(cfg, int(n)))
        num = num + a[n] * eigenfunction(e, x) * z ** (n - 1) * np.abs(zeta) ** (e.lam - _alpha(cfg, int(n)))
    zb = geometry(cfg).U_delta.boundary_points(n_boundary)
    den = np.max(np.abs(sum(a[n] * zb ** (n - 1) for n in ns)))
    return np.abs(num) / den


@dataclass(frozen=True)
class Lemma1Report:
    C2: float
    C2_doubled: float
    stable: bool
    trials: int
    modes: tuple[int, int]
    n_points: int


def lemma1_check(cfg: ExperimentConfig, trials: int, seed: int, n_points: int = 400,
                 n_boundary: int = 1000, n_max: int | None = None) -> Lemma1Report:
    """Largest observed ratio over seeded coefficient vectors and sample points.

    Coefficients of trial ``i`` come from the stream ``(seed, i)``, so the run with
    ``2 * trials`` extends the one with ``trials``; stability means the two maxima
    agree within 30%.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    hi = cfg.n_max if n_max is None else int(n_max)
    ns = np.arange(cfg.n_min, hi + 1)
    g = geometry(cfg)
    rng = np.random.default_rng([seed, 0])
    x = rng.uniform(-1.0, 1.0, n_points)
    zn, _ = g.D_annulus.polar_nodes(24, 48)
    z = rng.choice(zn, n_points)
    zeta = np.abs(rng.choice(zn, n_points))
    E = np.empty((n_points, ns.size), dtype=complex)
    B = np.empty((n_boundary, ns.size), dtype=complex)
    zb = g.U_delta.boundary_points(n_boundary)
    for j, n in enumerate(ns):
        alpha = _alpha(cfg, int(n))
        e = ground_eigen(alpha)
        E[:, j] = eigenfunction(e, x) * z ** (n - 1) * zeta ** (e.lam - alpha)
        B[:, j] = zb ** (n - 1)
    A = np.empty((ns.size, 2 * trials), dtype=complex)
    for i in range(2 * trials):
        r = np.random.default_rng([seed, i + 1])
        A[:, i] = r.normal(size=ns.size) + 1j * r.normal(size=ns.size)
    ratios = np.max(np.abs(E @ A), axis=0) / np.max(np.abs(B @ A), axis=0)
    c1, c2 = float(ratios[:trials].max()), float(ratios.max())
    return Lemma1Report(c1, c2, abs(c2 / c1 - 1.0) <= 0.3, trials,
                        (int(ns[0]), int(ns[-1])), n_points)
