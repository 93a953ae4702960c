"""Planar regions bounded by circles and rays, and their delta-neighbourhoods.

An :class:`AngularRegion` is ``{r_in < |z| < r_out, arg z in one of the
intervals}``.  This covers the pacman ``{0 < |z| < 1, arg z in omega}``, the
annular sector ``{e^-T < |z| < 1, arg z in omega}`` and the symmetric variant
used on the rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import numpy as np

__all__ = [
    "AngularRegion",
    "DeltaNeighborhood",
    "pacman",
    "annular_sector",
    "symmetric_pacman",
    "disk_integral",
]

TWO_PI = 2.0 * math.pi


def _seg_distance(p: np.ndarray, a: complex, b: complex) -> np.ndarray:
    d = b - a
    t = np.clip(((p - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(p - (a + t * d))


@dataclass(frozen=True)
class AngularRegion:
    intervals: tuple[tuple[float, float], ...]
    r_in: float = 0.0
    r_out: float = 1.0

    def __post_init__(self) -> None:
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not 0.0 <= self.r_in < self.r_out:
            raise ValueError("need 0 <= r_in < r_out")
        total = 0.0
        for lo, hi in ivs:
            if not hi > lo:
                raise ValueError("empty angular interval")
            total += hi - lo
        if total > TWO_PI + 1e-12:
            raise ValueError("angular intervals exceed a full turn")

    @property
    def full_turn(self) -> bool:
        return len(self.intervals) == 1 and \
            abs(self.intervals[0][1] - self.intervals[0][0] - TWO_PI) < 1e-12

    @property
    def angular_measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    @property
    def area(self) -> float:
        return 0.5 * self.angular_measure * (self.r_out ** 2 - self.r_in ** 2)

    @property
    def radius(self) -> float:
        return self.r_out

    @property
    def star_shaped(self) -> bool:
        return self.r_in == 0.0

    def scaled(self, s: float) -> "AngularRegion":
        return AngularRegion(self.intervals, self.r_in * s, self.r_out * s)

    def angle_in(self, z) -> np.ndarray:
        th = np.angle(np.asarray(z, dtype=complex))
        out = np.zeros(np.shape(th), dtype=bool)
        for lo, hi in self.intervals:
            out |= np.mod(th - lo, TWO_PI) < hi - lo
        return out

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return (r > self.r_in) & (r < self.r_out) & self.angle_in(z)

    def distance(self, z) -> np.ndarray:
        """Euclidean distance to the closure of the region."""
        p = np.asarray(z, dtype=complex)
        r = np.abs(p)
        best = np.full(p.shape, np.inf)
        for lo, hi in self.intervals:
            inside_angle = np.mod(np.angle(p) - lo, TWO_PI) <= hi - lo
            radial = np.maximum(np.maximum(self.r_in - r, r - self.r_out), 0.0)
            cand = np.where(inside_angle, radial, np.inf)
            if not self.full_turn:
                for th in (lo, hi):
                    u = np.exp(1j * th)
                    cand = np.minimum(cand, _seg_distance(p, self.r_in * u, self.r_out * u))
            best = np.minimum(best, cand)
        return best

    def boundary_points(self, n: int) -> np.ndarray:
        """About ``n`` points on each boundary piece (edges and arcs)."""
        pts = []
        n = max(int(n), 4)
        for lo, hi in self.intervals:
            th = np.linspace(lo, hi, n, endpoint=not self.full_turn)
            pts.append(self.r_out * np.exp(1j * th))
            if self.r_in > 0:
                pts.append(self.r_in * np.exp(1j * th))
            if not self.full_turn:
                rr = np.linspace(self.r_in, self.r_out, n)
                pts.append(rr * np.exp(1j * lo))
                pts.append(rr * np.exp(1j * hi))
        return np.concatenate(pts)

    def polar_nodes(self, n_r: int, n_theta: int):
        """Gauss-Legendre nodes and weights for ``int f dlambda`` over the region."""
        xr, wr = np.polynomial.legendre.leggauss(n_r)
        xt, wt = np.polynomial.legendre.leggauss(n_theta)
        h = 0.5 * (self.r_out - self.r_in)
        r = self.r_in + h * (xr + 1.0)
        wrr = h * wr * r
        zs, ws = [], []
        for lo, hi in self.intervals:
            g = 0.5 * (hi - lo)
            th = lo + g * (xt + 1.0)
            zs.append((r[:, None] * np.exp(1j * th)[None, :]).ravel())
            ws.append((wrr[:, None] * (g * wt)[None, :]).ravel())
        return np.concatenate(zs), np.concatenate(ws)


@dataclass(frozen=True)
class DeltaNeighborhood:
    """``{z : dist(z, base) < delta}``."""

    base: AngularRegion
    delta: float

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @property
    def radius(self) -> float:
        return self.base.r_out + self.delta

    def contains(self, z) -> np.ndarray:
        return self.base.distance(z) < self.delta

    def distance(self, z) -> np.ndarray:
        return np.maximum(self.base.distance(z) - self.delta, 0.0)

    def circle_points(self, n_base: int, n_circle: int) -> np.ndarray:
        """Points on circles of radius delta centred on base boundary samples."""
        c = self.base.boundary_points(n_base)
        ph = np.exp(2j * math.pi * np.arange(n_circle) / n_circle)
        return (c[:, None] + self.delta * ph[None, :]).ravel()

    def boundary_points(self, n: int) -> np.ndarray:
        """Samples of ``dist(z, base) = delta`` along ``n`` rays from the origin.

        For a base star-shaped about 0 the neighbourhood is star-shaped too, so
        each ray crosses the boundary once; the crossing is found by bisection.
        """
        if not self.base.star_shaped:
            raise ValueError("boundary sampling needs a base star-shaped about 0")
        n = max(int(n), 16)
        u = np.exp(2j * math.pi * (np.arange(n) + 0.5) / n)
        lo = np.zeros(n)
        hi = np.full(n, self.radius * (1.0 + 1e-9))
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            inside = self.base.distance(mid * u) < self.delta
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        return 0.5 * (lo + hi) * u


def pacman(band: tuple[float, float], radius: float = 1.0, r_in: float = 0.0) -> AngularRegion:
    """Disk (or annulus) with the closed angular band ``[a, b]`` removed."""
    a, b = map(float, band)
    if b < a:
        raise ValueError("band must satisfy a <= b")
    if b - a >= TWO_PI:
        raise ValueError("band removes the whole circle")
    return AngularRegion(((b, a + TWO_PI),), r_in, radius)


def annular_sector(band: tuple[float, float], T: float) -> AngularRegion:
    return pacman(band, 1.0, math.exp(-T))


def symmetric_pacman(band01: tuple[float, float], r_in: float = 0.0,
                     radius: float = 1.0) -> AngularRegion:
    """``{|arg z| in pi * omega}`` with ``omega = (0, 1) minus [a, b]``."""
    a, b = map(float, band01)
    if not 0.0 < a <= b < 1.0:
        raise ValueError("band must satisfy 0 < a <= b < 1")
    return AngularRegion(((-math.pi * a, math.pi * a), (math.pi * b, TWO_PI - math.pi * b)),
                         r_in, radius)


def disk_integral(f, radius: float, n_r: int = 64, n_theta: int = 128) -> float:
    """``int_{D(0, radius)} f dlambda`` with a tensor Gauss-Legendre / trapezoid rule."""
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * radius * (xr + 1.0)
    th = TWO_PI * np.arange(n_theta) / n_theta
    z = r[:, None] * np.exp(1j * th)[None, :]
    w = (0.5 * radius * wr * r)[:, None] * (TWO_PI / n_theta)
    return float(np.sum(np.real(f(z)) * w))
