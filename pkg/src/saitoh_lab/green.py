"""Green functions, harmonic measure and conjugate periods on disks and annuli.

On a disk the Green function is closed form. On an annulus it is
``log|z - z0| + h(z)`` with ``h`` a Laurent-harmonic series fitted to
``-log|z - z0|`` on both circles mode by mode (FFT collocation).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Annulus, Disk, Domain

log = logging.getLogger(__name__)

__all__ = [
    "GreenSolution",
    "HarmonicSeries",
    "CharacterPeriod",
    "solve_green",
    "green_normal_derivative",
    "log_capacity",
    "harmonic_measure_inner",
    "character_period",
    "characters_equal",
]

K_CORR_DEFAULT = 64
K_CORR_CAP = 512
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class GreenSolution:
    domain: Domain
    pole: complex
    # annulus only: a0, b0 and scaled mode coefficients (see _fit_annulus)
    a0: float = 0.0
    b0: float = 0.0
    A: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    B: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    residual: float = 0.0

    @property
    def K_corr(self) -> int:
        return len(self.A)

    def harmonic_part(self, z) -> np.ndarray:
        """``h = G - log|z - pole|``, smooth on the closure of the domain."""
        z = np.asarray(z, dtype=complex)
        d = self.domain
        if isinstance(d, Disk):
            zc = z - d.center
            a = self.pole - d.center
            R = d.radius
            return -np.log(np.abs(R**2 - np.conj(a) * zc)) + np.log(R)
        u = z - d.center
        k = np.arange(1, self.K_corr + 1)
        out = self.a0 + self.b0 * np.log(np.abs(u))
        if self.K_corr:
            zo = (u / d.r_outer)[..., None] ** k
            zi = (d.r_inner / u)[..., None] ** k
            out = out + np.real(zo @ self.A + zi @ np.conj(self.B))
        return out

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(z - self.pole)) + self.harmonic_part(z)

    def complex_derivative(self, z) -> np.ndarray:
        """``F'(z)`` where ``G = Re F`` locally; ``G_x - i G_y = F'``."""
        z = np.asarray(z, dtype=complex)
        d = self.domain
        out = 1.0 / (z - self.pole)
        if isinstance(d, Disk):
            a = self.pole - d.center
            return out + np.conj(a) / (d.radius**2 - np.conj(a) * (z - d.center))
        u = z - d.center
        out = out + self.b0 / u
        if self.K_corr:
            k = np.arange(1, self.K_corr + 1)
            zo = k * (u[..., None] / d.r_outer) ** (k - 1) / d.r_outer
            zi = -k * (d.r_inner / u[..., None]) ** k / u[..., None]
            out = out + zo @ self.A + zi @ np.conj(self.B)
        return out

    def gradient(self, z) -> np.ndarray:
        """``G_x + i G_y``."""
        return np.conj(self.complex_derivative(z))


def _fit_annulus(d: Annulus, z0: complex, K: int):
    """Fit ``h`` so that ``G`` vanishes on both circles, modes ``|k| <= K``.

    With ``u = z - center`` the correction is
    ``a0 + b0 log|u| + Re sum_k (A_k (u/r_o)^k + conj(B_k) (r_i/u)^k)``
    and each Fourier mode gives a 2x2 system in the scaled unknowns.
    """
    M = max(4 * K, 64)
    theta = 2 * np.pi * np.arange(M) / M
    e = np.exp(1j * theta)
    a = z0 - d.center
    g_out = -np.log(np.abs(d.r_outer * e - a))
    g_in = -np.log(np.abs(d.r_inner * e - a))
    c_out = np.fft.fft(g_out) / M
    c_in = np.fft.fft(g_in) / M
    lo, li = np.log(d.r_outer), np.log(d.r_inner)
    b0 = (c_out[0].real - c_in[0].real) / (lo - li)
    a0 = c_out[0].real - b0 * lo
    k = np.arange(1, K + 1)
    q = (d.r_inner / d.r_outer) ** k
    # mode k >= 1 of Re(A (u/r_o)^k + conj(B) (r_i/u)^k) on a circle is
    # (A (r/r_o)^k + B (r_i/r)^k) / 2 as the e^{ik theta} coefficient
    rhs_o = 2 * c_out[1 : K + 1]
    rhs_i = 2 * c_in[1 : K + 1]
    det = 1 - q * q
    A = (rhs_o - q * rhs_i) / det
    B = (rhs_i - q * rhs_o) / det
    return a0, b0, A, B


def _boundary_residual(g: GreenSolution, m: int = 1024) -> float:
    d = g.domain
    theta = 2 * np.pi * (np.arange(m) + 0.5) / m
    res = 0.0
    for r, _ in d.circles:
        res = max(res, float(np.max(np.abs(g(d.center + r * np.exp(1j * theta))))))
    return res


def solve_green(d: Domain, z0: complex, K_corr: int | None = None) -> GreenSolution:
    """Green function of ``d`` with pole ``z0``.

    With ``K_corr=None`` the annulus truncation starts at 64 and doubles until
    the boundary residual drops below 1e-10 (cap 512). An explicit ``K_corr``
    is used as given.
    """
    z0 = complex(z0)
    if not d.contains(z0) or d.distance_to_boundary(z0) < 1e-6 * d.scale:
        raise ValueError(f"pole {z0} is not safely inside {d}")
    if isinstance(d, Disk):
        return GreenSolution(d, z0)
    if K_corr is not None:
        g = GreenSolution(d, z0, *_fit_annulus(d, z0, K_corr))
        return GreenSolution(d, z0, g.a0, g.b0, g.A, g.B, _boundary_residual(g))
    K = K_CORR_DEFAULT
    while True:
        g = GreenSolution(d, z0, *_fit_annulus(d, z0, K))
        res = _boundary_residual(g)
        if res < RESIDUAL_TOL or K >= K_CORR_CAP:
            if res >= RESIDUAL_TOL:
                log.warning("Green residual %.3g at the K_corr cap %d", res, K)
            return GreenSolution(d, z0, g.a0, g.b0, g.A, g.B, res)
        K *= 2


def green_normal_derivative(g: GreenSolution, w, tol: float = 1e-9) -> np.ndarray:
    """Outward normal derivative of ``G(., pole)`` at boundary points ``w``.

    Equals ``|grad G|`` there because ``G`` vanishes on the boundary.
    """
    w = np.asarray(w, dtype=complex)
    d = g.domain
    r = np.abs(w - d.center)
    on = np.zeros(r.shape, bool)
    for rc, _ in d.circles:
        on |= np.abs(r - rc) <= tol * d.scale
    if not np.all(on):
        raise ValueError("green_normal_derivative needs points on the boundary")
    return np.abs(g.complex_derivative(w))


def log_capacity(d: Domain, z0: complex, g: GreenSolution | None = None) -> float:
    """``exp(lim_{z->z0} G(z, z0) - log|z - z0|)``."""
    g = g or solve_green(d, z0)
    return float(np.exp(g.harmonic_part(np.asarray(z0))))


def harmonic_measure_inner(d: Annulus, z) -> np.ndarray:
    """Harmonic measure of the inner circle seen from ``z``."""
    r = np.abs(np.asarray(z) - d.center)
    return np.log(r / d.r_outer) / np.log(d.r_inner / d.r_outer)


@dataclass(frozen=True)
class HarmonicSeries:
    """``a0 + b0 log|z - c| + Re sum_k coeffs[k] (z - c)^k`` (k may be negative)."""

    center: complex = 0j
    a0: float = 0.0
    b0: float = 0.0
    coeffs: tuple[tuple[int, complex], ...] = ()

    def __call__(self, z):
        u = np.asarray(z, dtype=complex) - self.center
        out = self.a0 + self.b0 * np.log(np.abs(u)) if self.b0 else np.full(u.shape, self.a0)
        for k, c in self.coeffs:
            out = out + np.real(c * u**k)
        return out

    def gradient(self, z):
        u = np.asarray(z, dtype=complex) - self.center
        dF = self.b0 / u if self.b0 else np.zeros(u.shape, complex)
        for k, c in self.coeffs:
            dF = dF + c * k * u ** (k - 1)
        return np.conj(dF)

    def scaled(self, s: float) -> "HarmonicSeries":
        return HarmonicSeries(
            self.center, s * self.a0, s * self.b0, tuple((k, s * c) for k, c in self.coeffs)
        )


@dataclass(frozen=True)
class CharacterPeriod:
    value: float
    generator: int = 1  # boundary circle id; 1 is the inner circle of an annulus


def character_period(
    d: Domain,
    u: GreenSolution | HarmonicSeries | Callable,
    circle: int = 1,
    r: float | None = None,
    m: int = 512,
) -> CharacterPeriod:
    """Period of ``*du`` around the inner circle, counterclockwise.

    Computed as the flux ``oint du/dr ds`` over ``|z - c| = r``; ``u`` must
    expose ``gradient(z) = u_x + i u_y`` or be such a callable.
    """
    if not isinstance(d, Annulus):
        raise ValueError("characters are trivial on simply connected factors")
    if circle != 1:
        raise ValueError("the annulus fundamental group is generated by circle 1")
    if r is None:
        r = np.sqrt(d.r_inner * d.r_outer)
    if not (d.r_inner < r < d.r_outer):
        raise ValueError(f"integration radius {r} is outside the annulus")
    grad = u.gradient if hasattr(u, "gradient") else u
    e = np.exp(2j * np.pi * np.arange(m) / m)
    flux = np.real(grad(d.center + r * e) * np.conj(e))
    return CharacterPeriod(float(np.sum(flux) * 2 * np.pi * r / m), circle)


def characters_equal(p: CharacterPeriod, q: CharacterPeriod, tol: float = 1e-8) -> bool:
    if p.generator != q.generator:
        raise ValueError("periods live on different generators")
    delta = np.remainder(p.value - q.value, 2 * np.pi)
    return bool(min(delta, 2 * np.pi - delta) <= tol)
