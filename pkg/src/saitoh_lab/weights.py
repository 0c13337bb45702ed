"""Weight presets ``e^{-phi_j}`` per factor and gain profiles ``c(t)``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Annulus, Disk, Domain
from .green import HarmonicSeries

__all__ = [
    "Zero",
    "HarmonicLogPower",
    "LogAbsPoly",
    "GaussianBump",
    "Phi",
    "CWeight",
    "Constant",
    "Exponential",
    "Affine",
    "WeightSpec",
    "c_integral",
    "is_constant",
    "tuned_log_power",
]


@dataclass(frozen=True)
class Zero:
    def __call__(self, z, domain: Domain, z0: complex):
        return np.zeros(np.shape(z))

    def is_harmonic(self, domain: Domain) -> bool:
        return True

    def harmonic_u(self, domain: Domain) -> HarmonicSeries:
        return HarmonicSeries(domain.center)


@dataclass(frozen=True)
class HarmonicLogPower:
    """``phi = 2 s log|z - center|`` on an annulus."""

    s: float

    def __call__(self, z, domain: Domain, z0: complex):
        if not isinstance(domain, Annulus):
            raise ValueError("HarmonicLogPower is only defined on annulus factors")
        return 2 * self.s * np.log(np.abs(np.asarray(z) - domain.center))

    def is_harmonic(self, domain: Domain) -> bool:
        return True

    def harmonic_u(self, domain: Domain) -> HarmonicSeries:
        return HarmonicSeries(domain.center, b0=self.s)


@dataclass(frozen=True)
class LogAbsPoly:
    """``phi = 2 log|g| + 2 u`` with ``g`` a polynomial (ascending coefficients)."""

    poly: tuple[complex, ...] = (1.0,)
    u: HarmonicSeries = HarmonicSeries()

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(complex(c) for c in self.poly))

    def g(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.poly)

    def __call__(self, z, domain: Domain, z0: complex):
        with np.errstate(divide="ignore"):
            return 2 * np.log(np.abs(self.g(z))) + 2 * self.u(z)

    def _zeros(self):
        p = np.trim_zeros(np.asarray(self.poly), "b")
        return np.polynomial.polynomial.polyroots(p) if len(p) > 1 else np.zeros(0)

    def is_harmonic(self, domain: Domain) -> bool:
        # closure matters: zeros on the boundary spoil the weight too
        return not np.any(domain.contains(self._zeros(), margin=-1e-12)) if len(self._zeros()) else True

    def harmonic_u(self, domain: Domain) -> HarmonicSeries:
        return self.u


@dataclass(frozen=True)
class GaussianBump:
    """``phi = a |z - z0|^2``: subharmonic, harmonic only when ``a == 0``."""

    a: float

    def __call__(self, z, domain: Domain, z0: complex):
        return self.a * np.abs(np.asarray(z) - z0) ** 2

    def is_harmonic(self, domain: Domain) -> bool:
        return self.a == 0

    def harmonic_u(self, domain: Domain) -> HarmonicSeries | None:
        return HarmonicSeries(domain.center) if self.a == 0 else None


Phi = Zero | HarmonicLogPower | LogAbsPoly | GaussianBump


@dataclass(frozen=True)
class Constant:
    def __call__(self, t):
        return np.ones(np.shape(t))

    def tail(self, t):
        return np.exp(-np.asarray(t, dtype=float))

    def tail_inverse(self, r):
        return -np.log(r)


@dataclass(frozen=True)
class Exponential:
    """``c(t) = exp(-a t)``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("Exponential gain needs a > 0")

    def __call__(self, t):
        return np.exp(-self.a * np.asarray(t, dtype=float))

    def tail(self, t):
        return np.exp(-(1 + self.a) * np.asarray(t, dtype=float)) / (1 + self.a)

    def tail_inverse(self, r):
        return -np.log((1 + self.a) * np.asarray(r)) / (1 + self.a)


@dataclass(frozen=True)
class Affine:
    """``c(t) = 1 + b t`` with ``0 < b <= 1``."""

    b: float

    def __post_init__(self):
        if not 0 < self.b <= 1:
            raise ValueError("Affine gain needs 0 < b <= 1 for c(t) e^{-t} to decrease")

    def __call__(self, t):
        return 1 + self.b * np.asarray(t, dtype=float)

    def tail(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-t) * (1 + self.b * (t + 1))

    def tail_inverse(self, r):
        from scipy.optimize import brentq

        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = [brentq(lambda t: float(self.tail(t)) - ri, 0.0, 800.0) for ri in r]
        return np.array(out) if len(out) > 1 else out[0]


CWeight = Constant | Exponential | Affine


@dataclass(frozen=True)
class WeightSpec:
    """Per-factor ``phi_j`` plus the gain profile entering ``c(-psi)``."""

    phis: tuple[Phi, ...]
    c: CWeight = Constant()

    def __post_init__(self):
        object.__setattr__(self, "phis", tuple(self.phis))

    @classmethod
    def flat(cls, n: int, c: CWeight = Constant()) -> "WeightSpec":
        return cls(tuple(Zero() for _ in range(n)), c)

    def exp_neg_phi(self, j: int, z, domain: Domain, z0: complex) -> np.ndarray:
        val = np.exp(-self.phis[j](z, domain, z0))
        if not np.all(np.isfinite(val)) or np.any(val <= 0):
            raise ValueError(f"e^-phi of factor {j} is not finite and positive on the nodes")
        return val

    def factor(self, j: int) -> "WeightSpec":
        return WeightSpec((self.phis[j],), self.c)


def c_integral(c: CWeight) -> float:
    return float(c.tail(0.0))


def is_constant(c: CWeight) -> bool:
    return isinstance(c, Constant)


def phis_for(spec: WeightSpec, n: int) -> Sequence[Phi]:
    if len(spec.phis) != n:
        raise ValueError(f"{n} factors but {len(spec.phis)} weight presets")
    return spec.phis


def tuned_log_power(d: Annulus, z0: complex, power: int = 1, detune: float = 0.0) -> HarmonicLogPower:
    """``phi = 2 s log|z - c|`` with ``chi_{z0}^power = chi_{-phi/2}``.

    The period of ``-s log|z - c|`` is ``-2 pi s``; ``s`` is solved from the
    flux of ``G(., z0)`` around the hole, reduced to ``[0, 1)``, then shifted
    by ``detune``.
    """
    from .green import character_period, solve_green

    if not isinstance(d, Annulus):
        raise ValueError("character tuning needs an annulus")
    g = solve_green(d, z0)
    r = 0.5 * (d.r_inner + abs(complex(z0) - d.center))
    period = character_period(d, g, r=r, m=1024).value
    s = float(np.remainder(-power * period / (2 * np.pi), 1.0))
    return HarmonicLogPower(s + detune)
