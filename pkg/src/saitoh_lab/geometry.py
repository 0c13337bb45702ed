"""Planar factor domains, product domains and their quadrature rules.

Only disks and concentric annuli are supported. All quadratures are
trapezoidal in angle (spectrally accurate for analytic periodic data) and,
for area rules, Gauss-Legendre in the radial variable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "Disk",
    "Annulus",
    "Domain",
    "ProductDomain",
    "BoundaryQuadrature",
    "AreaQuadrature",
    "boundary_quadrature",
    "area_quadrature",
    "mobius_polar_quadrature",
    "mobius_circle_image",
    "sublevel_region",
]


@dataclass(frozen=True)
class Disk:
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    kind = "disk"

    @property
    def scale(self) -> float:
        return self.radius

    @property
    def area(self) -> float:
        return np.pi * self.radius**2

    @property
    def circles(self) -> tuple[tuple[float, int], ...]:
        # (radius, orientation): +1 outer, -1 inner boundary circle
        return ((self.radius, 1),)

    def contains(self, z, margin: float = 0.0):
        return np.abs(np.asarray(z) - self.center) < self.radius - margin

    def distance_to_boundary(self, z) -> float:
        return float(self.radius - abs(complex(z) - self.center))


@dataclass(frozen=True)
class Annulus:
    center: complex = 0j
    r_inner: float = 0.5
    r_outer: float = 1.0

    def __post_init__(self):
        if not (0 < self.r_inner < self.r_outer):
            raise ValueError(
                f"annulus needs 0 < r_inner < r_outer, got {self.r_inner}, {self.r_outer}"
            )
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "r_inner", float(self.r_inner))
        object.__setattr__(self, "r_outer", float(self.r_outer))

    kind = "annulus"

    @property
    def scale(self) -> float:
        return self.r_outer

    @property
    def area(self) -> float:
        return np.pi * (self.r_outer**2 - self.r_inner**2)

    @property
    def circles(self) -> tuple[tuple[float, int], ...]:
        return ((self.r_outer, 1), (self.r_inner, -1))

    def contains(self, z, margin: float = 0.0):
        r = np.abs(np.asarray(z) - self.center)
        return (r > self.r_inner + margin) & (r < self.r_outer - margin)

    def distance_to_boundary(self, z) -> float:
        r = abs(complex(z) - self.center)
        return float(min(r - self.r_inner, self.r_outer - r))


Domain = Disk | Annulus


@dataclass(frozen=True)
class ProductDomain:
    factors: tuple[Domain, ...]
    basepoint: tuple[complex, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        base = tuple(complex(z) for z in self.basepoint)
        if len(factors) == 0:
            raise ValueError("a product domain needs at least one factor")
        if len(base) != len(factors):
            raise ValueError(
                f"{len(factors)} factors but {len(base)} basepoint coordinates"
            )
        for j, (d, z) in enumerate(zip(factors, base)):
            if not d.contains(z):
                raise ValueError(f"basepoint coordinate {j} = {z} is not inside {d}")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "basepoint", base)

    @property
    def n(self) -> int:
        return len(self.factors)

    def factor(self, j: int) -> "ProductDomain":
        return ProductDomain((self.factors[j],), (self.basepoint[j],))


@dataclass(frozen=True)
class BoundaryQuadrature:
    """Trapezoid rule on one boundary circle; normals point out of the domain."""

    nodes: np.ndarray
    weights: np.ndarray
    outward_normals: np.ndarray
    component_id: int
    radius: float = field(default=0.0)


@dataclass(frozen=True)
class AreaQuadrature:
    nodes: np.ndarray
    weights: np.ndarray


def boundary_quadrature(d: Domain, m: int, *, allow_small: bool = False) -> list[BoundaryQuadrature]:
    """Equispaced nodes on every boundary circle of ``d``.

    ``allow_small`` lifts the ``m >= 8`` guard; it exists for hand checks only.
    """
    if not allow_small and m < 8:
        raise ValueError(f"need at least 8 nodes per circle, got {m}")
    if m % 2:
        raise ValueError(f"node count must be even, got {m}")
    theta = 2 * np.pi * np.arange(m) / m
    e = np.exp(1j * theta)
    out = []
    for cid, (r, orient) in enumerate(d.circles):
        out.append(
            BoundaryQuadrature(
                nodes=d.center + r * e,
                weights=np.full(m, 2 * np.pi * r / m),
                outward_normals=orient * e,
                component_id=cid,
                radius=r,
            )
        )
    return out


def _gauss_interval(m: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _polar_tensor(m_r: int, m_theta: int, r0: float, r1: float):
    r, wr = _gauss_interval(m_r, r0, r1)
    theta = 2 * np.pi * np.arange(m_theta) / m_theta
    zeta = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    w = (wr * r)[:, None] * np.full(m_theta, 2 * np.pi / m_theta)[None, :]
    return zeta, w.ravel()


def area_quadrature(d: Domain, m_r: int, m_theta: int) -> AreaQuadrature:
    """Gauss-Legendre (radius) x trapezoid (angle) rule, Jacobian included."""
    if m_r < 4 or m_theta < 8:
        raise ValueError(f"need m_r >= 4 and m_theta >= 8, got {m_r}, {m_theta}")
    if isinstance(d, Annulus):
        if d.r_inner >= d.r_outer:
            raise ValueError("degenerate annulus")
        zeta, w = _polar_tensor(m_r, m_theta, d.r_inner, d.r_outer)
    else:
        zeta, w = _polar_tensor(m_r, m_theta, 0.0, d.radius)
    return AreaQuadrature(nodes=d.center + zeta, weights=w)


def _normalized_base(d: Disk, z0: complex) -> complex:
    return (complex(z0) - d.center) / d.radius


def mobius_polar_quadrature(
    d: Disk, z0: complex, m_r: int, m_theta: int, r_max: float = 1.0
) -> AreaQuadrature:
    """Area rule on ``{|T(z)| < r_max}`` built in Green-polar coordinates.

    ``T`` is the disk automorphism sending ``z0`` to 0, so the Green function
    with pole ``z0`` equals ``log|zeta|`` at the node ``z = T^{-1}(zeta)``.
    """
    if not isinstance(d, Disk):
        raise TypeError("Green-polar coordinates are only available on disks")
    zeta, w = _polar_tensor(m_r, m_theta, 0.0, r_max)
    return AreaQuadrature(*_mobius_pullback(d, z0, zeta, w))


def _mobius_pullback(d: Disk, z0: complex, zeta: np.ndarray, w: np.ndarray):
    a = _normalized_base(d, z0)
    denom = 1 + np.conj(a) * zeta
    u = (zeta + a) / denom
    jac = (d.radius * (1 - abs(a) ** 2)) ** 2 / np.abs(denom) ** 4
    return d.center + d.radius * u, w * jac


def mobius_circle_image(d: Disk, z0: complex, r: float) -> Disk:
    """The disk ``{|T(z)| < r}`` as an ordinary (center, radius) disk."""
    a = _normalized_base(d, z0)
    aa = abs(a) ** 2
    center = a * (1 - r**2) / (1 - aa * r**2)
    radius = r * (1 - aa) / (1 - aa * r**2)
    return Disk(d.center + d.radius * center, d.radius * radius)


def sublevel_region(p: ProductDomain, exponents: Sequence[float], t: float) -> ProductDomain:
    """Factor regions of ``{max_j 2 p_j G_j(w_j, z_j) < -t}``."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    exps = tuple(float(e) for e in exponents)
    if len(exps) != p.n:
        raise ValueError(f"{p.n} factors but {len(exps)} exponents")
    if t == 0:
        return p
    factors = []
    for d, z0, pj in zip(p.factors, p.basepoint, exps):
        if not isinstance(d, Disk):
            raise ValueError(
                f"sublevel sets of annulus factors are not supported (t={t} > 0)"
            )
        factors.append(mobius_circle_image(d, z0, np.exp(-t / (2 * pj))))
    return ProductDomain(tuple(factors), p.basepoint)
