"""Minimal weighted L^2 integrals ``G(t)`` over sublevel sets ``{psi < -t}``.

``psi = max_j 2 p_j G_j(w_j, z_j)`` on a product of centered disks. ``G(t)``
is the least ``int_{psi<-t} |f|^2 c(-psi) prod e^{-phi_j}`` among truncated
polynomials whose jet at the basepoint matches ``h0`` modulo ``I``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Disk, ProductDomain
from .jets import JetIdeal, JetTarget, constrained_indices, ideal_contains, multiplier_E
from .kernels import Resolution, _res, bergman_gram, constrained_minimum, jet_constraints
from .weights import (
    Affine,
    Constant,
    CWeight,
    Exponential,
    GaussianBump,
    LogAbsPoly,
    WeightSpec,
    Zero,
)

__all__ = [
    "CWeight",
    "Constant",
    "Exponential",
    "Affine",
    "MinL2Setup",
    "ConcavityReport",
    "c_tail",
    "g_of_t",
    "g_curve",
    "closed_form_G",
    "monomial_sublevel_integral",
    "concavity_report",
    "default_t_grid",
]


def c_tail(c: CWeight, t) -> float | np.ndarray:
    """``h(t) = int_t^inf c(l) e^{-l} dl``."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be nonnegative")
    out = c.tail(t)
    return float(out) if np.ndim(out) == 0 else out


def default_t_grid(n: int = 9, r_min: float = 0.1) -> np.ndarray:
    """``e^{-t}`` geometric from 1 down to ``r_min``."""
    return -np.log(np.geomspace(1.0, r_min, n))


@dataclass(frozen=True)
class MinL2Setup:
    domain: ProductDomain
    p: tuple[float, ...]
    weights: WeightSpec
    ideal: JetIdeal
    target: JetTarget

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        pd = self.domain
        if len(self.p) != pd.n or len(self.weights.phis) != pd.n:
            raise ValueError("exponents and weights must match the factor count")
        for d, z in zip(pd.factors, pd.basepoint):
            if not isinstance(d, Disk) or abs(z - d.center) > 0:
                raise ValueError("minimal L2 setups need disk factors with centered basepoints")
        # I(psi) must sit inside I: every index outside I is outside I(psi) too
        for a in constrained_indices(self.ideal):
            if sum((x + 1) / q for x, q in zip(a, self.p)) > 1:
                raise ValueError(f"I(psi) is not contained in I: {a} is in I(psi) but not in I")


def g_of_t(s: MinL2Setup, t: float, N: int = 16, res: Resolution | None = None) -> float:
    """Minimal integral on ``{psi < -t}`` with weight ``c(-psi) prod e^{-phi_j}``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    res = _res(res, N)
    G, tb = bergman_gram(s.domain, s.weights, N, p=s.p, t=t, res=res)
    C, rhs = jet_constraints(tb, s.domain.basepoint, s.ideal, s.target, N)
    return constrained_minimum(G.entries, C, rhs)[1]


def g_curve(s: MinL2Setup, ts: Sequence[float], N: int = 16, res=None) -> np.ndarray:
    return np.array([g_of_t(s, float(t), N, res) for t in ts])


def _phi_at_center(phi, d: Disk) -> float:
    if isinstance(phi, Zero) or (isinstance(phi, GaussianBump) and phi.a == 0):
        return 0.0
    if isinstance(phi, LogAbsPoly) and phi.is_harmonic(d):
        return float(phi(np.asarray(d.center), d, d.center))
    raise ValueError(f"{phi} is not a harmonic preset with a closed form")


def closed_form_G(s: MinL2Setup, t: float) -> float:
    """Flat-case value ``h(t) sum_E |d_a|^2 pi^n e^{-phi(z)} / prod (a_j+1) c_j^{2a_j+2}``.

    Lebesgue normalization (``pi^n``); the capacity of a disk of radius ``R``
    at its center is ``1/R``. ``h0`` must be supported on the equality set
    ``E = {sum (a_j+1)/p_j = 1}`` and ``I`` must not constrain anything else.
    """
    pd = s.domain
    E = set(multiplier_E(s.p))
    d = s.target.as_dict()
    for a in constrained_indices(s.ideal):
        if a not in E and abs(d.get(a, 0)) > 0:
            raise ValueError(f"target has a coefficient off the equality set at {a}")
    phi0 = sum(_phi_at_center(ph, f) for ph, f in zip(s.weights.phis, pd.factors))
    total = 0.0
    for a in E:
        if ideal_contains(s.ideal, a):
            continue
        coef = abs(d.get(a, 0)) ** 2
        if coef == 0:
            continue
        denom = 1.0
        for aj, f in zip(a, pd.factors):
            cap = 1.0 / f.radius
            denom *= (aj + 1) * cap ** (2 * aj + 2)
        total += coef * np.pi**pd.n / denom
    return float(c_tail(s.weights.c, t) * total * np.exp(-phi0))


def monomial_sublevel_integral(alpha: Sequence[int], p: Sequence[float], t: float) -> float:
    """``int_{psi<-t} |w^alpha|^2`` on the unit polydisc, ``psi = max 2 p_j log|w_j|``."""
    expo = sum((a + 1) / q for a, q in zip(alpha, p))
    return float(np.exp(-expo * t) * np.pi ** len(alpha) / np.prod([a + 1 for a in alpha]))


@dataclass(frozen=True)
class ConcavityReport:
    r: np.ndarray
    G: np.ndarray
    second_differences: np.ndarray
    max_violation: float
    linear: bool
    slopes: np.ndarray


def concavity_report(ts, Gs, c: CWeight, lin_tol: float = 1e-6) -> ConcavityReport:
    """Second divided differences of ``G`` against ``r = h(t)``.

    A positive second difference is a concavity violation. ``linear`` is set
    when every second difference is below ``lin_tol`` times ``max G``.
    """
    ts = np.asarray(ts, dtype=float)
    Gs = np.asarray(Gs, dtype=float)
    if len(ts) < 5:
        raise ValueError("need at least 5 grid points")
    r = np.asarray(c_tail(c, ts), dtype=float)
    order = np.argsort(r)
    r, Gv = r[order], Gs[order]
    slopes = np.diff(Gv) / np.diff(r)
    mid = 0.5 * (r[2:] - r[:-2])
    sd = np.diff(slopes) / mid
    scale = float(np.max(np.abs(Gv)))
    viol = float(max(np.max(sd), 0.0))
    lin = bool(np.max(np.abs(sd)) < lin_tol * scale)
    return ConcavityReport(r, Gv, sd, viol, lin, slopes)
