"""Point values of weighted Bergman and Hardy kernels and their jet-constrained minima.

Every kernel here is computed in a truncated tensor basis: assemble the
weighted Gram matrix of the relevant norm, then either evaluate
``v^T G^{-1} conj(v)`` (sup over the space) or solve the equality-constrained
minimum of ``a^H G a`` under Taylor-coefficient constraints at the basepoint.

Norms (``n`` factors, basepoint ``z``):

* area: ``int_M |f|^2 c(-psi) prod e^{-phi_j}`` (Lebesgue measure)
* distinguished boundary: ``(2 pi)^{-n} int_S |f|^2 prod (dG_j/dv)^{-1} e^{-phi_j}``
* full boundary: ``sum_j (2 pi)^{-1} int_{dD_j x M_j} |f|^2 (1/p_j) (dG_j/dv)^{-1} prod_l e^{-phi_l}``
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .basis import (
    BasisSpec,
    GramMatrix,
    TensorBasis,
    _assemble,
    _kron_all,
    default_basis,
    gram_area,
    gram_boundary,
    gram_face_sum,
    jacobi_scaled,
)
from .geometry import (
    Annulus,
    AreaQuadrature,
    BoundaryQuadrature,
    Disk,
    Domain,
    ProductDomain,
    _gauss_interval,
    _mobius_pullback,
    area_quadrature,
    boundary_quadrature,
    mobius_polar_quadrature,
)
from .green import GreenSolution, green_normal_derivative, solve_green
from .jets import JetIdeal, JetTarget, MaximalIdeal, constrained_indices
from .weights import WeightSpec, is_constant, phis_for

log = logging.getLogger(__name__)

__all__ = [
    "Resolution",
    "KernelReport",
    "constrained_minimum",
    "sup_value",
    "bergman_gram",
    "hardy_S_gram",
    "hardy_dM_gram",
    "bergman_kernel_at",
    "bergman_min_at",
    "hardy_S_kernel_at",
    "hardy_S_min_at",
    "hardy_dM_kernel_at",
    "hardy_dM_min_at",
    "cauchy_extend",
]


@dataclass(frozen=True)
class Resolution:
    """Quadrature sizes: nodes per boundary circle, radial GL nodes, angular nodes."""

    boundary: int = 512
    radial: int = 48
    angular: int = 128


DEFAULT_RES = Resolution()
REFINE_STEPS = 2


@dataclass(frozen=True)
class KernelReport:
    value: float
    N: int
    sizes: Resolution
    condition: float
    dim: int
    ridge: float = 0.0
    coeffs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not (np.isfinite(self.value) and self.value > 0):
            raise ValueError(f"kernel value {self.value} is not finite and positive")


# ---------------------------------------------------------------- linear algebra


def _cholesky(Gs: np.ndarray):
    try:
        return sla.cho_factor(Gs, lower=True, check_finite=True)
    except sla.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "Gram matrix is singular beyond the ridge regularization"
        ) from exc


def sup_value(G: np.ndarray, v: np.ndarray) -> tuple[float, np.ndarray, float]:
    """``sup |v^T a|^2 / a^H G a``; returns (value, maximizer coefficients, ridge)."""
    G = np.asarray(G)
    Gs, s, eps = jacobi_scaled(G)
    u = s * np.conj(v)
    cf = _cholesky(Gs)
    x = sla.cho_solve(cf, u)
    # refinement against the unridged matrix strips most of the ridge bias;
    # each step contracts by eps / (lambda + eps) < 1
    G0 = Gs - eps * np.eye(len(s))
    for _ in range(REFINE_STEPS):
        x = x + sla.cho_solve(cf, u - G0 @ x)
    return float(np.real(np.vdot(u, x))), s * x, eps


def constrained_minimum(G: np.ndarray, C: np.ndarray, b: np.ndarray):
    """``min a^H G a`` subject to ``C a = b``; returns ``(a, value)``.

    Null-space method: after unit-diagonal scaling, a QR factorization of
    ``C^H`` splits the unknowns into a particular solution plus a free part
    solved by Cholesky. A KKT solve takes over when the reduced matrix is not
    numerically positive definite. Raises ``ValueError`` when the constraints
    cannot be met.
    """
    G = np.asarray(G)
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if not (np.all(np.isfinite(C)) and np.all(np.isfinite(b))):
        raise ValueError("constraint data is not finite")
    Gs, s, eps = jacobi_scaled(G)
    G0 = Gs - eps * np.eye(len(s))
    Cs = C * s[None, :]
    rn = np.linalg.norm(Cs, axis=1)
    if np.any(rn == 0):
        if np.any(b[rn == 0] != 0):
            raise ValueError("infeasible: a constraint row vanishes on the whole basis")
        keep = rn > 0
        Cs, b, rn = Cs[keep], b[keep], rn[keep]
    Cs = Cs / rn[:, None]
    b = b / rn
    m, D = Cs.shape
    if m == 0:
        return np.zeros(D, complex), 0.0
    Q, R = np.linalg.qr(Cs.conj().T, mode="complete")
    dR = np.abs(np.diag(R[:m, :m])) if m <= D else np.zeros(0)
    full_rank = m <= D and dR.min() > 1e-10 * dR.max()
    y = None
    if full_rank:
        yp = Q[:, :m] @ sla.solve_triangular(R[:m, :m].conj().T, b, lower=True)
        Z = Q[:, m:]
        if Z.shape[1] == 0:
            y = yp
        else:
            H = Z.conj().T @ Gs @ Z
            H0 = Z.conj().T @ G0 @ Z
            g = Z.conj().T @ (G0 @ yp)
            try:
                cf = sla.cho_factor(0.5 * (H + H.conj().T), lower=True)
                w = sla.cho_solve(cf, g)
                for _ in range(REFINE_STEPS):
                    w = w + sla.cho_solve(cf, g - H0 @ w)
                y = yp - Z @ w
            except sla.LinAlgError:
                log.debug("reduced Gram not PD, falling back to KKT")
    if y is None:
        y = _kkt(Gs, Cs, b)
    if np.linalg.norm(Cs @ y - b) > 1e-8 * max(np.linalg.norm(b), 1.0):
        raise ValueError("infeasible: jet constraints cannot be met in this truncation")
    val = float(np.real(np.vdot(y, G0 @ y)))
    if not val > 0:
        val = float(np.real(np.vdot(y, Gs @ y)))
    return s * y, val


def _kkt(Gs, Cs, b):
    m, D = Cs.shape
    K = np.block([[Gs, Cs.conj().T], [Cs, np.zeros((m, m))]])
    rhs = np.concatenate([np.zeros(D, complex), b])
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:D]


# ---------------------------------------------------------------- factor Grams


@lru_cache(maxsize=256)
def _green(d: Domain, z0: complex) -> GreenSolution:
    return solve_green(d, z0)


def _factor_boundary_gram(b: BasisSpec, d: Domain, z0, phi, m: int) -> np.ndarray:
    """``(2 pi)^{-1} int_{dD} |f|^2 (dG/dv)^{-1} e^{-phi} ds``."""
    g = _green(d, complex(z0))
    qs = boundary_quadrature(d, m)

    def weight(w):
        return np.exp(-phi(w, d, z0)) / green_normal_derivative(g, w)

    return gram_boundary(b, qs, weight).entries


def _factor_plain_boundary_gram(b: BasisSpec, d: Domain, z0, phi, m: int) -> np.ndarray:
    qs = boundary_quadrature(d, m)
    return gram_boundary(b, qs, lambda w: np.exp(-phi(w, d, z0))).entries


def _factor_area_gram(b: BasisSpec, d: Domain, z0, phi, res: Resolution) -> np.ndarray:
    q = area_quadrature(d, res.radial, res.angular)
    return gram_area(b, q, lambda w: np.exp(-phi(w, d, z0))).entries


def _factor_sublevel_gram(b, d: Disk, z0, phi, res: Resolution, r_max: float) -> np.ndarray:
    q = mobius_polar_quadrature(d, z0, res.radial, res.angular, r_max)
    return gram_area(b, q, lambda w: np.exp(-phi(w, d, z0))).entries


def _bases(pd: ProductDomain, N: int) -> TensorBasis:
    return TensorBasis(tuple(default_basis(d, N) for d in pd.factors))


def _check_p(p, n):
    if p is None:
        raise ValueError("exponents p are required for this weight")
    p = tuple(float(x) for x in p)
    if len(p) != n or any(x <= 0 for x in p):
        raise ValueError(f"need {n} positive exponents, got {p}")
    return p


# ---------------------------------------------------------------- product Grams


def bergman_gram(
    pd: ProductDomain,
    weights: WeightSpec,
    N: int,
    *,
    p: Sequence[float] | None = None,
    t: float = 0.0,
    res: Resolution = DEFAULT_RES,
) -> tuple[GramMatrix, TensorBasis]:
    """Area Gram on ``{psi < -t}`` with weight ``c(-psi) prod e^{-phi_j}``.

    Constant ``c`` factorizes into a Kronecker product. Otherwise the region
    is split by which ``2 p_k G_k`` attains the max of ``psi``; in Green-polar
    coordinates of factor ``k`` the remaining factors are sublevel disks, so
    each piece is a radial sum of Kronecker products (disk factors only).
    """
    phis = phis_for(weights, pd.n)
    tb = _bases(pd, N)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if is_constant(weights.c) and t == 0:
        mats = [
            _factor_area_gram(b, d, z0, ph, res)
            for b, d, z0, ph in zip(tb.factors, pd.factors, pd.basepoint, phis)
        ]
        return GramMatrix(_kron_all(mats), "area"), tb
    p = _check_p(p, pd.n)
    if all(isinstance(d, Disk) for d in pd.factors):
        if is_constant(weights.c):
            mats = [
                _factor_sublevel_gram(b, d, z0, ph, res, np.exp(-t / (2 * pj)))
                for b, d, z0, ph, pj in zip(tb.factors, pd.factors, pd.basepoint, phis, p)
            ]
            return GramMatrix(_kron_all(mats), "area"), tb
        return GramMatrix(_psi_split_gram(pd, phis, weights.c, p, t, tb, res), "area"), tb
    if pd.n == 1 and t == 0:
        d, z0, ph = pd.factors[0], pd.basepoint[0], phis[0]
        g = _green(d, complex(z0))
        q = area_quadrature(d, res.radial, res.angular)
        c = weights.c

        def weight(w):
            return np.exp(-ph(w, d, z0)) * c(-2 * p[0] * g(w))

        return gram_area(tb.factors[0], q, weight), tb
    raise ValueError("non-constant c or t > 0 needs disk factors (or a single annulus at t = 0)")


def _psi_split_gram(pd, phis, c, p, t, tb: TensorBasis, res: Resolution) -> np.ndarray:
    n = pd.n
    theta = 2 * np.pi * np.arange(res.angular) / res.angular
    e = np.exp(1j * theta)
    total = np.zeros((tb.dim, tb.dim), complex)
    for k in range(n):
        d, z0, ph, b = pd.factors[k], pd.basepoint[k], phis[k], tb.factors[k]
        r_top = np.exp(-t / (2 * p[k]))
        rs, wr = _gauss_interval(res.radial, 0.0, r_top)
        for r, w in zip(rs, wr):
            sk = -2 * p[k] * np.log(r)
            z, jac = _mobius_pullback(d, z0, r * e, np.full(res.angular, w * r * 2 * np.pi / res.angular))
            ring = _assemble(b(z), jac * np.exp(-ph(z, d, z0)) * float(c(sk)))
            mats = []
            for j in range(n):
                if j == k:
                    mats.append(ring)
                else:
                    rj = r ** (p[k] / p[j])
                    mats.append(
                        _factor_sublevel_gram(tb.factors[j], pd.factors[j], pd.basepoint[j], phis[j], res, rj)
                    )
            total += _kron_all(mats)
    return 0.5 * (total + total.conj().T)


def hardy_S_gram(
    pd: ProductDomain,
    weights: WeightSpec,
    N: int,
    *,
    green: bool = True,
    res: Resolution = DEFAULT_RES,
) -> tuple[GramMatrix, TensorBasis]:
    """Distinguished-boundary Gram; ``green=False`` drops the ``(dG/dv)^{-1}`` factors."""
    phis = phis_for(weights, pd.n)
    tb = _bases(pd, N)
    build = _factor_boundary_gram if green else _factor_plain_boundary_gram
    mats = [
        build(b, d, z0, ph, res.boundary)
        for b, d, z0, ph in zip(tb.factors, pd.factors, pd.basepoint, phis)
    ]
    return GramMatrix(_kron_all(mats), "S"), tb


def hardy_dM_gram(
    pd: ProductDomain,
    weights: WeightSpec,
    p: Sequence[float],
    N: int,
    *,
    res: Resolution = DEFAULT_RES,
) -> tuple[GramMatrix, TensorBasis]:
    phis = phis_for(weights, pd.n)
    p = _check_p(p, pd.n)
    tb = _bases(pd, N)
    bnd, area = [], []
    for b, d, z0, ph, pj in zip(tb.factors, pd.factors, pd.basepoint, phis, p):
        bnd.append(_factor_boundary_gram(b, d, z0, ph, res.boundary) / pj)
        area.append(_factor_area_gram(b, d, z0, ph, res))
    return gram_face_sum(bnd, area), tb


# ---------------------------------------------------------------- kernels


def _condition(G: np.ndarray) -> float:
    Gs, _, _ = jacobi_scaled(G)
    return float(np.linalg.cond(Gs))


def kernel_from_gram(G: GramMatrix, tb: TensorBasis, z0, res: Resolution, N: int) -> KernelReport:
    v = tb.eval_at(z0)
    val, coeffs, eps = sup_value(G.entries, v)
    return KernelReport(val, N, res, _condition(G.entries), tb.dim, eps, coeffs)


def jet_constraints(tb: TensorBasis, z0, ideal: JetIdeal, target: JetTarget, N: int):
    """Rows and right-hand side pinning Taylor coefficients off the ideal."""
    alphas = constrained_indices(ideal)
    if len(alphas[0]) != len(tb.factors):
        raise ValueError("ideal dimension does not match the domain")
    top = max(max(a) for a in alphas)
    if top > N - 2:
        raise ValueError(f"constrained degree {top} exceeds the cap N - 2 = {N - 2}")
    rhs = target.vector(alphas)
    if not np.any(rhs != 0):
        raise ValueError("target lies in the ideal: every constrained coefficient is zero")
    return tb.taylor(z0, alphas), rhs


def min_from_gram(
    G: GramMatrix, tb: TensorBasis, z0, ideal: JetIdeal, target: JetTarget, res: Resolution, N: int
) -> KernelReport:
    C, rhs = jet_constraints(tb, z0, ideal, target, N)
    a, val = constrained_minimum(G.entries, C, rhs)
    return KernelReport(1.0 / val, N, res, _condition(G.entries), tb.dim, 0.0, a)


def _res(res, N: int = 0) -> Resolution:
    """Requested sizes, raised so no basis product ``b_k conj(b_l)`` aliases.

    Products carry angular frequencies up to ``2N`` and radial powers up to
    ``2N + 1``; the floors below keep both resolved with a margin for the weight.
    """
    res = DEFAULT_RES if res is None else res
    ang = max(res.angular, 4 * N + 16)
    bnd = max(res.boundary, 4 * N + 16)
    return Resolution(bnd + bnd % 2, max(res.radial, N + 16), ang + ang % 2)


def bergman_kernel_at(pd, weights, N=16, *, p=None, res=None) -> KernelReport:
    res = _res(res, N)
    G, tb = bergman_gram(pd, weights, N, p=p, res=res)
    return kernel_from_gram(G, tb, pd.basepoint, res, N)


def bergman_min_at(pd, weights, ideal, target, N=16, *, p=None, res=None) -> KernelReport:
    res = _res(res, N)
    G, tb = bergman_gram(pd, weights, N, p=p, res=res)
    return min_from_gram(G, tb, pd.basepoint, ideal, target, res, N)


def hardy_S_kernel_at(pd, weights, N=16, *, green=True, res=None) -> KernelReport:
    res = _res(res, N)
    G, tb = hardy_S_gram(pd, weights, N, green=green, res=res)
    return kernel_from_gram(G, tb, pd.basepoint, res, N)


def hardy_S_min_at(pd, weights, ideal, target, N=16, *, green=True, res=None) -> KernelReport:
    res = _res(res, N)
    G, tb = hardy_S_gram(pd, weights, N, green=green, res=res)
    return min_from_gram(G, tb, pd.basepoint, ideal, target, res, N)


def hardy_dM_kernel_at(pd, weights, p, N=16, *, res=None) -> KernelReport:
    res = _res(res, N)
    G, tb = hardy_dM_gram(pd, weights, p, N, res=res)
    return kernel_from_gram(G, tb, pd.basepoint, res, N)


def hardy_dM_min_at(pd, weights, p, ideal, target, N=16, *, res=None) -> KernelReport:
    res = _res(res, N)
    G, tb = hardy_dM_gram(pd, weights, p, N, res=res)
    return min_from_gram(G, tb, pd.basepoint, ideal, target, res, N)


def maximal(n: int) -> MaximalIdeal:
    return MaximalIdeal(n)


# ---------------------------------------------------------------- Cauchy recovery


def cauchy_extend(samples, qs: Sequence[BoundaryQuadrature], z: complex) -> complex:
    """``(2 pi i)^{-1} oint f(w)/(w - z) dw`` over all boundary circles.

    ``samples`` are the values of ``f`` on the concatenated nodes of ``qs``.
    Inner circles are traversed clockwise, which the outward normals encode.
    """
    z = complex(z)
    nodes = np.concatenate([q.nodes for q in qs])
    f = np.asarray(samples, dtype=complex)
    if f.shape != nodes.shape:
        raise ValueError("one sample per boundary node is required")
    dist = np.min(np.abs(nodes - z))
    scale = max(q.radius for q in qs)
    if dist < 1e-3 * scale:
        log.warning("Cauchy evaluation %.3g from the boundary: expect lost accuracy", dist)
    # dw = i n ds with n the outward normal (positive orientation of the boundary)
    dw = np.concatenate([1j * q.outward_normals * q.weights for q in qs])
    return complex(np.sum(f * dw / (nodes - z)) / (2j * np.pi))
