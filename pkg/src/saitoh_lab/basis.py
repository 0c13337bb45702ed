"""Truncated holomorphic bases, weighted Gram matrices and ordered ON bases.

Gram convention: ``G[k, l] = sum_nodes conj(b_k) b_l w``, so a function with
coefficients ``a`` has squared norm ``a^H G a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Sequence

import numpy as np

from .geometry import (
    Annulus,
    AreaQuadrature,
    BoundaryQuadrature,
    Disk,
    Domain,
    ProductDomain,
)

__all__ = [
    "BasisSpec",
    "TensorBasis",
    "GramMatrix",
    "OrderedONBasis",
    "default_basis",
    "gram_area",
    "gram_boundary",
    "gram_face_sum",
    "ordered_on_basis",
    "tensor_basis",
    "jacobi_scaled",
]

RIDGE_EPS = 1e-13


@dataclass(frozen=True)
class BasisSpec:
    """Powers ``((w - center)/scale)^k`` for ``k`` in ``powers``.

    ``kind`` is ``"monomial"`` (``0 <= k <= N``) or ``"laurent"``
    (``-N <= k <= N``, annulus only).
    """

    domain: Domain
    center: complex
    N: int
    kind: str = "monomial"
    scale: float = 1.0

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("degree must be nonnegative")
        if self.kind not in ("monomial", "laurent"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.kind == "laurent":
            if not isinstance(self.domain, Annulus):
                raise ValueError("Laurent bases need an annulus")
            if abs(complex(self.center) - self.domain.center) > 0:
                raise ValueError("Laurent bases are centered at the annulus center")

    @property
    def powers(self) -> np.ndarray:
        lo = -self.N if self.kind == "laurent" else 0
        return np.arange(lo, self.N + 1)

    @property
    def dim(self) -> int:
        return len(self.powers)

    def __call__(self, z) -> np.ndarray:
        """Evaluation matrix, shape ``z.shape + (dim,)``."""
        u = (np.asarray(z, dtype=complex) - self.center) / self.scale
        return u[..., None] ** self.powers

    def taylor(self, z0: complex, order: int) -> np.ndarray:
        """Taylor coefficients at ``z0`` in powers of ``(w - z0)``.

        Returns shape ``(order + 1, dim)``; exact generalized-binomial series.
        """
        d = (complex(z0) - self.center) / self.scale
        k = self.powers.astype(float)
        if d == 0:
            if np.any(self.powers < 0):
                raise ValueError("negative powers are singular at the center")
            m = np.arange(order + 1)[:, None]
            return (m == self.powers[None, :]).astype(complex) / self.scale ** m
        # binom(k, m) d^(k-m) by the ratio recurrence; exact zeros past k >= 0
        T = np.empty((order + 1, len(k)), complex)
        T[0] = d**k
        for m in range(1, order + 1):
            T[m] = T[m - 1] * (k - m + 1) / (m * d * self.scale)
        return T


def default_basis(d: Domain, N: int) -> BasisSpec:
    if isinstance(d, Annulus):
        return BasisSpec(d, d.center, N, "laurent", np.sqrt(d.r_inner * d.r_outer))
    return BasisSpec(d, d.center, N, "monomial", d.radius)


@dataclass(frozen=True)
class TensorBasis:
    factors: tuple[BasisSpec, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.shape))

    def flat_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi), self.shape))

    def multi_index(self, flat: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat, self.shape))

    def eval_at(self, z: Sequence[complex]) -> np.ndarray:
        v = np.ones(1, complex)
        for b, zj in zip(self.factors, z):
            v = np.kron(v, b(np.asarray(zj)))
        return v

    def taylor(self, z0: Sequence[complex], alphas: Sequence[Sequence[int]]) -> np.ndarray:
        """Rows: Taylor coefficient of every product element at multi-index alpha."""
        if not alphas:
            return np.zeros((0, self.dim), complex)
        top = np.max(np.asarray(alphas), axis=0)
        tabs = [b.taylor(zj, int(o)) for b, zj, o in zip(self.factors, z0, top)]
        rows = []
        for alpha in alphas:
            row = np.ones(1, complex)
            for T, aj in zip(tabs, alpha):
                row = np.kron(row, T[aj])
            rows.append(row)
        return np.array(rows)


def tensor_basis(bases: Sequence[BasisSpec]) -> TensorBasis:
    return TensorBasis(tuple(bases))


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    measure: str

    @property
    def asymmetry(self) -> float:
        G = self.entries
        return float(np.max(np.abs(G - G.conj().T)) / max(np.max(np.abs(G)), 1e-300))


def _check_weight(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("weight is not finite on every quadrature node")
    if np.any(w <= 0):
        raise ValueError("weight must be strictly positive on quadrature nodes")
    return w


def _assemble(vals: np.ndarray, w: np.ndarray) -> np.ndarray:
    G = vals.conj().T @ (w[:, None] * vals)
    return 0.5 * (G + G.conj().T)


WeightFn = Callable[[np.ndarray], np.ndarray]


def _weights_on(weight, nodes) -> np.ndarray:
    if weight is None:
        return np.ones(nodes.shape)
    if callable(weight):
        return _check_weight(weight(nodes))
    return _check_weight(np.broadcast_to(weight, nodes.shape))


def gram_area(b: BasisSpec, q: AreaQuadrature, weight: WeightFn | None = None) -> GramMatrix:
    w = _weights_on(weight, q.nodes) * q.weights
    return GramMatrix(_assemble(b(q.nodes), w), "area")


def gram_boundary(
    b: BasisSpec, qs: Sequence[BoundaryQuadrature], weight: WeightFn | None = None
) -> GramMatrix:
    """Boundary Gram with the ``1/(2 pi)`` normalization, summed over circles."""
    nodes = np.concatenate([q.nodes for q in qs])
    arc = np.concatenate([q.weights for q in qs])
    w = _weights_on(weight, nodes) * arc / (2 * np.pi)
    return GramMatrix(_assemble(b(nodes), w), "boundary")


def gram_face_sum(
    boundary_grams: Sequence[np.ndarray], area_grams: Sequence[np.ndarray]
) -> GramMatrix:
    """``sum_j  A_1 x ... x B_j x ... x A_n`` for the mixed-face norm.

    ``boundary_grams[j]`` must already carry the face weight on ``dD_j``.
    """
    if len(boundary_grams) != len(area_grams):
        raise ValueError("one boundary and one area Gram per factor")
    n = len(boundary_grams)
    total = None
    for j in range(n):
        mats = [boundary_grams[l] if l == j else area_grams[l] for l in range(n)]
        K = _kron_all(mats)
        total = K if total is None else total + K
    return GramMatrix(total, "face-sum")


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), complex)
    for M in mats:
        out = np.kron(out, M)
    return out


def jacobi_scaled(G: np.ndarray, eps: float = RIDGE_EPS):
    """Unit-diagonal rescaling plus ridge; returns ``(Gs, s, shift)``.

    ``Gs = S G S + eps I`` with ``S = diag(s)``.
    """
    diag = np.real(np.diag(G))
    if np.any(diag <= 0):
        raise np.linalg.LinAlgError("Gram has a non-positive diagonal entry")
    s = 1 / np.sqrt(diag)
    Gs = s[:, None] * G * s[None, :]
    Gs = Gs + eps * np.eye(len(s))
    return Gs, s, eps


@dataclass(frozen=True)
class OrderedONBasis:
    coeffs: np.ndarray  # column i holds the raw coefficients of element i
    orders: np.ndarray


def ordered_on_basis(G: GramMatrix | np.ndarray, b: BasisSpec, z0: complex) -> OrderedONBasis:
    """Orthonormal basis with strictly increasing vanishing orders at ``z0``.

    Element ``i`` minimizes the norm among functions whose Taylor expansion
    starts with ``(w - z0)^{k_i}`` (coefficient one), then gets normalized.
    Orders stop at ``N``: past that the truncated space pins the element
    almost uniquely and the normalization is dominated by round-off.
    """
    from .kernels import constrained_minimum  # avoid an import cycle

    G = G.entries if isinstance(G, GramMatrix) else np.asarray(G)
    D = b.dim
    T = b.taylor(z0, min(b.N, D - 2))
    cols, orders = [], []
    for m in range(T.shape[0]):
        C = T[: m + 1]
        rhs = np.zeros(m + 1, complex)
        rhs[m] = 1.0
        try:
            a, val = constrained_minimum(G, C, rhs)
        except ValueError:
            continue
        cols.append(a / np.sqrt(val))
        orders.append(m)
        if len(cols) == D:
            break
    return OrderedONBasis(np.array(cols).T, np.array(orders))


def product_alphas(shape: Sequence[int]):
    return list(iproduct(*[range(s) for s in shape]))
