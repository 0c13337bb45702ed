"""Monomial jet ideals at the basepoint and target germs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "BoxIdeal",
    "MultiplierIdeal",
    "MaximalIdeal",
    "JetIdeal",
    "JetTarget",
    "ideal_contains",
    "constrained_indices",
    "multiplier_E",
    "multiplier_E1",
]


@dataclass(frozen=True)
class BoxIdeal:
    """Germs whose Taylor coefficients vanish on ``{alpha <= beta}``."""

    beta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if any(b < 0 for b in self.beta):
            raise ValueError("box corner must be nonnegative")


@dataclass(frozen=True)
class MultiplierIdeal:
    """``I(psi)`` for ``psi = max 2 p_j log|w_j - z_j|``."""

    p: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        if any(x <= 0 for x in self.p):
            raise ValueError("multiplier exponents must be positive")


@dataclass(frozen=True)
class MaximalIdeal:
    n: int = 1


JetIdeal = BoxIdeal | MultiplierIdeal | MaximalIdeal


def ideal_contains(I: JetIdeal, alpha: Sequence[int]) -> bool:
    """Whether the monomial ``(w - z0)^alpha`` lies in ``I``."""
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index must be nonnegative")
    if isinstance(I, MultiplierIdeal):
        if len(alpha) != len(I.p):
            raise ValueError("multi-index length does not match the ideal")
        return sum((a + 1) / p for a, p in zip(alpha, I.p)) > 1
    if isinstance(I, MaximalIdeal):
        return any(a > 0 for a in alpha)
    if len(alpha) != len(I.beta):
        raise ValueError("multi-index length does not match the ideal")
    return any(a > b for a, b in zip(alpha, I.beta))


def _ndim(I: JetIdeal) -> int:
    if isinstance(I, MultiplierIdeal):
        return len(I.p)
    if isinstance(I, MaximalIdeal):
        return I.n
    return len(I.beta)


def constrained_indices(I: JetIdeal) -> list[tuple[int, ...]]:
    """The finite set of multi-indices not in ``I``, in lexicographic order."""
    n = _ndim(I)
    if isinstance(I, MaximalIdeal):
        return [(0,) * n]
    if isinstance(I, BoxIdeal):
        return list(iproduct(*[range(b + 1) for b in I.beta]))
    caps = [int(np.floor(p)) for p in I.p]
    return [a for a in iproduct(*[range(c + 1) for c in caps]) if not ideal_contains(I, a)]


def multiplier_E1(p: Sequence[float]) -> list[tuple[int, ...]]:
    return constrained_indices(MultiplierIdeal(tuple(p)))


def multiplier_E(p: Sequence[float], tol: float = 1e-12) -> list[tuple[int, ...]]:
    """Indices with ``sum (alpha_j + 1)/p_j == 1``."""
    return [a for a in multiplier_E1(p) if abs(sum((x + 1) / q for x, q in zip(a, p)) - 1) <= tol]


@dataclass(frozen=True)
class JetTarget:
    """``h0 = sum d_alpha (w - z0)^alpha``."""

    coeffs: tuple[tuple[tuple[int, ...], complex], ...]

    @classmethod
    def from_dict(cls, d: Mapping[Sequence[int], complex]) -> "JetTarget":
        return cls(tuple((tuple(int(x) for x in k), complex(v)) for k, v in d.items()))

    @classmethod
    def one(cls, n: int) -> "JetTarget":
        return cls((((0,) * n, 1.0 + 0j),))

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff: complex = 1.0) -> "JetTarget":
        return cls(((tuple(int(a) for a in alpha), complex(coeff)),))

    @classmethod
    def product(cls, factors: Sequence[Mapping[int, complex]]) -> "JetTarget":
        """``h0 = prod_j h_j`` from one-variable coefficient maps."""
        out: dict[tuple[int, ...], complex] = {(): 1.0}
        for f in factors:
            nxt: dict[tuple[int, ...], complex] = {}
            for a, ca in out.items():
                for k, ck in f.items():
                    key = a + (int(k),)
                    nxt[key] = nxt.get(key, 0) + ca * complex(ck)
            out = nxt
        return cls.from_dict(out)

    def as_dict(self) -> dict[tuple[int, ...], complex]:
        out: dict[tuple[int, ...], complex] = {}
        for k, v in self.coeffs:
            out[k] = out.get(k, 0) + v
        return out

    def vector(self, alphas: Sequence[tuple[int, ...]]) -> np.ndarray:
        d = self.as_dict()
        return np.array([d.get(tuple(a), 0.0) for a in alphas], dtype=complex)

    def orders(self) -> tuple[int, ...]:
        """Componentwise vanishing orders, valid for product targets."""
        keys = [k for k, v in self.as_dict().items() if v != 0]
        return tuple(int(min(k[j] for k in keys)) for j in range(len(keys[0])))
