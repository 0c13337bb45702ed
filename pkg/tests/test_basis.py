import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saitoh_lab.basis import (
    BasisSpec,
    TensorBasis,
    default_basis,
    gram_area,
    gram_boundary,
    gram_face_sum,
    jacobi_scaled,
    ordered_on_basis,
)
from saitoh_lab.geometry import Annulus, Disk, area_quadrature, boundary_quadrature
from saitoh_lab.kernels import hardy_S_gram, hardy_S_kernel_at
from saitoh_lab.geometry import ProductDomain
from saitoh_lab.weights import WeightSpec

A = Annulus(0, 0.5, 1.0)


def test_basis_guards():
    with pytest.raises(ValueError):
        BasisSpec(Disk(), 0, 4, "laurent")
    with pytest.raises(ValueError):
        BasisSpec(A, 0.1, 4, "laurent")
    with pytest.raises(ValueError):
        BasisSpec(Disk(), 0, -1)
    assert default_basis(A, 3).dim == 7
    assert default_basis(Disk(), 3).dim == 4


@pytest.mark.parametrize("b,z0", [(default_basis(Disk(0.2, 2.0), 6), 0.5 + 0.3j), (default_basis(A, 6), -0.7j)])
def test_taylor_matches_finite_differences(b, z0):
    T = b.taylor(z0, 2)
    h = 1e-4
    f = lambda z: b(np.asarray(z))
    assert np.allclose(T[0], f(z0))
    d1 = (f(z0 + h) - f(z0 - h)) / (2 * h)
    d2 = (f(z0 + h) - 2 * f(z0) + f(z0 - h)) / h**2 / 2
    assert np.allclose(T[1], d1, rtol=1e-6, atol=1e-6)
    assert np.allclose(T[2], d2, rtol=1e-4, atol=1e-4)


def test_taylor_at_center_is_identity():
    b = BasisSpec(Disk(), 0, 4, scale=2.0)
    T = b.taylor(0, 3)
    assert np.allclose(T[:, :4], np.diag(1 / 2.0 ** np.arange(4)))
    with pytest.raises(ValueError):
        default_basis(A, 2).taylor(0, 1)


def test_tensor_taylor_is_kron_of_factors():
    b1, b2 = default_basis(Disk(), 3), default_basis(A, 2)
    tb = TensorBasis((b1, b2))
    z = (0.3, 0.8j)
    rows = tb.taylor(z, [(1, 2), (0, 0)])
    assert np.allclose(rows[0], np.kron(b1.taylor(0.3, 1)[1], b2.taylor(0.8j, 2)[2]))
    assert np.allclose(rows[1], tb.eval_at(z))
    assert tb.flat_index((2, 3)) == 2 * 5 + 3
    assert tb.multi_index(13) == (2, 3)


def test_monomials_are_orthogonal_on_disk_and_annulus():
    for d in (Disk(0, 1), A):
        b = default_basis(d, 5)
        G = gram_area(b, area_quadrature(d, 16, 32)).entries
        off = G - np.diag(np.diag(G))
        assert np.max(np.abs(off)) < 1e-13 * np.max(np.abs(G))
        H = gram_boundary(b, boundary_quadrature(d, 32)).entries
        assert np.max(np.abs(H - np.diag(np.diag(H)))) < 1e-13 * np.max(np.abs(H))
    # exact area norms on the unit disk
    G = gram_area(default_basis(Disk(), 4), area_quadrature(Disk(), 16, 32)).entries
    assert np.allclose(np.diag(G).real, np.pi / (np.arange(5) + 1))


def test_gram_rejects_nonpositive_weight():
    b = default_basis(Disk(), 2)
    with pytest.raises(ValueError):
        gram_area(b, area_quadrature(Disk(), 8, 16), lambda z: np.real(z))


def test_face_sum_shape_and_guard():
    I2 = np.eye(2)
    G = gram_face_sum([I2, 2 * I2], [3 * I2, 4 * I2])
    assert np.allclose(G.entries, np.kron(I2, 4 * I2) + np.kron(3 * I2, 2 * I2))
    with pytest.raises(ValueError):
        gram_face_sum([I2], [I2, I2])


def test_jacobi_scaling_unit_diagonal():
    G = np.diag([4.0, 9.0]) + 0j
    Gs, s, eps = jacobi_scaled(G)
    assert np.allclose(np.diag(Gs), 1 + eps)
    assert np.allclose(s, [0.5, 1 / 3])
    with pytest.raises(np.linalg.LinAlgError):
        jacobi_scaled(np.diag([1.0, 0.0]))


@pytest.mark.parametrize("d,z0,tol", [(Disk(0, 1), 0.3, 1e-12), (A, 0.7, 1e-8)])
def test_ordered_on_basis(d, z0, tol):
    pd = ProductDomain((d,), (z0,))
    G, tb = hardy_S_gram(pd, WeightSpec.flat(1), 12)
    on = ordered_on_basis(G, tb.factors[0], z0)
    assert np.all(np.diff(on.orders) > 0) and on.orders[0] == 0
    M = on.coeffs.conj().T @ G.entries @ on.coeffs
    assert np.max(np.abs(M - np.eye(len(on.orders)))) < tol
    # element i vanishes to order orders[i] exactly
    T = tb.factors[0].taylor(z0, int(on.orders[-1]))
    for i, k in enumerate(on.orders):
        vals = T[: k + 1] @ on.coeffs[:, i]
        assert np.all(np.abs(vals[:k]) < 1e-8 * abs(vals[k]))
    # the kernel is the sum of |e_i(z0)|^2; only e_0 is nonzero there
    v = tb.eval_at((z0,))
    K = hardy_S_kernel_at(pd, WeightSpec.flat(1), 12).value
    assert np.isclose(np.sum(np.abs(v @ on.coeffs) ** 2), K, rtol=tol)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), st.floats(0.05, 0.9), st.floats(0, 6.2))
def test_taylor_order_zero_is_evaluation(N, r, arg):
    b = default_basis(Disk(0, 1), N)
    z = r * np.exp(1j * arg)
    assert np.allclose(b.taylor(z, 0)[0], b(z))
