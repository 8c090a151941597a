import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qreset.linalg import (
    NotHermitian,
    NotPSD,
    gate_from_generator,
    hermitian_eig,
    is_density,
    is_hermitian,
    is_unitary,
    jacobi_eigh,
    kron,
    matrix_from_json,
    matrix_to_json,
    one_norm,
    psd_sqrt,
)
from qreset.models import HADAMARD, IDENTITY_2, SIGMA_Z, bell_circuit_unitary

from conftest import random_density, random_hermitian


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_noninteracting(h_ni, method):
    spec = hermitian_eig(h_ni, method=method)
    np.testing.assert_allclose(spec.eigenvalues, [-2, 0, 0, 2], atol=1e-12)
    assert is_unitary(spec.eigenvectors, 1e-12)
    assert one_norm(spec.reconstruct() - h_ni) <= 10 * 1e-12 * 4


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_entangling(h_ent, method):
    spec = hermitian_eig(h_ent, method=method)
    np.testing.assert_allclose(spec.eigenvalues, [-2, 0, 2, 8], atol=1e-12)
    for lam, v in zip(spec.eigenvalues, spec.eigenvectors.T):
        np.testing.assert_allclose(h_ent @ v, lam * v, atol=1e-12)


def test_eig_identity():
    spec = hermitian_eig(np.eye(4), method="jacobi")
    np.testing.assert_allclose(spec.eigenvalues, np.ones(4))
    assert is_unitary(spec.eigenvectors)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_jacobi_against_lapack(rng):
    for dim in (2, 3, 5, 8, 16):
        a = random_hermitian(rng, dim)
        w, v = jacobi_eigh(a)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-12)
        assert one_norm(v @ np.diag(w) @ v.conj().T - a) < 1e-10


def test_levels_group_degenerate(h_ni):
    assert hermitian_eig(h_ni).levels() == [[0], [1, 2], [3]]


def test_gate_special_values(h_ni, h_ent):
    assert np.allclose(gate_from_generator(hermitian_eig(h_ni), np.pi), np.eye(4), atol=1e-12)
    u = gate_from_generator(hermitian_eig(h_ent), np.pi / 2)
    np.testing.assert_allclose(u, np.kron(IDENTITY_2, np.array([[0, 1], [1, 0]])), atol=1e-12)
    np.testing.assert_allclose(gate_from_generator(hermitian_eig(h_ent), 0.0), np.eye(4), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 8),
       t1=st.floats(-5, 5), t2=st.floats(-5, 5))
def test_group_law_and_reconstruction(seed, dim, t1, t2):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, dim)
    spec = hermitian_eig(a)
    assert one_norm(spec.reconstruct() - a) < 1e-10
    u1, u2 = gate_from_generator(spec, t1), gate_from_generator(spec, t2)
    assert is_unitary(u1, 1e-10)
    assert np.abs(u1 @ u2 - gate_from_generator(spec, t1 + t2)).max() < 1e-10


def test_psd_sqrt_examples():
    np.testing.assert_allclose(psd_sqrt(np.diag([4, 1, 0, 9])), np.diag([2, 1, 0, 3]), atol=1e-14)
    np.testing.assert_allclose(psd_sqrt(np.eye(4) / 4), np.eye(4) / 2, atol=1e-14)
    rho13 = np.array([[3, 0, 0, -1], [0, 1, 1, 0], [0, 1, 1, 0], [-1, 0, 0, 3]]) / 8
    b = psd_sqrt(rho13)
    assert one_norm(b @ b - rho13) < 1e-12
    assert is_hermitian(b)


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -0.1]))
    # tiny negatives are clamped
    b = psd_sqrt(np.diag([1.0, -1e-13]))
    np.testing.assert_allclose(b, np.diag([1.0, 0.0]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 4))
def test_psd_sqrt_squares_back(seed, rank):
    rho = random_density(np.random.default_rng(seed), 4, rank)
    b = psd_sqrt(rho)
    assert np.abs(b @ b - rho).max() < 1e-10


def test_kron_examples():
    np.testing.assert_allclose(kron(SIGMA_Z, IDENTITY_2), np.diag([1, 1, -1, -1]))
    np.testing.assert_allclose(kron(IDENTITY_2, IDENTITY_2), np.eye(4))
    out = kron(HADAMARD, IDENTITY_2) @ np.array([1, 0, 0, 0])
    np.testing.assert_allclose(out, np.array([1, 0, 1, 0]) / np.sqrt(2), atol=1e-15)


def test_kron_mixed_product(rng):
    a, b, c, d = (random_hermitian(rng, 2) for _ in range(4))
    np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_one_norm(rng):
    assert one_norm(random_density(rng)) == pytest.approx(1.0, abs=1e-12)
    assert one_norm(np.zeros((3, 3))) == 0.0
    assert one_norm(np.diag([1, -2])) == pytest.approx(3.0)
    # non-Hermitian path: singular values
    assert one_norm(np.array([[0, 2], [0, 0]])) == pytest.approx(2.0)


def test_predicates(rng):
    assert is_unitary(bell_circuit_unitary())
    assert is_density(random_density(rng))
    assert not is_density(np.diag([1.5, -0.5]))
    assert not is_density(np.eye(2))


def test_json_roundtrip(h_ent, tmp_path):
    blob = json.dumps(matrix_to_json(h_ent))
    obj = json.loads(blob)
    assert obj["dim"] == 4 and set(obj) == {"dim", "re", "im"}
    np.testing.assert_array_equal(matrix_from_json(obj), h_ent)
