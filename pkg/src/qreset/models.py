"""Generators, gates and reset states for the two-qubit case studies.

Basis order for two qubits is (uu, ud, du, dd), with up as the first
computational basis state of each qubit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import (
    LinalgError,
    SpectralDecomposition,
    as_matrix,
    gate_from_generator,
    hermitian_eig,
    is_hermitian,
    load_matrix,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
# control on qubit 1 (the left tensor factor), flips qubit 2 when qubit 1 is down
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


@dataclass(frozen=True, eq=False)
class GateModel:
    """A Hermitian generator, a gate parameter and the reset state.

    The gate is ``U(theta) = exp(i theta H)``; the branch states are
    ``U^n |0>``.
    """

    generator: np.ndarray
    theta: float
    initial_state: np.ndarray = field(default=None)

    def __post_init__(self):
        h = as_matrix(self.generator)
        if not is_hermitian(h, 1e-12):
            raise LinalgError("generator is not Hermitian")
        psi = self.initial_state
        if psi is None:
            psi = np.zeros(h.shape[0], dtype=np.complex128)
            psi[0] = 1.0
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        if psi.shape[0] != h.shape[0]:
            raise LinalgError("initial state and generator dimensions differ")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise LinalgError("initial state must have unit norm")
        object.__setattr__(self, "generator", h)
        object.__setattr__(self, "initial_state", psi)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @cached_property
    def spectrum(self) -> SpectralDecomposition:
        return hermitian_eig(self.generator)

    @cached_property
    def unitary(self) -> np.ndarray:
        return gate_from_generator(self.spectrum, self.theta)

    @cached_property
    def reset_projector(self) -> np.ndarray:
        return np.outer(self.initial_state, self.initial_state.conj())

    @cached_property
    def overlaps(self) -> np.ndarray:
        """Components <e_i|0> of the reset state in the generator eigenbasis."""
        return self.spectrum.eigenvectors.conj().T @ self.initial_state

    def with_theta(self, theta: float) -> "GateModel":
        m = GateModel(self.generator, theta, self.initial_state)
        # eigendecomposition does not depend on theta
        m.__dict__["spectrum"] = self.spectrum
        return m

    def branch_states(self, n_max: int) -> np.ndarray:
        """Rows are |n_theta> = U^n |0> for n = 0..n_max (computed spectrally)."""
        n = np.arange(n_max + 1)
        phases = np.exp(1j * self.theta * np.outer(n, self.spectrum.eigenvalues))
        return (phases * self.overlaps) @ self.spectrum.eigenvectors.T


def noninteracting_generator() -> np.ndarray:
    """sigma_x on each qubit: a coherent drive without coupling."""
    return (np.kron(SIGMA_X, IDENTITY_2) + np.kron(IDENTITY_2, SIGMA_X)).astype(np.complex128)


def entangling_generator() -> np.ndarray:
    """Generator H of the Hadamard+CNOT circuit, CNOT (H x 1) = exp(i pi H / 8).

    Eigenvalues are -2, 0, 2, 8.
    """
    s = np.sqrt(2.0)
    a, b = 2 - s, 2 + s
    return np.array(
        [
            [a, a, -1j - s, 1j - s],
            [a, a, 1j - s, -1j - s],
            [1j - s, -1j - s, b, b],
            [-1j - s, 1j - s, b, b],
        ],
        dtype=np.complex128,
    )


def bell_circuit_unitary() -> np.ndarray:
    return CNOT @ np.kron(HADAMARD, IDENTITY_2)


def up_up_state() -> np.ndarray:
    return np.array([1, 0, 0, 0], dtype=np.complex128)


GENERATORS = {
    "noninteracting": noninteracting_generator,
    "entangling": entangling_generator,
}


def generator_by_name(name: str) -> np.ndarray:
    """Look up a named generator, or load one from a JSON matrix file."""
    if name in GENERATORS:
        return GENERATORS[name]()
    return load_matrix(name)


def make_model(name: str, theta: float) -> GateModel:
    h = generator_by_name(name)
    return GateModel(h, theta)
