"""Dense complex linear algebra for small matrices.

Matrices are plain ``numpy`` complex arrays. The helpers here cover what the
rest of the package needs: Hermitian eigendecomposition (LAPACK or a cyclic
Jacobi sweep), spectral matrix functions, PSD square roots, trace norms and a
JSON round-trip format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "LinalgError",
    "NotHermitian",
    "NotPSD",
    "SpectralDecomposition",
    "as_matrix",
    "is_hermitian",
    "is_unitary",
    "is_density",
    "jacobi_eigh",
    "hermitian_eig",
    "spectral_function",
    "gate_from_generator",
    "psd_sqrt",
    "kron",
    "one_norm",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
]


class LinalgError(ValueError):
    pass


class NotHermitian(LinalgError):
    pass


class NotPSD(LinalgError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise LinalgError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinalgError("matrix has non-finite entries")
    return m


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.abs(a).max()))


def is_hermitian(a, tol: float = 1e-12) -> bool:
    a = as_matrix(a)
    return bool(np.abs(a - a.conj().T).max() <= tol * _scale(a))


def is_unitary(a, tol: float = 1e-12) -> bool:
    a = as_matrix(a)
    return bool(np.abs(a @ a.conj().T - np.eye(a.shape[0])).max() <= tol)


def is_density(a, tol: float = 1e-10) -> bool:
    """Hermitian, positive semidefinite and unit trace, all within ``tol``."""
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        return False
    if abs(np.trace(a) - 1.0) > tol:
        return False
    w = np.linalg.eigvalsh((a + a.conj().T) / 2)
    return bool(w.min() >= -tol)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending real eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def levels(self, tol: float | None = None) -> list[list[int]]:
        """Group eigenvalue indices into degenerate levels.

        Neighbouring eigenvalues closer than ``tol`` (default
        ``1e-9 * max(1, sum |lambda|)``) belong to the same level.
        """
        w = self.eigenvalues
        if tol is None:
            tol = 1e-9 * max(1.0, float(np.abs(w).sum()))
        groups: list[list[int]] = [[0]]
        for k in range(1, len(w)):
            if w[k] - w[groups[-1][-1]] <= tol:
                groups[-1].append(k)
            else:
                groups.append([k])
        return groups

    def same_level(self, tol: float | None = None) -> np.ndarray:
        """Boolean matrix, True where indices i and j share a degenerate level."""
        out = np.zeros((self.dim, self.dim), dtype=bool)
        for g in self.levels(tol):
            out[np.ix_(g, g)] = True
        return out


def jacobi_eigh(a, tol: float = 1e-14, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each (p, q) rotation first removes the phase of ``a[p, q]`` and then applies
    the real symmetric Jacobi rotation. Sweeps stop once the off-diagonal
    Frobenius norm falls below ``tol * ||a||_F``.
    """
    a = as_matrix(a).copy()
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold * 1e-3:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        raise LinalgError("Jacobi sweeps did not converge")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eig(a, tol: float = 1e-12, method: str = "lapack") -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix with eigenvalues in ascending order.

    ``method="lapack"`` calls ``numpy.linalg.eigh``; ``method="jacobi"`` uses the
    in-package cyclic Jacobi solver. Degenerate subspaces come back with an
    arbitrary orthonormal basis.
    """
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        raise NotHermitian(f"matrix is not Hermitian within tol={tol:g}")
    h = (a + a.conj().T) / 2
    if method == "lapack":
        w, v = np.linalg.eigh(h)
    elif method == "jacobi":
        w, v = jacobi_eigh(h)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return SpectralDecomposition(np.asarray(w, dtype=float), np.asarray(v, dtype=np.complex128))


def spectral_function(spec: SpectralDecomposition, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply ``fn`` to the eigenvalues: V diag(fn(lambda)) V^dagger."""
    v = spec.eigenvectors
    return (v * fn(spec.eigenvalues)) @ v.conj().T


def gate_from_generator(spec: SpectralDecomposition, theta: float) -> np.ndarray:
    """U(theta) = exp(i theta H) from the spectral decomposition of H."""
    return spectral_function(spec, lambda w: np.exp(1j * theta * w))


def psd_sqrt(a, clamp_tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-clamp_tol, 0)`` are clamped to zero; anything more
    negative raises ``NotPSD``.
    """
    spec = hermitian_eig(a, tol=max(clamp_tol, 1e-12))
    if spec.eigenvalues.min() < -clamp_tol:
        raise NotPSD(f"smallest eigenvalue {spec.eigenvalues.min():.3e} < -{clamp_tol:g}")
    return spectral_function(spec, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def one_norm(a) -> float:
    """Trace norm (sum of singular values)."""
    a = as_matrix(a)
    if is_hermitian(a, 1e-13):
        return float(np.abs(np.linalg.eigvalsh((a + a.conj().T) / 2)).sum())
    return float(np.linalg.svd(a, compute_uv=False).sum())


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {"dim": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    m = as_matrix(re + 1j * im)
    if "dim" in obj and int(obj["dim"]) != m.shape[0]:
        raise LinalgError(f"declared dim {obj['dim']} does not match entries ({m.shape[0]})")
    return m


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))
