"""Correlation measures on two-qubit density matrices.

Qubit 1 is the left tensor factor. The local quantum uncertainty is taken with
respect to local measurements on qubit 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, hermitian_eig, psd_sqrt
from .models import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z


class BadDimension(ValueError):
    pass


class InvalidRate(ValueError):
    pass


_ZZ = np.kron(SIGMA_Z, SIGMA_Z)
_Z1 = np.kron(SIGMA_Z, IDENTITY_2)
_Z2 = np.kron(IDENTITY_2, SIGMA_Z)
_YY = np.kron(SIGMA_Y, SIGMA_Y)
_LOCAL_PAULIS = [np.kron(p, IDENTITY_2) for p in (SIGMA_X, SIGMA_Y, SIGMA_Z)]


def _two_qubit(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise BadDimension(f"expected a 4x4 two-qubit state, got {rho.shape}")
    return rho


def _expect(rho: np.ndarray, op: np.ndarray) -> float:
    return float(np.real(np.einsum("ij,ji->", rho, op)))


def zz_correlation(rho) -> float:
    """Connected correlator <sz sz> - <sz x 1><1 x sz>."""
    rho = _two_qubit(rho)
    return _expect(rho, _ZZ) - _expect(rho, _Z1) * _expect(rho, _Z2)


def magnetization(rho) -> float:
    rho = _two_qubit(rho)
    return _expect(rho, _Z1) + _expect(rho, _Z2)


def spin_flipped(rho) -> np.ndarray:
    """(sy x sy) rho^* (sy x sy)."""
    rho = _two_qubit(rho)
    return _YY @ rho.conj() @ _YY


def concurrence_values(rho) -> np.ndarray:
    """Descending mu_i: square roots of the eigenvalues of rho * rho_tilde.

    The eigenvalues are real and non-negative for a valid state; the tiny
    imaginary parts and negatives left by roundoff are dropped.
    """
    rho = _two_qubit(rho)
    ev = np.linalg.eigvals(rho @ spin_flipped(rho))
    mu = np.sqrt(np.clip(ev.real, 0.0, None))
    return np.sort(mu)[::-1]


def concurrence(rho) -> float:
    mu = concurrence_values(rho)
    return float(min(1.0, max(0.0, mu[0] - mu[1] - mu[2] - mu[3])))


def lqu(rho) -> float:
    """Local quantum uncertainty 1 - nu_max of W_ij = tr(sqrt(rho) s_i sqrt(rho) s_j)."""
    rho = _two_qubit(rho)
    root = psd_sqrt((rho + rho.conj().T) / 2)
    w = np.empty((3, 3))
    for i, a in enumerate(_LOCAL_PAULIS):
        left = root @ a @ root
        for j, b in enumerate(_LOCAL_PAULIS):
            w[i, j] = np.real(np.einsum("ij,ji->", left, b))
    w = (w + w.T) / 2
    nu_max = hermitian_eig(w).eigenvalues[-1]
    return float(min(1.0, max(0.0, 1.0 - nu_max)))


def analytic_f(r, x):
    """r * sum_j (1-r)^j cos(j x) in closed form."""
    r = np.asarray(r, dtype=float)
    if np.any((r <= 0) | (r > 1)):
        raise InvalidRate("reset probability must lie in (0, 1]")
    q = 1.0 - r
    c = np.cos(x)
    out = r * (1 - q * c) / (1 + q * q - 2 * q * c)
    return out if out.ndim else float(out)


def analytic_zz_correlation(r, theta):
    """Steady-state <sz sz> connected correlator of the noninteracting model.

    Each qubit precesses as <sz> = cos(2 n theta) after n gates, so the
    single-site average is f(r, 2 theta) and <sz sz> = (1 + f(r, 4 theta)) / 2.
    """
    return (1 + analytic_f(r, 4 * np.asarray(theta))) / 2 - analytic_f(r, 2 * np.asarray(theta)) ** 2


@dataclass(frozen=True)
class CorrelationSet:
    zz_corr: float
    concurrence: float
    lqu: float
    magnetization: float

    FIELDS = ("zz_corr", "concurrence", "lqu", "magnetization")

    @classmethod
    def of(cls, rho) -> "CorrelationSet":
        rho = _two_qubit(rho)
        return cls(zz_correlation(rho), concurrence(rho), lqu(rho), magnetization(rho))

    def values(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in self.FIELDS)


OBSERVABLES = {
    "zz_corr": zz_correlation,
    "concurrence": concurrence,
    "lqu": lqu,
    "magnetization": magnetization,
}
