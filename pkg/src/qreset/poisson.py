"""Constant-rate (Poissonian) resetting: steady states and gate resonances.

With ``r_n = r`` the ensemble obeys the Markovian map
``rho -> r |0><0| + (1 - r) U rho U^dagger``.
Density matrices are vectorized row-major, ``|rho>> = sum_ij rho_ij |i>|j>``,
so that ``U rho U^dagger`` becomes ``(U kron U^*) |rho>>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import SpectralDecomposition, hermitian_eig, kron
from .models import GateModel
from .observables import InvalidRate

DEFAULT_RES_TOL = 1e-9
DEFAULT_TAIL_TOL = 1e-14


class SingularSystem(RuntimeError):
    pass


def _check_rate(r: float) -> None:
    if not 0.0 < r <= 1.0:
        raise InvalidRate(f"reset probability r={r} outside (0, 1]")


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=np.complex128).reshape(-1)


def devectorize(vec: np.ndarray) -> np.ndarray:
    d = math.isqrt(len(vec))
    return np.asarray(vec).reshape(d, d)


def unitary_superoperator(model: GateModel) -> np.ndarray:
    u = model.unitary
    return kron(u, u.conj())


def kraus_superoperator(model: GateModel, r: float) -> np.ndarray:
    """(1-r) U x U^* + r |rho_0>><<1|: the one-step map in the doubled space."""
    d = model.dim
    return (1 - r) * unitary_superoperator(model) + r * np.outer(
        vectorize(model.reset_projector), vectorize(np.eye(d))
    )


def poisson_map(model: GateModel, r: float, rho: np.ndarray) -> np.ndarray:
    u = model.unitary
    return r * model.reset_projector + (1 - r) * u @ rho @ u.conj().T


def steady_state_series(model: GateModel, r: float, tail_tol: float = DEFAULT_TAIL_TOL,
                        chunk: int = 4096) -> np.ndarray:
    """Truncated sum r * sum_{n<=N} (1-r)^n |n><n| with (1-r)^(N+1) < tail_tol."""
    _check_rate(r)
    if r == 1.0:
        n_max = 0
    else:
        n_max = max(0, math.ceil(math.log(tail_tol) / math.log1p(-r)) - 1)
        while (1 - r) ** (n_max + 1) >= tail_tol:
            n_max += 1
    rho = np.zeros((model.dim, model.dim), dtype=np.complex128)
    spec = model.spectrum
    for start in range(0, n_max + 1, chunk):
        n = np.arange(start, min(start + chunk, n_max + 1))
        phases = np.exp(1j * model.theta * np.outer(n, spec.eigenvalues))
        states = (phases * model.overlaps) @ spec.eigenvectors.T
        w = r * np.exp(n * math.log1p(-r)) if r < 1 else np.ones(1)
        rho += (states.T * w) @ states.conj()
    return rho


def steady_state_solve(model: GateModel, r: float) -> np.ndarray:
    """Solve (1 - (1-r) U x U^*) |rho>> = r |rho_0>> by LU with partial pivoting."""
    _check_rate(r)
    d = model.dim
    a = np.eye(d * d, dtype=np.complex128) - (1 - r) * unitary_superoperator(model)
    b = r * vectorize(model.reset_projector)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"steady-state system singular at r={r}") from exc
    rho = devectorize(x)
    return (rho + rho.conj().T) / 2


def resonance_order(spec: SpectralDecomposition, theta: float, i: int, j: int,
                    res_tol: float = DEFAULT_RES_TOL) -> int | None:
    """Integer k with theta (l_i - l_j) / 2 pi = k within res_tol, else None."""
    x = theta * (spec.eigenvalues[i] - spec.eigenvalues[j]) / (2 * math.pi)
    k = round(x)
    return int(k) if abs(x - k) < res_tol else None


def coherent_pairs(spec: SpectralDecomposition, theta: float,
                   res_tol: float = DEFAULT_RES_TOL) -> np.ndarray:
    """Boolean mask of eigen-index pairs whose coherence survives weak resetting.

    True on the diagonal, inside degenerate levels, and for every resonant pair.
    """
    mask = spec.same_level()
    for i in range(spec.dim):
        for j in range(spec.dim):
            if not mask[i, j] and resonance_order(spec, theta, i, j, res_tol) is not None:
                mask[i, j] = True
    return mask


def weak_reset_limit(model: GateModel, res_tol: float = DEFAULT_RES_TOL) -> np.ndarray:
    """r -> 0 limit of the Poissonian steady state.

    In the generator eigenbasis only the populations, degenerate blocks and
    resonant coherences of |0><0| are kept.
    """
    spec = model.spectrum
    c = model.overlaps
    inner = np.outer(c, c.conj()) * coherent_pairs(spec, model.theta, res_tol)
    v = spec.eigenvectors
    return v @ inner @ v.conj().T


@dataclass
class ResonanceReport:
    """Resonant gate parameters found in a theta interval.

    ``pairs`` holds (i, j, k) with lambda_i > lambda_j and k >= 1;
    ``resonances`` lists (theta*, [(i, j, k), ...]) sorted by theta*.
    """

    pairs: list[tuple[int, int, int]] = field(default_factory=list)
    degenerate_pairs: list[tuple[int, int]] = field(default_factory=list)
    resonances: list[tuple[float, list[tuple[int, int, int]]]] = field(default_factory=list)

    @property
    def resonant_thetas(self) -> list[float]:
        return [th for th, _ in self.resonances]

    def to_json(self) -> dict:
        return {
            "degenerate_pairs": [list(p) for p in self.degenerate_pairs],
            "resonances": [
                {"theta": th, "pairs": [list(p) for p in prov]} for th, prov in self.resonances
            ],
        }


def resonance_scan(generator, theta_range: tuple[float, float] = (0.0, math.pi),
                   res_tol: float = DEFAULT_RES_TOL) -> ResonanceReport:
    """All theta* = 2 pi k / (l_i - l_j) with k >= 1 inside [lo, hi).

    Values closer than res_tol are merged and their provenance concatenated.
    """
    spec = generator if isinstance(generator, SpectralDecomposition) else hermitian_eig(generator)
    lo, hi = theta_range
    lam = spec.eigenvalues
    same = spec.same_level()
    report = ResonanceReport()
    found: list[tuple[float, tuple[int, int, int]]] = []
    for i in range(spec.dim):
        for j in range(i):
            if same[i, j]:
                report.degenerate_pairs.append((i, j))
                continue
            gap = lam[i] - lam[j]
            k_max = math.floor(hi * gap / (2 * math.pi)) + 1
            for k in range(1, k_max + 1):
                th = 2 * math.pi * k / gap
                if lo - res_tol <= th < hi - res_tol:
                    found.append((th, (i, j, k)))
    found.sort()
    for th, prov in found:
        report.pairs.append(prov)
        if report.resonances and th - report.resonances[-1][0] < res_tol:
            report.resonances[-1][1].append(prov)
        else:
            report.resonances.append((th, [prov]))
    return report
