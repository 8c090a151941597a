"""Exact evolution of the reset ensemble for arbitrary schedules.

The state at time ``t`` is the mixture ``sum_n P_n(t) |n><n|`` over the branch
states ``|n> = U^n |0>``; ``n`` counts gates applied since the last reset.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import one_norm
from .models import GateModel
from .observables import OBSERVABLES
from .schedules import ResetSchedule, survival

log = logging.getLogger(__name__)

PRUNE_THRESHOLD = 1e-16


def step_probabilities(probs: np.ndarray, s: ResetSchedule) -> np.ndarray:
    """Apply the (t+2) x (t+1) reset matrix R(t) to ``probs`` = P(t).

    New ``P_0`` collects the reset flux ``sum_n r_n P_n``; every other entry
    shifts up by one with weight ``1 - r_{n-1}``.
    """
    probs = np.asarray(probs, dtype=float)
    r = s.probs(len(probs))
    out = np.empty(len(probs) + 1)
    out[0] = np.dot(r, probs)
    out[1:] = (1.0 - r) * probs
    return out


def probabilities_at(s: ResetSchedule, t: int) -> np.ndarray:
    p = np.ones(1)
    for _ in range(t):
        p = step_probabilities(p, s)
    return p


def build_density(probs: np.ndarray, branches: np.ndarray) -> np.ndarray:
    """sum_n probs[n] |branches[n]><branches[n]|; ``branches`` has one state per row."""
    probs = np.asarray(probs, dtype=float)
    b = np.asarray(branches, dtype=np.complex128)
    if b.ndim == 1:
        b = b[None, :]
    if len(probs) != len(b):
        raise ValueError(f"{len(probs)} probabilities for {len(b)} branches")
    keep = probs != 0.0
    b = b[keep]
    return (b.T * probs[keep]) @ b.conj()


def renewal_density(s: ResetSchedule, model: GateModel, t: int) -> np.ndarray:
    """rho(t) from the last-renewal decomposition.

    The reset-flux sequence ``P_0(tau)`` obeys
    ``P_0(tau) = sum_{n<tau} r_n S(n) P_0(tau-1-n)`` with survival
    ``S(n) = prod_{j<n} (1 - r_j)``; then ``P_n(t) = P_0(t-n) S(n)`` and the
    no-reset branch carries ``S(t)``.
    """
    surv = survival(s, t)
    r = s.probs(t)
    hazard = r * surv[:t]  # probability that the first reset ends a run of exactly n gates
    p0 = np.zeros(t + 1)
    p0[0] = 1.0
    for tau in range(1, t + 1):
        p0[tau] = np.dot(hazard[:tau], p0[tau - 1 :: -1][:tau])
    weights = p0[::-1] * surv  # weights[n] = P_0(t-n) S(n)
    return build_density(weights, model.branch_states(t))


@dataclass
class EnsembleState:
    """Mixture at time ``t``: branch probabilities, branch states and rho."""

    t: int
    probs: np.ndarray
    branches: np.ndarray
    rho: np.ndarray

    @classmethod
    def initial(cls, model: GateModel) -> "EnsembleState":
        psi = model.initial_state[None, :].copy()
        return cls(0, np.ones(1), psi, model.reset_projector.copy())

    def step(self, model: GateModel, s: ResetSchedule, prune: float = PRUNE_THRESHOLD) -> "EnsembleState":
        probs = step_probabilities(self.probs, s)
        small = (probs < prune) & (probs > 0.0)
        if small.any():
            lost = probs[small].sum()
            probs[small] = 0.0
            probs /= probs.sum()
            log.debug("t=%d: pruned %d branches (mass %.3e)", self.t + 1, small.sum(), lost)
        branches = np.vstack([self.branches, model.unitary @ self.branches[-1]])
        return EnsembleState(self.t + 1, probs, branches, build_density(probs, branches))


@dataclass
class EvolutionRecord:
    """Per-step traces; ``delta_norms[k]`` is ||rho(t) - rho(t-1)||_1 at ``t = times[k]``."""

    times: np.ndarray
    observable_traces: dict[str, np.ndarray]
    delta_norms: np.ndarray
    converged: bool
    steps_used: int
    final_rho: np.ndarray | None = field(default=None, repr=False)

    def to_csv(self, path) -> None:
        names = list(self.observable_traces)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "delta_norm", *names])
            for k, t in enumerate(self.times):
                row = [int(t), f"{self.delta_norms[k]:.17g}"]
                row += [f"{self.observable_traces[n][k]:.17g}" for n in names]
                w.writerow(row)


def evolve_until(
    model: GateModel,
    s: ResetSchedule,
    eps: float = 1e-10,
    max_steps: int = 10_000,
    observables: Sequence[str] | dict[str, Callable] = ("magnetization",),
    prune: float = PRUNE_THRESHOLD,
) -> EvolutionRecord:
    """Iterate the ensemble until ||rho(t) - rho(t-1)||_1 < eps or ``max_steps``.

    Non-convergence is an outcome, not an error: the record's ``converged``
    flag says which happened.
    """
    if eps <= 0 or max_steps < 1:
        raise ValueError("need eps > 0 and max_steps >= 1")
    if isinstance(observables, dict):
        obs = dict(observables)
    else:
        obs = {name: OBSERVABLES[name] for name in observables}

    branches = model.branch_states(max_steps)
    probs = np.ones(1)
    rho = model.reset_projector
    times, deltas = [], []
    traces = {name: [] for name in obs}
    converged = False
    for t in range(1, max_steps + 1):
        probs = step_probabilities(probs, s)
        small = (probs < prune) & (probs > 0.0)
        if small.any():
            log.debug("t=%d: pruned %d branches (mass %.3e)", t, small.sum(), probs[small].sum())
            probs[small] = 0.0
            probs /= probs.sum()
        new = build_density(probs, branches[: t + 1])
        delta = one_norm(new - rho)
        rho = new
        times.append(t)
        deltas.append(delta)
        for name, fn in obs.items():
            traces[name].append(fn(rho))
        if delta < eps:
            converged = True
            break
    return EvolutionRecord(
        times=np.array(times),
        observable_traces={k: np.array(v) for k, v in traces.items()},
        delta_norms=np.array(deltas),
        converged=converged,
        steps_used=len(times),
        final_rho=rho,
    )


def delta_rho_spectral(model: GateModel, probs_t: np.ndarray, probs_t1: np.ndarray) -> np.ndarray:
    """rho(t+1) - rho(t) assembled in the generator eigenbasis.

    With ``c_i = <e_i|0>`` and ``q_ij = u_i / u_j = exp(i theta (l_i - l_j))``
    the eigenbasis element (i, j) is
    ``c_i c_j^* [P_{t+1}(t+1) q^{t+1} + sum_n dP_n(t) q^n]``.
    """
    probs_t = np.asarray(probs_t, dtype=float)
    probs_t1 = np.asarray(probs_t1, dtype=float)
    if len(probs_t1) != len(probs_t) + 1:
        raise ValueError("expected probability vectors at consecutive times")
    t = len(probs_t) - 1
    spec = model.spectrum
    lam = spec.eigenvalues
    dp = probs_t1[:-1] - probs_t
    n = np.arange(t + 2)
    weights = np.append(dp, probs_t1[-1])
    gap = model.theta * (lam[:, None] - lam[None, :])
    coeff = np.exp(1j * gap[:, :, None] * n).dot(weights)
    c = model.overlaps
    inner = coeff * np.outer(c, c.conj())
    v = spec.eigenvectors
    return v @ inner @ v.conj().T
