"""Sampling single reset trajectories.

Random numbers come from numpy's counter-based Philox generator keyed by the
seed. Sample ``i`` owns a fixed block of counters, so a trajectory is a pure
function of ``(seed, i)`` whatever the batch layout.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .ensemble import build_density, probabilities_at
from .models import GateModel
from .schedules import ResetSchedule

CHUNK = 1 << 16


@dataclass(frozen=True)
class Trajectory:
    reset_times: tuple[int, ...]
    final_n: int
    seed: int
    index: int = 0


def _stride(horizon: int) -> int:
    # Philox emits four 64-bit words per counter value
    return max(4, -(-horizon // 4) * 4)


def _uniforms(seed: int, start: int, count: int, horizon: int) -> np.ndarray:
    """Uniforms for samples ``start .. start+count-1``, shape (count, horizon)."""
    stride = _stride(horizon)
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(start * stride // 4)
    return np.random.Generator(bitgen).random((count, stride))[:, :horizon]


def sample_trajectory(s: ResetSchedule, horizon: int, seed: int, index: int = 0) -> Trajectory:
    """One realization: at each step reset with probability r_n, else apply the gate."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    r = s.probs(horizon) if horizon else np.zeros(0)
    u = _uniforms(seed, index, 1, horizon)[0]
    n = 0
    resets = []
    for t in range(horizon):
        if u[t] < r[n]:
            resets.append(t + 1)
            n = 0
        else:
            n += 1
    return Trajectory(tuple(resets), n, seed, index)


def final_counts(s: ResetSchedule, horizon: int, samples: int, seed: int) -> np.ndarray:
    """Vectorized final_n for samples 0..samples-1."""
    r = s.probs(horizon) if horizon else np.zeros(0)
    out = np.empty(samples, dtype=np.int64)
    for start in range(0, samples, CHUNK):
        count = min(CHUNK, samples - start)
        u = _uniforms(seed, start, count, horizon)
        n = np.zeros(count, dtype=np.int64)
        for t in range(horizon):
            n = np.where(u[:, t] < r[n], 0, n + 1)
        out[start : start + count] = n
    return out


def empirical_distribution(s: ResetSchedule, horizon: int, samples: int, seed: int) -> np.ndarray:
    """Normalized histogram of final_n over ``samples`` trajectories; estimates P_n(horizon)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = final_counts(s, horizon, samples, seed)
    return np.bincount(n, minlength=horizon + 1) / samples


def empirical_density(model: GateModel, hist: np.ndarray) -> np.ndarray:
    return build_density(hist, model.branch_states(len(hist) - 1))


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


@dataclass
class HistogramComparison:
    empirical: np.ndarray
    exact: np.ndarray

    @property
    def tv_distance(self) -> float:
        return total_variation(self.empirical, self.exact)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "empirical_p", "exact_p", "abs_error"])
            for n, (e, x) in enumerate(zip(self.empirical, self.exact)):
                w.writerow([n, f"{e:.17g}", f"{x:.17g}", f"{abs(e - x):.17g}"])
            fh.write(f"# tv_distance={self.tv_distance:.17g}\n")


def compare_with_exact(s: ResetSchedule, horizon: int, samples: int, seed: int) -> HistogramComparison:
    return HistogramComparison(
        empirical_distribution(s, horizon, samples, seed), probabilities_at(s, horizon)
    )
