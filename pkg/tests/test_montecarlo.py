import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qreset.ensemble import build_density, probabilities_at
from qreset.linalg import one_norm
from qreset.models import GateModel, entangling_generator, noninteracting_generator
from qreset.montecarlo import (
    HistogramComparison,
    compare_with_exact,
    empirical_density,
    empirical_distribution,
    final_counts,
    sample_trajectory,
    total_variation,
)
from qreset.schedules import Deterministic, Poisson, PowerLaw


def test_forced_and_absent_resets():
    tr = sample_trajectory(Poisson(1.0), 5, seed=1)
    assert tr.reset_times == (1, 2, 3, 4, 5) and tr.final_n == 0
    tr = sample_trajectory(Poisson(0.0), 5, seed=1)
    assert tr.reset_times == () and tr.final_n == 5


def test_deterministic_cycle():
    # two gates, then the forced reset on the third step
    tr = sample_trajectory(Deterministic(2), 6, seed=3)
    assert tr.reset_times == (3, 6)
    assert tr.final_n == 0
    assert sample_trajectory(Deterministic(1), 6, seed=0).reset_times == (2, 4, 6)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**63 - 1), index=st.integers(0, 10**6), horizon=st.integers(0, 40))
def test_trajectory_invariants(seed, index, horizon):
    s = PowerLaw(0.5, 0.5)
    tr = sample_trajectory(s, horizon, seed, index)
    assert tr == sample_trajectory(s, horizon, seed, index)
    times = np.array(tr.reset_times)
    assert np.all(np.diff(times) > 0)
    assert np.all((times >= 1) & (times <= horizon))
    last = times[-1] if len(times) else 0
    assert tr.final_n == horizon - last


def test_vectorized_counts_match_single_trajectories():
    s = PowerLaw(0.4, 0.8)
    counts = final_counts(s, 12, 200, seed=99)
    single = [sample_trajectory(s, 12, 99, i).final_n for i in range(200)]
    np.testing.assert_array_equal(counts, single)


def test_batch_layout_independent():
    s = Poisson(0.3)
    a = final_counts(s, 9, 70_000, seed=5)
    b = final_counts(s, 9, 70_000 - 1, seed=5)
    np.testing.assert_array_equal(a[:-1], b)


def test_single_sample_is_one_hot():
    h = empirical_distribution(Poisson(0.4), 7, 1, seed=2)
    assert h.sum() == 1 and np.count_nonzero(h) == 1


def test_rejects_empty_sample():
    with pytest.raises(ValueError):
        empirical_distribution(Poisson(0.4), 7, 0, seed=2)
    with pytest.raises(ValueError):
        sample_trajectory(Poisson(0.4), -1, seed=2)


def test_poisson_histogram_three_sigma():
    samples = 10**6
    h = empirical_distribution(Poisson(0.5), 3, samples, seed=2024)
    exact = np.array([0.5, 0.25, 0.125, 0.125])
    sigma = np.sqrt(exact * (1 - exact) / samples)
    assert np.all(np.abs(h - exact) < 3 * sigma)


def test_power_law_total_variation():
    samples, horizon = 10**6, 50
    s = PowerLaw(0.2, 2.0)
    h = empirical_distribution(s, horizon, samples, seed=11)
    assert total_variation(h, probabilities_at(s, horizon)) < 5 * np.sqrt(horizon / samples)


def test_distance_scales_with_sample_count():
    s = Poisson(0.5)
    exact = probabilities_at(s, 3)
    small = np.mean([total_variation(empirical_distribution(s, 3, 10**4, k), exact) for k in range(40)])
    large = np.mean([total_variation(empirical_distribution(s, 3, 10**6, k), exact) for k in range(8)])
    assert 5 <= small / large <= 20


def test_empirical_density_close():
    samples = 10**5
    model = GateModel(entangling_generator(), 0.6)
    s = PowerLaw(0.3, 1.0)
    h = empirical_distribution(s, 20, samples, seed=8)
    exact = build_density(probabilities_at(s, 20), model.branch_states(20))
    assert one_norm(empirical_density(model, h) - exact) < 10 * np.sqrt(4 / samples)


def test_histogram_csv(tmp_path):
    cmp = compare_with_exact(Poisson(0.5), 3, 1000, seed=1)
    assert isinstance(cmp, HistogramComparison)
    path = tmp_path / "hist.csv"
    cmp.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,empirical_p,exact_p,abs_error"
    assert len(lines) == 1 + 4 + 1
    assert lines[-1].startswith("# tv_distance=")
    assert float(lines[-1].split("=")[1]) == cmp.tv_distance
    model = GateModel(noninteracting_generator(), 0.3)
    assert empirical_density(model, cmp.empirical).shape == (4, 4)
