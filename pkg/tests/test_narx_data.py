"""Tests for NARX data ingestion, simulation and regressors."""

import numpy as np
import pytest

from sparsid.errors import DataError
from sparsid.narx_data import (
    NormStats, SignalPair, TankParams, build_regressors, denormalize, load_benchmark_csv, multisine,
    normalize, simulate_tank, subset_ratio, write_signal_csv,
)
from sparsid.narx_data import config


# ── CSV ingestion ──

@pytest.mark.unit
def test_load_zero_signal(tmp_path):
    """Test a headerless all-zero file."""
    path = tmp_path / "zeros.csv"
    path.write_text("0,0\n0,0\n0,0\n")
    signal = load_benchmark_csv(path)
    assert np.array_equal(signal.u, [0, 0, 0])
    assert np.array_equal(signal.y, [0, 0, 0])
    assert signal.dt == 1.0


@pytest.mark.unit
def test_load_benchmark_length(tmp_path):
    """Test a 1024-row file with a header."""
    rows = "\n".join(f"{i * 0.01},{i * 0.02}" for i in range(1024))
    path = tmp_path / "bench.csv"
    path.write_text("u,y\n" + rows + "\n")
    signal = load_benchmark_csv(path)
    assert len(signal.u) == len(signal.y) == 1024
    assert signal.y[10] == pytest.approx(0.2)


@pytest.mark.unit
def test_load_blank_line_names_line(tmp_path):
    """Test a blank line inside the data is reported by line number."""
    path = tmp_path / "gap.csv"
    path.write_text("1,2\n3,4\n\n5,6\n")
    with pytest.raises(DataError, match="line 3"):
        load_benchmark_csv(path)


@pytest.mark.unit
def test_load_trailing_blank_lines_ok(tmp_path):
    """Test trailing blank lines are ignored."""
    path = tmp_path / "trailing.csv"
    path.write_text("1,2\n3,4\n\n\n")
    assert len(load_benchmark_csv(path)) == 2


@pytest.mark.unit
def test_load_non_numeric_cell(tmp_path):
    """Test non-numeric cells report line and column."""
    path = tmp_path / "bad.csv"
    path.write_text("u,y\n1,2\n3,abc\n")
    with pytest.raises(DataError, match=r"'abc' at line 3, y"):
        load_benchmark_csv(path)


@pytest.mark.unit
def test_load_single_column(tmp_path):
    """Test a one-column file is rejected."""
    path = tmp_path / "one.csv"
    path.write_text("1\n2\n")
    with pytest.raises(DataError, match="at least 2 columns"):
        load_benchmark_csv(path)


@pytest.mark.unit
def test_load_missing_file(tmp_path):
    """Test a missing file raises a data error."""
    with pytest.raises(DataError, match="not found"):
        load_benchmark_csv(tmp_path / "nope.csv")


@pytest.mark.unit
def test_simulator_csv_loads_back(tmp_path, tank_signal):
    """Test simulator output (t,u,y,x1,x2) reloads with u/y picked by name and dt from t."""
    path = write_signal_csv(tank_signal, tmp_path / "tank.csv")
    signal = load_benchmark_csv(path)
    assert np.array_equal(signal.u, tank_signal.u)
    assert np.array_equal(signal.y, tank_signal.y)
    assert signal.dt == pytest.approx(4.0)


@pytest.mark.unit
def test_csv_reload_is_bit_exact(tmp_path, rng):
    """Test written values parse back to the identical doubles."""
    signal = SignalPair(u=rng.normal(size=4000) * 1e3, y=rng.uniform(0.0, 10.0, 4000))
    restored = load_benchmark_csv(write_signal_csv(signal, tmp_path / "exact.csv"))
    assert np.array_equal(restored.u, signal.u)
    assert np.array_equal(restored.y, signal.y)


# ── Tank simulator ──

@pytest.mark.unit
def test_tank_zero_dynamics():
    """Test all constants zero keep the states constant."""
    params = TankParams(k1=0, k2=0, k3=0, k4=0, x1_0=1.0, x2_0=2.0)
    signal = simulate_tank(params, np.linspace(0, 5, 20), dt=1.0)
    assert np.all(signal.y == 2.0)
    assert np.all(signal.states[:, 0] == 1.0)


@pytest.mark.unit
def test_tank_hand_euler_step():
    """Test one Euler step against hand arithmetic."""
    params = TankParams(k1=0.5, k2=0, k3=0, k4=1.0, x1_0=1.0)
    signal = simulate_tank(params, np.zeros(2), dt=0.1)
    assert signal.states[1, 0] == pytest.approx(0.95, abs=1e-15)


@pytest.mark.unit
def test_tank_noise_is_seeded():
    """Test noisy simulations repeat for a seed and differ across seeds."""
    params = TankParams(k1=0.06, k2=0.06, k3=0.06, k4=0.03, noise_std_e=0.1, overflow_cap=10.0)
    u = multisine(200, 4.0)
    a = simulate_tank(params, u, 4.0, seed=5)
    b = simulate_tank(params, u, 4.0, seed=5)
    c = simulate_tank(params, u, 4.0, seed=6)
    assert np.array_equal(a.y, b.y)
    assert not np.array_equal(a.y, c.y)


@pytest.mark.unit
def test_tank_states_stay_in_range():
    """Test states never leave [0, cap], even with a large draining constant."""
    params = TankParams(k1=5.0, k2=0.1, k3=5.0, k4=0.5, noise_std_w1=0.5, overflow_cap=3.0, x1_0=2.0)
    signal = simulate_tank(params, np.full(500, 10.0), 1.0, seed=1)
    assert signal.states.min() >= 0.0
    assert signal.states.max() <= 3.0


@pytest.mark.unit
def test_tank_settles_at_fixed_point():
    """Test constant input drives the noiseless tanks to k1 sqrt(x1) = k4 u."""
    params = TankParams(k1=config.TANK_K1, k2=config.TANK_K2, k3=config.TANK_K3, k4=config.TANK_K4)
    u = 5.0
    signal = simulate_tank(params, np.full(5000, u), dt=config.TANK_DT)
    x1, x2 = signal.states[-1]
    assert abs(params.k1 * np.sqrt(x1) - params.k4 * u) < 1e-6
    assert abs(params.k3 * np.sqrt(x2) - params.k2 * np.sqrt(x1)) < 1e-6


@pytest.mark.unit
def test_tank_default_benchmark_length(tank_signal):
    """Test the default run has the benchmark length."""
    assert len(tank_signal) == config.BENCHMARK_LENGTH == 1024


@pytest.mark.unit
def test_tank_rejects_bad_dt():
    """Test a non-positive step size is rejected."""
    with pytest.raises(DataError):
        simulate_tank(TankParams(k1=0, k2=0, k3=0, k4=0), [1.0], dt=0.0)


@pytest.mark.unit
def test_multisine_is_deterministic():
    """Test the excitation is identical across calls and peak-scaled to its amplitude."""
    a, b = multisine(512, 4.0), multisine(512, 4.0)
    assert np.array_equal(a, b)
    assert np.max(np.abs(a - config.EXCITATION_MEAN)) == pytest.approx(config.EXCITATION_AMPLITUDE)


@pytest.mark.unit
def test_signal_pair_rejects_mismatch():
    """Test u and y of different lengths are rejected."""
    with pytest.raises(ValueError):
        SignalPair(u=[1, 2], y=[1])
    with pytest.raises(ValueError):
        SignalPair(u=[1, np.nan], y=[1, 2])


# ── Regressors ──

@pytest.mark.unit
def test_build_regressors_desk_check():
    """Test the z(t) -> y(t+1) alignment on a three-sample series."""
    signal = SignalPair(u=[1, 2, 3], y=[10, 20, 30])
    ds = build_regressors(signal, n_a=0, n_b=1)
    assert ds.rows.tolist() == [[2.0, 10.0]]
    assert ds.targets.tolist() == [30.0]
    assert ds.times.tolist() == [1]


@pytest.mark.unit
def test_build_regressors_no_memory():
    """Test zero lags give rows [u(t)] only."""
    signal = SignalPair(u=[1, 2, 3, 4], y=[5, 6, 7, 8])
    ds = build_regressors(signal, n_a=0, n_b=0)
    assert ds.rows.tolist() == [[1.0], [2.0], [3.0]]
    assert ds.targets.tolist() == [6.0, 7.0, 8.0]


@pytest.mark.unit
def test_build_regressors_row_layout(tank_signal):
    """Test width, row count and the lag order of every column."""
    ds = build_regressors(tank_signal, n_a=5, n_b=5)
    assert ds.width == 11
    assert len(ds) == len(tank_signal) - 5 - 1
    k = 17
    t = int(ds.times[k])
    expected = [tank_signal.u[t - i] for i in range(6)] + [tank_signal.y[t - i] for i in range(1, 6)]
    assert ds.rows[k].tolist() == expected
    assert ds.targets[k] == tank_signal.y[t + 1]


@pytest.mark.unit
@pytest.mark.parametrize("n_a,n_b", [(0, 1), (3, 2), (1, 4), (6, 6)])
def test_build_regressors_every_row(n_a, n_b, rng):
    """Test every row of a short series holds exactly its lag window and target."""
    signal = SignalPair(u=rng.normal(size=40), y=rng.normal(size=40))
    ds = build_regressors(signal, n_a, n_b)
    t0 = max(n_a, n_b)
    assert ds.times.tolist() == list(range(t0, 39))
    for row, target, t in zip(ds.rows, ds.targets, ds.times):
        t = int(t)
        expected = [signal.u[t - i] for i in range(n_a + 1)] + [signal.y[t - i] for i in range(1, n_b + 1)]
        assert row.tolist() == expected
        assert target == signal.y[t + 1]


@pytest.mark.unit
def test_build_regressors_too_short():
    """Test a series shorter than the lag window is rejected."""
    with pytest.raises(DataError, match="too short"):
        build_regressors(SignalPair(u=[1, 2, 3], y=[1, 2, 3]), n_a=2, n_b=2)


@pytest.mark.unit
def test_subset_ratio_identity(tank_signal):
    """Test ratio 1 returns the dataset unchanged."""
    ds = build_regressors(tank_signal, 2, 2)
    assert subset_ratio(ds, 1.0) is ds


@pytest.mark.unit
def test_subset_ratio_prefix_ceiling():
    """Test N=1000, ratio 0.05 keeps the first 50 rows."""
    signal = SignalPair(u=np.arange(1002.0), y=np.arange(1002.0))
    ds = build_regressors(signal, 0, 1)
    assert len(ds) == 1000
    sub = subset_ratio(ds, 0.05)
    assert len(sub) == 50
    assert np.array_equal(sub.times, ds.times[:50])


@pytest.mark.unit
def test_subset_ratio_grid(tank_signal):
    """Test subset sizes over the ratio grid."""
    ds = build_regressors(tank_signal, 5, 5)
    grid = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    sizes = [len(subset_ratio(ds, r)) for r in grid]
    assert len(sizes) == 11
    assert sizes == sorted(sizes)
    assert sizes[-1] == len(ds)


@pytest.mark.unit
def test_subset_ratio_random_is_seeded(tank_signal):
    """Test random subsets repeat for a seed."""
    ds = build_regressors(tank_signal, 1, 1)
    a = subset_ratio(ds, 0.3, "random", seed=4)
    b = subset_ratio(ds, 0.3, "random", seed=4)
    assert np.array_equal(a.times, b.times)
    assert len(np.unique(a.times)) == len(a.times)
    assert np.all(np.diff(a.times) > 0)


@pytest.mark.unit
@pytest.mark.parametrize("ratio", [0.0, -0.1, 1.5])
def test_subset_ratio_out_of_range(ratio, tank_signal):
    """Test ratios outside (0, 1] are rejected."""
    ds = build_regressors(tank_signal, 1, 1)
    with pytest.raises(DataError):
        subset_ratio(ds, ratio)


@pytest.mark.unit
def test_normalize_round_trip(rng):
    """Test normalization then inversion recovers outputs to 1e-12 relative."""
    y = 3.0 + 0.01 * rng.normal(size=400)
    signal = SignalPair(u=rng.normal(size=400) * 5 + 2, y=y)
    ds = build_regressors(signal, 2, 3)
    scaled, stats = normalize(ds)
    assert abs(np.mean(scaled.targets)) < 0.2
    assert np.allclose(denormalize(scaled.targets, stats), ds.targets, rtol=1e-12, atol=0)
    assert np.allclose(stats.unscale_u(scaled.rows[:, :3]), ds.rows[:, :3], rtol=1e-12, atol=0)


@pytest.mark.unit
def test_denormalized_rmse_matches_raw_rmse(rng):
    """Test scoring normalized predictions after denormalization equals scoring in raw units."""
    signal = SignalPair(u=rng.normal(size=300), y=4.0 + 2.0 * rng.normal(size=300))
    ds = build_regressors(signal, 2, 2)
    scaled, stats = normalize(ds)
    yhat_raw = ds.targets + 0.1 * rng.normal(size=len(ds))
    yhat_scaled = stats.scale_y(yhat_raw)
    raw = np.sqrt(np.mean((yhat_raw - ds.targets) ** 2))
    restored = np.sqrt(np.mean((denormalize(yhat_scaled, stats) - ds.targets) ** 2))
    assert restored == pytest.approx(raw, rel=1e-12)
    assert np.sqrt(np.mean((yhat_scaled - scaled.targets) ** 2)) * stats.std_y == pytest.approx(raw, rel=1e-9)


@pytest.mark.unit
def test_normalize_reuses_stats(tank_signal):
    """Test given statistics are reused, not refitted."""
    train = build_regressors(tank_signal.slice(0, 500), 2, 2)
    test = build_regressors(tank_signal.slice(500), 2, 2)
    _, stats = normalize(train)
    scaled, same = normalize(test, stats)
    assert same is stats
    assert scaled.norm == stats


@pytest.mark.unit
def test_normalize_zero_variance():
    """Test a constant output cannot be normalized."""
    signal = SignalPair(u=np.arange(10.0), y=np.ones(10))
    with pytest.raises(DataError, match="zero variance"):
        normalize(build_regressors(signal, 1, 1))


@pytest.mark.unit
def test_norm_stats_require_positive_std():
    """Test statistics with zero spread are rejected."""
    with pytest.raises(ValueError):
        NormStats(mean_u=0, std_u=0, mean_y=0, std_y=1)
