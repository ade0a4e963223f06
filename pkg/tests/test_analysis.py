import math
import warnings

import numpy as np
import pytest

from spinchan import analysis, channels, dynamics, observables
from spinchan.spectral import diagonalize, eigenvector_population


def test_golden_section_max():
    x, fx = analysis.golden_section_max(lambda t: -((t - 0.3) ** 2), 0.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-8) and fx == pytest.approx(0.0, abs=1e-15)


def test_modulated_optimum_without_decoherence():
    t_op, value = analysis.optimal_transfer_time(channels.modulated_chain(8, 1.0), 0.0)
    assert t_op == pytest.approx(math.pi / 2, abs=1e-7)
    assert value == pytest.approx(1.0, abs=1e-12)


def test_optimum_moves_earlier_with_decoherence():
    spec = channels.modulated_chain(10, 1.0)
    t_values = [analysis.optimal_transfer_time(spec, g)[0] for g in (0.05, 0.2, 0.4)]
    assert t_values[0] < math.pi / 2 and np.all(np.diff(t_values) < 0)


def test_boundary_warning_for_short_window():
    with pytest.warns(analysis.BoundaryWarning):
        analysis.optimal_transfer_time(channels.modulated_chain(6), 0.0, window=(0.0, 0.5))


def test_coarse_grid_minimum():
    with pytest.raises(ValueError):
        analysis.optimal_transfer_time(channels.modulated_chain(4), 0.0, n_grid=100)


def test_unknown_observable():
    with pytest.raises(ValueError):
        analysis.optimal_transfer_time(channels.modulated_chain(4), 0.0, observable="G")


def test_custom_family_needs_window():
    spec = channels.ChannelSpec(3, ((1, 2, 1.0), (2, 3, 1.0)))
    with pytest.raises(ValueError):
        analysis.default_window(spec)


def test_average_fidelity_series_matches_observables():
    spec = channels.modified_chain_a(6, 1.0, 0.3)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    times = np.array([0.5, 3.0, 8.0])
    series = analysis.observable_series(spectrum, "Fbar", 0.1, times, 1, 6)
    for t, value in zip(times, series):
        state = dynamics.evolve_h01(spectrum, dynamics.PureInputState(1), 0.1, t)
        assert value == pytest.approx(observables.average_fidelity(state, 6).fidelity, abs=1e-13)


def test_sweep_result_invariants():
    with pytest.raises(ValueError):
        analysis.SweepResult("J0", [0.2, 0.1], [1.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        analysis.SweepResult("J0", [0.1, 0.2], [1.0], [1.0])
    with pytest.raises(ValueError):
        analysis.SweepResult("J0", [0.1, 0.2], [1.0, float("nan")], [1.0, 1.0])


def test_sweep_j0_rejects_zero():
    with pytest.raises(ValueError):
        analysis.sweep_j0("modified-a", 11, 0.15, [0.0, 0.01])
    with pytest.raises(ValueError):
        analysis.sweep_j0("uniform", 11, 0.15, [0.01])


def test_sweep_j0_workers_agree():
    grid = [0.005, 0.02, 0.08]
    serial = analysis.sweep_j0("modified-a", 11, 0.15, grid)
    pooled = analysis.sweep_j0("modified-a", 11, 0.15, grid, workers=3)
    assert np.array_equal(serial.values, pooled.values)
    assert serial.values[0] > 0.99
    assert serial.metadata["family"] == "modified-a"


def test_sweep_gamma_matches_single_calls():
    spec = channels.modulated_chain(6)
    res = analysis.sweep_gamma(spec, [0.1, 0.3])
    for g, t in zip(res.grid, res.t_at_max):
        assert t == pytest.approx(analysis.optimal_transfer_time(spec, g)[0], abs=1e-12)


def test_extract_design():
    report = analysis.extract_design(channels.modified_chain_b(11, 1.0, 0.02), gamma=0.0)
    assert report.E0 == pytest.approx(0.012648, abs=1e-5)
    assert report.t_c == math.pi / report.E0
    assert report.parity == "odd"
    assert abs(report.t_measured - report.t_c) / report.t_c < 0.05
    even = analysis.extract_design(channels.modified_chain_a(10, 1.0, 0.02))
    assert even.t_c == math.pi / (2 * even.E0)
    with pytest.raises(ValueError):
        analysis.extract_design(channels.modified_chain_a(10, 1.0, 0.02), parity="odd")
    with pytest.raises(ValueError):
        analysis.extract_design(channels.uniform_chain(5))


def test_approx_fidelity_limit_values():
    assert analysis.approx_fidelity_limit(0.01, 0.2, 0.0, "odd") == pytest.approx(0.0, abs=1e-15)
    assert analysis.approx_fidelity_limit(0.01, 0.0, math.pi / 0.01, "odd") == pytest.approx(1.0)
    assert analysis.approx_fidelity_limit(0.01, 0.0, math.pi / 0.02, "even") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        analysis.approx_fidelity_limit(0.01, 0.0, 1.0, "both")


def test_approx_avg_fidelity_limit_values():
    e0 = 0.01
    assert analysis.approx_avg_fidelity_limit(e0, 0.0, math.pi / e0, "odd", 9) == pytest.approx(1.0)
    assert analysis.approx_avg_fidelity_limit(e0, 0.0, math.pi / e0, "odd", 11) == pytest.approx(1 / 3)
    assert analysis.approx_avg_fidelity_limit(e0, 0.0, math.pi / (2 * e0), "even", 10) == pytest.approx(2 / 3)
    assert analysis.approx_avg_fidelity_limit(e0, 0.3, 0.0, "odd", 9) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        analysis.approx_avg_fidelity_limit(e0, 0.0, 1.0, "odd", 10)


def test_approx_avg_fidelity_tracks_simulation():
    spec = channels.modified_chain_a(9, 1.0, 0.002)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    e0 = analysis.smallest_positive_eigenvalue(spectrum)
    times = np.linspace(0, 1.5 * math.pi / e0, 400)
    sim = analysis.observable_series(spectrum, "Fbar", 0.15, times, 1, 9)
    approx = analysis.approx_avg_fidelity_limit(e0, 0.15, times, "odd", 9)
    assert np.abs(sim - approx).max() < 5e-3


def test_three_mode_structure():
    spectrum = diagonalize(channels.build_hamiltonian(channels.modified_chain_a(11, 1.0, 0.001)))
    pops = eigenvector_population(spectrum, 1)
    central = pops[4:7]
    assert central.sum() >= 0.999
    np.testing.assert_allclose(central, [0.25, 0.5, 0.25], atol=5e-3)


def test_parity_speed_ratio():
    e11 = analysis.extract_design(channels.modified_chain_a(11, 1.0, 0.001)).E0
    e10 = analysis.extract_design(channels.modified_chain_a(10, 1.0, 0.001)).E0
    assert e11 / e10 > 1000


def test_mixedness_stays_small():
    spec = channels.modified_chain_a(11, 1.0, 0.005)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    t_op, _ = analysis.optimal_transfer_time(spec, 0.15)
    for t in np.linspace(0, t_op, 25):
        state = dynamics.evolve_h1(spectrum, dynamics.site_state(11, 1), 0.15, t)
        assert 1 - observables.purity(state) < 0.02


def test_optimize_field_small_grid():
    spec = channels.modified_chain_a(10, 1.0, 0.01)
    e0 = analysis.extract_design(spec).E0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        b_star, value = analysis.optimize_field(spec, 0.15, b_grid=[-e0, -e0 / 2, 0.0, e0 / 2, e0], refine=False)
    assert b_star == pytest.approx(-e0 / 2) and value > 0.999
