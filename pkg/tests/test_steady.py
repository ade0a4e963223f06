import math
from fractions import Fraction

import numpy as np
import pytest

from spinchan import channels, dynamics, steady
from spinchan.dynamics import PureInputState
from spinchan.spectral import diagonalize

import fullspace as fs


def _spectrum(spec):
    return diagonalize(channels.build_hamiltonian(spec))


def test_uniform_closed_forms():
    assert steady.steady_fidelity_uniform(2) == pytest.approx(0.5)
    assert steady.steady_fidelity_uniform(3) == pytest.approx(0.375)
    assert steady.steady_avg_fidelity_uniform(2) == pytest.approx(7 / 12)
    assert steady.steady_avg_fidelity_uniform(3) == pytest.approx(35 / 48)


def test_modulated_closed_form():
    assert steady.steady_fidelity_modulated(2) == pytest.approx(0.5, abs=1e-15)
    assert steady.steady_fidelity_modulated(3) == pytest.approx(0.375, abs=1e-15)
    assert steady.steady_fidelity_modulated(4) == pytest.approx(0.3125, abs=1e-15)
    # exact rational product as an independent evaluation
    for n in (5, 9, 17):
        exact = Fraction(1, 2 ** (2 * n - 2))
        for k in range(2, n + 1):
            exact *= 4 - Fraction(2, k - 1)
        assert steady.steady_fidelity_modulated(n) == pytest.approx(float(exact), rel=1e-13)
    assert 0 < steady.steady_fidelity_modulated(201) < 1


def test_endpair_and_distribution_closed_forms():
    assert steady.steady_concurrence_endpair(2) == 1.0
    assert steady.steady_concurrence_endpair(3) == pytest.approx(0.5)
    assert steady.steady_concurrence_endpair(4) == pytest.approx(0.375)
    assert steady.steady_concurrence_endpair(4, 0.96) == pytest.approx(0.36)
    assert steady.steady_concurrence_distribution(3) == 0.0
    assert steady.steady_concurrence_distribution(2) == pytest.approx(0.5)
    assert steady.steady_concurrence_distribution(4) == pytest.approx(0.375)
    with pytest.raises(ValueError):
        steady.steady_concurrence_endpair(4, 1.5)


def test_multiarm_closed_form():
    assert steady.steady_concurrence_multiarm(1, 1, 2) == pytest.approx(0.375)
    assert steady.steady_concurrence_multiarm(1, 1, 3) == pytest.approx(0.25)


@pytest.mark.parametrize("l1,l2,n_arms", [(1, 1, 2), (1, 1, 3), (2, 1, 4)])
def test_multiarm_numeric_matches_closed_form(l1, l2, n_arms):
    spec = channels.multiarm(l1, l2, n_arms)
    assert steady.numeric_steady_multiarm(spec) == pytest.approx(steady.steady_concurrence_multiarm(l1, l2, n_arms), abs=1e-10)


def test_closed_forms_decrease_with_n():
    uni = [steady.steady_fidelity_uniform(n) for n in range(2, 40)]
    mod = [steady.steady_fidelity_modulated(n) for n in range(2, 40)]
    assert np.all(np.diff(uni) < 0) and np.all(np.diff(mod) < 0)
    for parity in (0, 1):
        vals = [steady.steady_avg_fidelity_uniform(n) for n in range(2 + parity, 40, 2)]
        assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_steady_against_full_hilbert_space(n):
    spec = channels.uniform_chain(n)
    h = fs.full_hamiltonian(n, spec.edges)
    psi = fs.excitation_state(n, np.eye(n)[0])
    ref = fs.steady(h, np.outer(psi, psi.conj()))
    res = steady.numeric_steady_state(_spectrum(spec), dynamics.site_state(n, 1))
    idx = [1 << (n - k) for k in range(1, n + 1)]
    np.testing.assert_allclose(res.state.b, ref[np.ix_(idx, idx)], atol=1e-12)
    assert steady.numeric_steady_avg_fidelity(spec) == pytest.approx(fs.average_fidelity(h, n, 0.0, np.inf), abs=1e-12)


def test_uniform_three_site_average_fidelity_value():
    # brute-force value: the vacuum coherence keeps a negative sign at N = 3
    assert steady.numeric_steady_avg_fidelity(channels.uniform_chain(3)) == pytest.approx(19 / 48, abs=1e-12)


def test_steady_state_is_long_time_limit():
    spec = channels.modulated_chain(6)
    spectrum = _spectrum(spec)
    e = spectrum.eigenvalues
    gaps = np.abs(e[:, None] - e[None, :])
    gap_min = gaps[gaps > 1e-9].min()
    rho0 = dynamics.bell_state(6, 1, 3, 0.6, 0.8)
    target = steady.numeric_steady_state(spectrum, rho0).state.b
    for gamma in (0.01, 0.1, 1.0):
        t = 50 / (gamma * gap_min**2)
        late = dynamics.evolve_h1(spectrum, rho0, gamma, t).b
        np.testing.assert_allclose(np.diag(late).real, np.diag(target).real, atol=1e-6)


def test_degenerate_pairs_reported():
    spectrum = _spectrum(channels.attach_uncoupled_node(channels.modulated_chain(3)))
    res = steady.numeric_steady_state(spectrum, dynamics.site_state(4, 1))
    assert len(res.degenerate_pairs) == 1
    h01 = steady.numeric_steady_state(_spectrum(channels.modulated_chain(3)), PureInputState(1, math.pi / 2))
    assert (0, 2) in h01.degenerate_pairs


def test_steady_tolerance_validation():
    with pytest.raises(ValueError):
        steady.numeric_steady_state(_spectrum(channels.uniform_chain(3)), dynamics.site_state(3, 1), tol=0)


def test_endpair_scaling_with_initial_concurrence():
    spec = channels.modulated_chain(4)
    a, b = 0.6, 0.8
    assert steady.numeric_steady_endpair(spec, a, b) == pytest.approx(2 * a * b * steady.numeric_steady_endpair(spec), abs=1e-12)


def test_distribution_numeric_follows_shorter_chain():
    # with the isolated qubit attached the zero mode appears for odd N, so the
    # simulated value for N sites equals the closed form at N - 1
    for n in range(3, 10, 2):
        assert steady.numeric_steady_distribution(channels.modulated_chain(n)) == pytest.approx(
            steady.steady_concurrence_distribution(n - 1), abs=1e-10
        )
    for n in range(2, 10, 2):
        assert steady.numeric_steady_distribution(channels.modulated_chain(n)) == pytest.approx(0.0, abs=1e-12)


def test_steady_table_rows():
    rows = steady.steady_table("uniform-F", [2, 3])
    assert [r[0] for r in rows] == [2, 3]
    assert all(r[3] < 1e-12 for r in rows)
    with pytest.raises(KeyError):
        steady.steady_table("nope", [2])
