"""
Sweeps and design searches for near-perfect channels.

Maxima over time are found deterministically: a coarse uniform grid
locates the best sample, then a golden-section search refines it inside
the two neighbouring grid cells.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import channels
from .channels import ChannelSpec, Family
from .dynamics import coherence_series, population_series
from .spectral import Spectrum, diagonalize, smallest_positive_eigenvalue

__all__ = [
    "BoundaryWarning",
    "SweepResult",
    "DesignReport",
    "golden_section_max",
    "default_window",
    "observable_series",
    "optimal_transfer_time",
    "sweep_j0",
    "sweep_gamma",
    "extract_design",
    "approx_fidelity_limit",
    "approx_avg_fidelity_limit",
    "closed_form_discrepancy",
    "optimize_field",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BoundaryWarning(UserWarning):
    """The maximum sits on the edge of the search window."""


@dataclass(frozen=True)
class SweepResult:
    parameter_name: str
    grid: np.ndarray
    values: np.ndarray
    t_at_max: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
            raise ValueError("sweep grid must be strictly increasing")
        if values.shape != grid.shape or np.asarray(self.t_at_max).shape != grid.shape:
            raise ValueError("sweep values must match the grid")
        if not np.all(np.isfinite(values)):
            raise ValueError("sweep values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "t_at_max", np.asarray(self.t_at_max, dtype=float))

    def rows(self):
        return list(zip(self.grid, self.values, self.t_at_max))


@dataclass(frozen=True)
class DesignReport:
    """Energy splitting and critical time of a modified chain.

    ``t_c`` is ``pi / E0`` for odd chains and ``pi / (2 E0)`` for even ones;
    the achieved values are simulated at ``t_c`` and ``t_measured`` is the
    numerically located maximum of F near it.
    """

    E0: float
    t_c: float
    parity: str
    achieved_F: float
    achieved_Fbar: float
    t_measured: float
    F_max: float
    gamma: float
    B_star: float | None = None
    Fbar_max: float | None = None

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def golden_section_max(f, a: float, b: float, tol: float = 1e-8):
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _parity(n):
    return "odd" if n % 2 else "even"


def default_window(spec: ChannelSpec) -> tuple[float, float]:
    """Search window covering the first transfer peak."""
    fam = spec.family
    if fam in (Family.MODIFIED_A, Family.MODIFIED_B):
        e0 = smallest_positive_eigenvalue(diagonalize(channels.build_hamiltonian(_zero_field(spec))))
        t_c = math.pi / e0 if spec.n_sites % 2 else math.pi / (2 * e0)
        return 0.0, 1.5 * t_c
    if fam in (Family.MODULATED, Family.MULTIARM):
        return 0.0, math.pi / spec.params["lambda"]
    if fam == Family.UNIFORM:
        return 0.0, 2.0 * math.pi / abs(spec.params["J"])
    raise ValueError(f"no default search window for family {fam.value!r}; pass window=")


def _zero_field(spec):
    return spec if spec.field == 0 else replace(spec, field=0.0)


def observable_series(spectrum: Spectrum, observable: str, gamma: float, times, source: int, target: int):
    """``F`` (excitation fidelity) or ``Fbar`` (average fidelity) on ``times``."""
    if observable == "F":
        return population_series(spectrum, source, target, gamma, times)
    if observable == "Fbar":
        a = population_series(spectrum, source, target, gamma, times)
        b = coherence_series(spectrum, source, target, gamma, times)
        return b.real / 3.0 + a / 6.0 + 0.5
    raise ValueError(f"unknown observable {observable!r}; expected 'F' or 'Fbar'")


def optimal_transfer_time(
    spec: ChannelSpec,
    gamma: float,
    window: tuple[float, float] | None = None,
    observable: str = "F",
    *,
    source: int = 1,
    target: int | None = None,
    n_grid: int = 2000,
    xtol: float = 1e-8,
    spectrum: Spectrum | None = None,
) -> tuple[float, float]:
    """Time of the global maximum of ``observable`` inside ``window``.

    Returns ``(t_op, value)``. A `BoundaryWarning` is issued when the best
    coarse sample is an endpoint of the window.
    """
    if n_grid < 2000:
        raise ValueError("the coarse grid needs at least 2000 points")
    target = spec.n_sites if target is None else target
    t0, t1 = default_window(spec) if window is None else window
    if spectrum is None:
        spectrum = diagonalize(channels.build_hamiltonian(spec))
    grid = np.linspace(t0, t1, n_grid)
    values = observable_series(spectrum, observable, gamma, grid, source, target)
    i = int(np.argmax(values))
    if i in (0, n_grid - 1):
        warnings.warn(
            f"maximum of {observable} at the window edge t={grid[i]:.6g}; widen the window",
            BoundaryWarning,
            stacklevel=2,
        )
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]

    def f(t):
        return float(observable_series(spectrum, observable, gamma, [t], source, target)[0])

    t_best, v_best = golden_section_max(f, lo, hi, xtol)
    if values[i] > v_best:
        return float(grid[i]), float(values[i])
    return float(t_best), float(v_best)


def _build_modified(family, n, j0, scale):
    fam = Family(family)
    if fam == Family.MODIFIED_A:
        return channels.modified_chain_a(n, scale, j0)
    if fam == Family.MODIFIED_B:
        return channels.modified_chain_b(n, scale, j0)
    raise ValueError(f"J0 sweeps need a modified family, got {fam.value!r}")


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep_j0(
    family,
    n_sites: int,
    gamma: float,
    j0_grid,
    observable: str = "F",
    *,
    scale: float = 1.0,
    workers: int = 1,
) -> SweepResult:
    """Maximum of F (or Fbar) against the end coupling ``J0``.

    ``scale`` is lambda for ModifiedA and the bulk J for ModifiedB. Each
    point searches ``[0, 1.5 t_c(J0)]``. ``J0 = 0`` is excluded: the end
    sites decouple and F vanishes identically.
    """
    grid = np.asarray(j0_grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("J0 grid values must be positive (F is identically 0 at J0 = 0)")

    def point(j0):
        spec = _build_modified(family, n_sites, j0, scale)
        return optimal_transfer_time(spec, gamma, observable=observable)

    results = _map(point, grid, workers)
    meta = {
        "family": Family(family).value,
        "n_sites": n_sites,
        "gamma": gamma,
        "scale": scale,
        "observable": observable,
    }
    return SweepResult(
        "J0",
        grid,
        [v for _, v in results],
        [t for t, _ in results],
        meta,
    )


def sweep_gamma(
    spec: ChannelSpec,
    gamma_grid,
    observable: str = "F",
    window=None,
    *,
    workers: int = 1,
) -> SweepResult:
    """Optimal time and maximum against the decoherence rate."""
    grid = np.asarray(gamma_grid, dtype=float)
    if np.any(grid < 0):
        raise ValueError("gamma must be non-negative")
    spectrum = diagonalize(channels.build_hamiltonian(spec))

    def point(g):
        return optimal_transfer_time(spec, g, window, observable, spectrum=spectrum)

    results = _map(point, grid, workers)
    meta = {"family": spec.family.value, "n_sites": spec.n_sites, "observable": observable, "spec": spec.to_json()}
    return SweepResult("gamma", grid, [v for _, v in results], [t for t, _ in results], meta)


def extract_design(spec: ChannelSpec, parity: str | None = None, gamma: float = 0.0) -> DesignReport:
    """Splitting ``E0``, predicted ``t_c`` and the fidelities achieved there."""
    if spec.family not in (Family.MODIFIED_A, Family.MODIFIED_B):
        raise ValueError("extract_design expects a modified chain")
    parity = parity or _parity(spec.n_sites)
    if parity != _parity(spec.n_sites):
        raise ValueError(f"parity {parity!r} does not match N = {spec.n_sites}")
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    e0 = smallest_positive_eigenvalue(diagonalize(channels.build_hamiltonian(_zero_field(spec))))
    t_c = math.pi / e0 if parity == "odd" else math.pi / (2.0 * e0)
    n = spec.n_sites
    f_c = float(population_series(spectrum, 1, n, gamma, [t_c])[0])
    fbar_c = float(observable_series(spectrum, "Fbar", gamma, [t_c], 1, n)[0])
    t_meas, f_max = optimal_transfer_time(spec, gamma, (0.0, 1.5 * t_c), "F", spectrum=spectrum)
    return DesignReport(e0, t_c, parity, f_c, fbar_c, t_meas, f_max, gamma)


def _check_parity(parity):
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")


def approx_fidelity_limit(E0, gamma, t, parity):
    """Small-J0 excitation fidelity of a modified chain.

    odd:  ``3/8 + exp(-2 g E0^2 t) cos(2 E0 t)/8 - exp(-g E0^2 t/2) cos(E0 t)/2``
    even: ``1/2 - exp(-2 g E0^2 t) cos(2 E0 t)/2``
    """
    _check_parity(parity)
    t = np.asarray(t, dtype=float)
    slow = np.exp(-2.0 * gamma * E0**2 * t) * np.cos(2.0 * E0 * t)
    if parity == "odd":
        fast = np.exp(-0.5 * gamma * E0**2 * t) * np.cos(E0 * t)
        out = 3.0 / 8.0 + slow / 8.0 - fast / 2.0
    else:
        out = 0.5 - 0.5 * slow
    return float(out) if out.ndim == 0 else out


def approx_avg_fidelity_limit(E0, gamma, t, parity, n_sites):
    """Small-J0 average fidelity ``|b_N| cos(alpha)/3 + a_NN/6 + 1/2``.

    odd N:  ``b_N = (-1)^((N-1)/2) [1 - exp(-g E0^2 t/2) cos(E0 t)] / 2`` (real)
    even N: ``b_N = i (-1)^(N/2) exp(-g E0^2 t/2) sin(E0 t)`` (alpha = +-pi/2)
    """
    _check_parity(parity)
    if parity != _parity(n_sites):
        raise ValueError(f"parity {parity!r} does not match N = {n_sites}")
    t = np.asarray(t, dtype=float)
    a_nn = np.asarray(approx_fidelity_limit(E0, gamma, t, parity))
    decay = np.exp(-0.5 * gamma * E0**2 * t)
    if parity == "odd":
        b_real = (-1) ** ((n_sites - 1) // 2) * 0.5 * (1.0 - decay * np.cos(E0 * t))
    else:
        b_real = np.zeros_like(t)  # purely imaginary coherence
    out = b_real / 3.0 + a_nn / 6.0 + 0.5
    return float(out) if out.ndim == 0 else out


def closed_form_discrepancy(spec: ChannelSpec, gamma: float, n_points: int = 4000) -> float:
    """``max_t |approx_fidelity_limit - simulated F|`` over the default window."""
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    e0 = smallest_positive_eigenvalue(spectrum)
    t0, t1 = default_window(spec)
    times = np.linspace(t0, t1, n_points)
    sim = population_series(spectrum, 1, spec.n_sites, gamma, times)
    approx = approx_fidelity_limit(e0, gamma, times, _parity(spec.n_sites))
    return float(np.abs(sim - approx).max())


def optimize_field(
    spec: ChannelSpec,
    gamma: float,
    b_grid=None,
    *,
    n_grid: int = 2000,
    refine: bool = True,
    workers: int = 1,
) -> tuple[float, float]:
    """Field ``B`` maximising the average fidelity of an even modified chain.

    The default grid has 61 points on ``[-5 E0, 5 E0]``; after the scan one
    finer 61-point grid spanning the neighbouring cells of the best point
    is evaluated. Each point searches ``Fbar`` over ``[0, 1.5 pi / (2 E0)]``.
    Returns ``(B_star, Fbar_max)``.
    """
    base = _zero_field(spec)
    e0 = smallest_positive_eigenvalue(diagonalize(channels.build_hamiltonian(base)))
    t_c = math.pi / (2.0 * e0) if spec.n_sites % 2 == 0 else math.pi / e0
    window = (0.0, 1.5 * t_c)
    grid = np.linspace(-5.0 * e0, 5.0 * e0, 61) if b_grid is None else np.sort(np.asarray(b_grid, dtype=float))

    def point(B):
        fielded = channels.apply_field(base, B)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundaryWarning)
            return optimal_transfer_time(fielded, gamma, window, "Fbar", n_grid=n_grid)[1]

    values = np.array(_map(point, grid, workers))
    i = int(np.argmax(values))
    best_b, best_v = float(grid[i]), float(values[i])
    if refine and grid.size > 1:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, grid.size - 1)]
        fine = np.linspace(lo, hi, 61)
        fine_values = np.array(_map(point, fine, workers))
        j = int(np.argmax(fine_values))
        if fine_values[j] > best_v:
            best_b, best_v = float(fine[j]), float(fine_values[j])
    return best_b, best_v
