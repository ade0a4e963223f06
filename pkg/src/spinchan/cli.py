"""
Command-line front end.

Each subcommand writes plot-ready CSV/JSON into the output directory
(``--out``, else ``$SPINCHAN_OUT_DIR``, else ``./spinchan-out``) together
with ``<command>-manifest.json`` listing checksums of everything written.

Exit codes: 0 success, 2 usage error, 3 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, analysis, channels, dynamics, observables, steady
from .errors import ContractViolation, InvalidSizeError, NotFoundError, SpinChanError
from .io import atomic_write, csv_text, write_manifest
from .spectral import diagonalize

VERIFY_TOL = 1e-8
FAMILIES = [f.value for f in channels.Family if f is not channels.Family.CUSTOM]

# defaults applied after the config file and the flags
DEFAULTS = {
    "family": None,
    "n": None,
    "j": 1.0,
    "lambda": 1.0,
    "j0": 0.02,
    "gamma": 0.0,
    "field": 0.0,
    "t0": 0.0,
    "t1": None,
    "points": 201,
    "out": None,
    "l1": None,
    "l2": None,
    "arms": None,
    "spec_file": None,
}


class UsageError(Exception):
    pass


def _shared_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("channel and run options")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--n", type=int, help="number of sites N")
    g.add_argument("--j", type=float, help="bulk coupling J (uniform, modified-b)")
    g.add_argument("--lambda", dest="lambda", type=float, help="modulation scale (modulated, modified-a, multiarm)")
    g.add_argument("--j0", type=float, help="end coupling of modified chains")
    g.add_argument("--gamma", type=float, help="intrinsic decoherence rate")
    g.add_argument("--field", type=float, help="uniform field B")
    g.add_argument("--t0", type=float)
    g.add_argument("--t1", type=float)
    g.add_argument("--points", type=int, help="number of grid points")
    g.add_argument("--out", help="output directory")
    g.add_argument("--config", help="JSON file with option values (flags take precedence)")
    g.add_argument("--l1", type=int, help="multiarm input arm length")
    g.add_argument("--l2", type=int, help="multiarm output arm length")
    g.add_argument("--arms", type=int, help="multiarm number of output arms")
    g.add_argument("--spec-file", dest="spec_file", help="ChannelSpec JSON (overrides --family)")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_parser()
    parser = argparse.ArgumentParser(prog="spinchan", description="Spin-channel state transfer under intrinsic decoherence.")
    parser.add_argument("--version", action="version", version=f"spinchan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[shared], help="eigenvalues, eigenvectors and site populations")
    p.add_argument("--sites", default="1", help="comma-separated sites for population columns")

    p = sub.add_parser("evolve", parents=[shared], help="time series of observables")
    p.add_argument("--observables", default="F", help="comma list of F, Fbar, C_i_j, c_i")
    p.add_argument("--source", type=int, default=1)
    p.add_argument("--target", type=int)

    p = sub.add_parser("steady", parents=[shared], help="closed-form against numeric steady values")
    p.add_argument("--quantity", choices=sorted(steady.STEADY_QUANTITIES))
    p.add_argument("--n-min", dest="n_min", type=int, default=2)

    p = sub.add_parser("sweep", parents=[shared], help="F_max (or Fbar_max) against J0 or gamma")
    p.add_argument("--param", choices=["j0", "gamma"], required=True)
    p.add_argument("--grid", help="start:stop:count or comma-separated values")
    p.add_argument("--observable", choices=["F", "Fbar"], default="F")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("design", parents=[shared], help="E0, t_c and achieved fidelities of a modified chain")
    p.add_argument("--optimize-field", dest="optimize_field", action="store_true")

    p = sub.add_parser("verify", parents=[shared], help="cross-check the three propagators")
    p.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    return parser


def _resolve(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(loaded) - set(vars(args)) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if value is not None and key != "config":
            cfg[key] = value
        elif key not in cfg:
            cfg[key] = value
    return cfg


def _require(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def build_spec(cfg) -> channels.ChannelSpec:
    """ChannelSpec described by a resolved configuration."""
    if cfg.get("spec_file"):
        spec = channels.ChannelSpec.from_json(Path(cfg["spec_file"]).read_text())
        return channels.apply_field(spec, cfg.get("field") or 0.0)
    _require(cfg, "family")
    fam = cfg["family"]
    if fam == "multiarm":
        _require(cfg, "l1", "l2", "arms")
        spec = channels.multiarm(cfg["l1"], cfg["l2"], cfg["arms"], cfg["lambda"])
    else:
        _require(cfg, "n")
        n = cfg["n"]
        if fam == "uniform":
            spec = channels.uniform_chain(n, cfg["j"])
        elif fam == "modulated":
            spec = channels.modulated_chain(n, cfg["lambda"])
        elif fam == "modified-a":
            spec = channels.modified_chain_a(n, cfg["lambda"], cfg["j0"])
        elif fam == "modified-b":
            spec = channels.modified_chain_b(n, cfg["j"], cfg["j0"])
        else:
            raise UsageError(f"unknown family {fam!r}")
    return channels.apply_field(spec, cfg["field"])


def _grid(text, default):
    if text is None:
        return np.asarray(default, dtype=float)
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return np.linspace(float(start), float(stop), int(count))
        return np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: expected start:stop:count or a comma list") from exc


def _times(cfg, default_t1):
    t1 = cfg["t1"] if cfg["t1"] is not None else default_t1
    try:
        return dynamics.time_grid(cfg["t0"], t1, cfg["points"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _out_dir(cfg) -> Path:
    out = cfg.get("out") or os.environ.get("SPINCHAN_OUT_DIR") or "spinchan-out"
    return Path(out)


# -- commands -------------------------------------------------------------


def cmd_spectrum(cfg, out: Path):
    spec = build_spec(cfg)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    sites = [int(s) for s in str(cfg["sites"]).split(",")]
    for s in sites:
        if not 1 <= s <= spec.n_sites:
            raise UsageError(f"site {s} outside 1..{spec.n_sites}")
    files = [atomic_write(out / "spectrum.csv", spectrum.to_csv())]
    pops = np.column_stack([spectrum.eigenvectors[:, s - 1] ** 2 for s in sites])
    rows = [[k + 1, spectrum.eigenvalues[k], *pops[k]] for k in range(spectrum.size)]
    header = ["k", "E_k"] + [f"p_{s}" for s in sites]
    files.append(atomic_write(out / "populations.csv", csv_text(header, rows)))
    return files


def _parse_observable(name, n):
    if name in ("F", "Fbar"):
        return (name,)
    parts = name.split("_")
    try:
        if parts[0] == "C" and len(parts) == 3:
            i, j = int(parts[1]), int(parts[2])
            if i != j and 1 <= i <= n and 1 <= j <= n:
                return ("C", i, j)
        if parts[0] == "c" and len(parts) == 2:
            i = int(parts[1])
            if 1 <= i <= n:
                return ("c", i)
    except ValueError:
        pass
    raise UsageError(f"unknown observable {name!r}; use F, Fbar, C_i_j or c_i with sites in 1..{n}")


def cmd_evolve(cfg, out: Path):
    spec = build_spec(cfg)
    n = spec.n_sites
    source = cfg["source"]
    target = cfg["target"] or n
    if not (1 <= source <= n and 1 <= target <= n):
        raise UsageError(f"source/target must lie in 1..{n}")
    names = [s.strip() for s in cfg["observables"].split(",") if s.strip()]
    parsed = [_parse_observable(s, n) for s in names]
    default_t1 = analysis.default_window(spec)[1] if spec.family != channels.Family.CUSTOM else 10.0
    times = _times(cfg, default_t1)
    spectrum = diagonalize(channels.build_hamiltonian(spec))
    gamma = cfg["gamma"]
    columns = [times]
    states = None
    for obs in parsed:
        if obs[0] in ("F", "Fbar"):
            columns.append(analysis.observable_series(spectrum, obs[0], gamma, times, source, target))
            continue
        if states is None:
            rho0 = dynamics.site_state(n, source)
            states = [dynamics.evolve_h1(spectrum, rho0, gamma, t) for t in times]
        if obs[0] == "C":
            columns.append(np.array([observables.concurrence_fast(s, obs[1], obs[2]) for s in states]))
        else:
            columns.append(np.array([dynamics.site_amplitude(s, obs[1]) for s in states]))
    rows = np.column_stack(columns)
    return [atomic_write(out / "evolve.csv", csv_text(["t"] + names, rows))]


_QUANTITY_FOR_FAMILY = {"uniform": "uniform-F", "modulated": "modulated-F"}


def cmd_steady(cfg, out: Path):
    quantity = cfg.get("quantity") or _QUANTITY_FOR_FAMILY.get(cfg.get("family"))
    if quantity is None:
        raise UsageError("steady needs --quantity (or --family uniform/modulated)")
    _require(cfg, "n")
    sizes = range(cfg["n_min"], cfg["n"] + 1)
    if len(sizes) == 0 or cfg["n_min"] < 2:
        raise UsageError("steady needs 2 <= --n-min <= --n")
    rows = steady.steady_table(quantity, sizes)
    header = ["N", "formula_value", "numeric_value", "abs_diff"]
    return [atomic_write(out / "steady.csv", csv_text(header, rows))]


def cmd_sweep(cfg, out: Path):
    param = cfg["param"]
    gamma = cfg["gamma"]
    if param == "j0":
        _require(cfg, "family", "n")
        fam = cfg["family"]
        if fam not in ("modified-a", "modified-b"):
            raise UsageError("--param j0 needs --family modified-a or modified-b")
        if cfg["field"]:
            raise UsageError("--param j0 does not take --field")
        grid = _grid(cfg.get("grid"), np.linspace(0.001, 0.1, 25))
        if np.any(grid <= 0):
            raise UsageError("J0 grid values must be positive")
        scale = cfg["lambda"] if fam == "modified-a" else cfg["j"]
        result = analysis.sweep_j0(fam, cfg["n"], gamma, grid, cfg["observable"], scale=scale, workers=cfg["workers"])
        spec_desc = analysis._build_modified(fam, cfg["n"], float(grid[0]), scale).to_json()
    else:
        spec = build_spec(cfg)
        grid = _grid(cfg.get("grid"), np.linspace(0.05, 0.5, 10))
        if np.any(grid < 0):
            raise UsageError("gamma grid values must be non-negative")
        result = analysis.sweep_gamma(spec, grid, cfg["observable"], workers=cfg["workers"])
        spec_desc = spec.to_json()
    if np.any(np.diff(grid) <= 0):
        raise UsageError("sweep grid must be strictly increasing")
    files = [atomic_write(out / "sweep.csv", csv_text(["param", "value", "t_at_max"], result.rows()))]
    meta = dict(result.metadata)
    spec_key = "spec_at_first_point" if param == "j0" else "spec"
    meta.update({"parameter": param, "gamma": gamma, spec_key: json.loads(spec_desc)})
    meta.pop("n_sites", None)
    files.append(atomic_write(out / "sweep.json", json.dumps(meta, indent=2, sort_keys=True) + "\n"))
    return files


def cmd_design(cfg, out: Path):
    spec = build_spec(cfg)
    if spec.family not in (channels.Family.MODIFIED_A, channels.Family.MODIFIED_B):
        raise UsageError("design needs --family modified-a or modified-b")
    report = analysis.extract_design(spec, gamma=cfg["gamma"])
    doc = report.to_dict()
    if cfg.get("optimize_field"):
        b_star, fbar = analysis.optimize_field(spec, cfg["gamma"])
        doc["B_star"], doc["Fbar_max"] = b_star, fbar
    return [atomic_write(out / "design.json", json.dumps(doc, indent=2) + "\n")]


def cmd_verify(cfg, out: Path):
    spec = build_spec(cfg)
    n = spec.n_sites
    h = channels.build_hamiltonian(spec)
    spectrum = diagonalize(h)
    gamma = cfg["gamma"]
    points = cfg["points"] if cfg["points"] != DEFAULTS["points"] else 11
    times = dynamics.time_grid(0.0, cfg["t_max"], points)
    # pure input with coherences spread over the whole chain
    amps = np.cos(np.arange(1, n + 1)) + 1j * np.sin(0.5 * np.arange(1, n + 1))
    rho0 = dynamics.pure_state(amps).b
    eig = np.array([dynamics.evolve_h1(spectrum, rho0, gamma, t).b for t in times])
    kraus = dynamics.kraus_oracle(h, rho0, gamma, times).rho
    rk4 = dynamics.master_equation_oracle(h, rho0, gamma, times)
    pairs = {
        "eigen_vs_kraus": np.abs(eig - kraus).max(axis=(1, 2)),
        "eigen_vs_rk4": np.abs(eig - rk4).max(axis=(1, 2)),
        "kraus_vs_rk4": np.abs(kraus - rk4).max(axis=(1, 2)),
    }
    rows = np.column_stack([times] + list(pairs.values()))
    files = [atomic_write(out / "verify.csv", csv_text(["t"] + list(pairs), rows))]
    worst = {k: float(v.max()) for k, v in pairs.items()}
    summary = {"tolerance": VERIFY_TOL, "max_discrepancy": worst, "passed": max(worst.values()) <= VERIFY_TOL}
    files.append(atomic_write(out / "verify.json", json.dumps(summary, indent=2, sort_keys=True) + "\n"))
    if not summary["passed"]:
        raise ContractViolation(f"propagators disagree: {worst}")
    return files


COMMANDS = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "design": cmd_design,
    "verify": cmd_verify,
}


def _config_echo(cfg):
    return {k: v for k, v in sorted(cfg.items()) if v is not None and k != "out"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    start = time.perf_counter()
    try:
        cfg = _resolve(args)
        out = _out_dir(cfg)
        files = []
        try:
            files = COMMANDS[args.command](cfg, out)
        except ContractViolation:
            written = [out / name for name in ("verify.csv", "verify.json")]
            files = [f for f in written if f.exists()] if args.command == "verify" else []
            raise
        finally:
            if files:
                write_manifest(out / f"{args.command}-manifest.json", _config_echo(cfg), files, __version__, time.perf_counter() - start)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"spinchan: error: {exc}", file=sys.stderr)
        return 2
    except (InvalidSizeError, NotFoundError, ValueError, KeyError, IndexError) as exc:
        if isinstance(exc, ContractViolation):
            print(f"spinchan: numerical contract violated: {exc}", file=sys.stderr)
            return 3
        parser.print_usage(sys.stderr)
        print(f"spinchan: error: {exc}", file=sys.stderr)
        return 2
    except SpinChanError as exc:
        print(f"spinchan: numerical contract violated: {exc}", file=sys.stderr)
        return 3
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
