"""Scenario runner: every capability as a reproducible batch command.

Usage:
    nlo-quanta COMMAND [--config PATH] [--out DIR] [--threads N] [--fast]

Commands: squeeze entangle kerr oscillator nphoton medium dispersion
downconv soliton validate.

Configs are flat INI key-value files with one section per command (plus an
optional [run] section carrying ``command`` and ``seed``); unknown sections
or keys are hard errors. Outputs are CSV tables (byte-identical for an
identical config and package version, with the config hash embedded in a
comment header) plus a small JSON metadata file that carries the config
echo, version, and wall time.

Exit codes: 0 success, 1 usage error, 2 config/validation error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import closed_form as cf
from . import diagnostics as dg
from . import evolve, fock, media, models, oscillator, soliton, validation
from .errors import NumericsError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = ("squeeze", "entangle", "kerr", "oscillator", "nphoton", "medium",
            "dispersion", "downconv", "soliton", "validate")


class ConfigError(ValueError):
    pass


class UsageError(ValueError):
    """Command-line level misuse (missing/empty config, no command)."""


@dataclass
class ScenarioConfig:
    """Validated parameters for one command run."""

    command: str
    params: dict
    seed: int = 0
    threads: int = 1
    fast: bool = False

    def hash(self) -> str:
        payload = json.dumps(
            {"command": self.command, "seed": self.seed, "fast": self.fast,
             "params": {k: self.params[k] for k in sorted(self.params)}},
            sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class Table:
    """Columnar series with unit strings, ready for CSV emission."""

    name: str
    columns: list  # of (name, unit, values)

    def rows(self):
        lengths = {len(v) for _, _, v in self.columns}
        if len(lengths) != 1:
            raise ConfigError(f"table {self.name} has ragged columns")
        n = lengths.pop()
        for i in range(n):
            yield [v[i] for _, _, v in self.columns]


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    tables: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    wall_time: float = 0.0


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_outputs(result: ScenarioResult, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    cfg_hash = result.config.hash()
    for table in result.tables:
        path = os.path.join(out_dir, f"{table.name}.csv")
        with open(path, "w") as fh:
            fh.write(f"# nlo-quanta {__version__}\n")
            fh.write(f"# config_hash: {cfg_hash}\n")
            fh.write(",".join(f"{name} [{unit}]" for name, unit, _ in table.columns) + "\n")
            for row in table.rows():
                fh.write(",".join(_fmt(x) for x in row) + "\n")
    meta = {
        "command": result.config.command,
        "config_hash": cfg_hash,
        "version": __version__,
        "config": {"seed": result.config.seed, "fast": result.config.fast,
                   "params": result.config.params},
        "summary": result.summary,
        "wall_time_s": result.wall_time,
        "tables": [t.name for t in result.tables],
    }
    with open(os.path.join(out_dir, f"{result.config.command}_meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# configuration schemas: name -> (parser, default)


SCHEMAS = {
    "squeeze": {
        "n_pump": (float, 1e4),
        "u_min": (float, 0.0),
        "u_max": (float, 3.0),
        "points": (int, 61),
    },
    "entangle": {
        "points": (int, 181),
    },
    "kerr": {
        "alpha": (float, 2.0),
        "omega": (float, 0.0),
        "kappa": (float, 1.0),
        "kt_max": (float, 2.0 * np.pi),
        "points": (int, 101),
        "bs_phi": (float, 0.25),
    },
    "oscillator": {
        "kappa": (float, 0.25),
        "gamma_a": (float, 1.0),
        "gamma_b": (float, 2.0),
        "ratio_min": (float, 0.02),
        "ratio_max": (float, 0.999),
        "points": (int, 50),
    },
    "nphoton": {
        "n": (int, 3),
        "kappa_n": (float, 0.15),
        "pump_alpha": (float, 1.0),
        "signal_dim": (int, 18),
        "pump_dim": (int, 14),
        "t_max": (float, 3.0),
        "points": (int, 16),
        "husimi_radius": (float, 3.5),
        "husimi_points": (int, 41),
    },
    "medium": {
        "delta": (float, 1.0),
        "g": (float, 1.0),
        "n_density": (float, 1.0),
        "e0_min": (float, 0.0),
        "e0_max": (float, 0.05),
        "points": (int, 51),
    },
    "dispersion": {
        "beta_nu_rel": (float, 1.0 / 2.25),
        "beta_prime_s": (float, 2e-27),
        "beta_dblprime_s2": (float, 1e-43),
        "k_min": (float, 1e6),
        "k_max": (float, 2e7),
        "points": (int, 100),
    },
    "downconv": {
        "k0": (float, 3.0),
        "dz_max": (float, 40.0),
        "points": (int, 161),
    },
    "soliton": {
        "n0": (int, 25),
        "omega1_dblprime": (float, 2.0),
        "g3": (float, -0.05),
        "grid_widths": (float, 24.0),
        "grid_points": (int, 1024),
        "periods": (float, 1.0),
        "steps": (int, 0),  # 0 -> use the dx^2/(pi w'') guidance
        "snapshots": (int, 5),
    },
    "validate": {},
}


def parse_config_file(path: str, command: str | None):
    """Read an INI config; returns (command, raw dict, seed). Unknown
    sections or keys raise ConfigError (anti-typo contract)."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise UsageError(f"config file {path!r} is missing or unreadable")
    sections = set(parser.sections())
    if not sections and not parser.defaults():
        raise UsageError(f"config file {path!r} is empty")
    seed = 0
    cfg_command = command
    if "run" in sections:
        run_keys = set(parser["run"])
        extra = run_keys - {"command", "seed"}
        if extra:
            raise ConfigError(f"unknown keys in [run]: {sorted(extra)}")
        if "command" in parser["run"]:
            cfg_command = parser["run"]["command"].strip()
            if command is not None and cfg_command != command:
                raise ConfigError(
                    f"config command {cfg_command!r} conflicts with CLI command {command!r}")
        if "seed" in parser["run"]:
            seed = int(parser["run"]["seed"])
        sections.discard("run")
    if cfg_command is None:
        raise ConfigError("no command given (CLI argument or [run] section)")
    if cfg_command not in SCHEMAS:
        raise ConfigError(f"unknown command {cfg_command!r}")
    unknown_sections = sections - {cfg_command}
    if unknown_sections:
        raise ConfigError(f"unknown config sections: {sorted(unknown_sections)}")
    raw = dict(parser[cfg_command]) if cfg_command in parser else {}
    return cfg_command, raw, seed


def build_config(command: str, raw: dict, seed: int, threads: int, fast: bool) -> ScenarioConfig:
    schema = SCHEMAS[command]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigError(f"unknown keys for {command!r}: {sorted(unknown)}")
    params = {}
    for key, (cast, default) in schema.items():
        if key in raw:
            try:
                params[key] = cast(float(raw[key])) if cast is int else cast(raw[key])
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {raw[key]!r} ({exc})")
        else:
            params[key] = default
    return ScenarioConfig(command, params, seed=seed, threads=threads, fast=fast)


# ---------------------------------------------------------------------------
# command implementations


def run_squeeze(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    if p["n_pump"] <= 0 or p["points"] < 2 or p["u_max"] <= p["u_min"]:
        raise ConfigError("squeeze needs n_pump > 0, points >= 2, u_max > u_min")
    us = np.linspace(p["u_min"], p["u_max"], p["points"])
    var1, var2, averaged, corrected = [], [], [], []
    for u in us:
        v1, v2 = cf.para_variances(u, 0.0)
        var1.append(v1)
        var2.append(v2)
        averaged.append(cf.phase_averaged_var_x2(u, p["n_pump"]))
        corrected.append(cf.corrected_var_x2(u, p["n_pump"]))
    u_star, var_min = cf.max_squeezing(p["n_pump"])
    table = Table("squeeze", [
        ("u", "dimensionless", list(us)),
        ("var_x1", "dimensionless", var1),
        ("var_x2", "dimensionless", var2),
        ("var_x2_phase_averaged", "dimensionless", averaged),
        ("var_x2_corrected", "dimensionless", corrected),
    ])
    optimum = Table("squeeze_optimum", [
        ("n_pump", "photons", [p["n_pump"]]),
        ("u_star", "dimensionless", [u_star]),
        ("var_min", "dimensionless", [var_min]),
    ])
    return ScenarioResult(cfg, [table, optimum], {"u_star": u_star, "var_min": var_min,
                                                  "n_pump": p["n_pump"]})


def run_entangle(cfg: ScenarioConfig) -> ScenarioResult:
    points = cfg.params["points"]
    if points < 16:
        raise ConfigError("entangle needs points >= 16")
    space = fock.make_space([5, 5])
    i00, i11 = space.flat_index((0, 0)), space.flat_index((1, 1))
    thetas = np.linspace(0.0, np.pi / 2, points)
    dsum, eprod = [], []
    for theta in thetas:
        vec = np.zeros(space.total_dim, dtype=complex)
        vec[i00], vec[i11] = np.cos(theta), -np.sin(theta)
        state = fock.QuantumState(space, "pure", vec)
        dsum.append(dg.duan_simon_sum(state, 0, 1).value)
        eprod.append(dg.epr_product(state, 0, 1).value)
    k = int(np.argmin(dsum))
    table = Table("entangle", [
        ("theta", "rad", list(thetas)),
        ("c0", "dimensionless", list(np.cos(thetas))),
        ("c1", "dimensionless", list(-np.sin(thetas))),
        ("duan_simon_sum", "dimensionless", dsum),
        ("epr_product", "dimensionless", eprod),
    ])
    vec = np.zeros(space.total_dim, dtype=complex)
    vec[i00], vec[i11] = np.cos(thetas[k]), -np.sin(thetas[k])
    best = fock.QuantumState(space, "pure", vec)
    reports = [dg.duan_simon_sum(best, 0, 1).to_json_row(),
               dg.epr_product(best, 0, 1).to_json_row()]
    return ScenarioResult(cfg, [table], {
        "min_duan_sum": dsum[k], "argmin_theta": float(thetas[k]),
        "analytic_min": 4.0 - 2.0 * np.sqrt(2.0), "analytic_theta": np.pi / 8,
        "criterion_reports": reports})


def run_kerr(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    if p["points"] < 2 or p["kt_max"] <= 0:
        raise ConfigError("kerr needs points >= 2 and kt_max > 0")
    kts = np.linspace(0.0, p["kt_max"], p["points"])
    amps = [cf.kerr_mean_amplitude(p["alpha"], p["omega"], p["kappa"], kt / p["kappa"])
            for kt in kts]
    table = Table("kerr", [
        ("kappa_t", "rad", list(kts)),
        ("re_mean", "dimensionless", [a.real for a in amps]),
        ("im_mean", "dimensionless", [a.imag for a in amps]),
        ("abs_mean", "dimensionless", [abs(a) for a in amps]),
    ])
    opt = cf.kerr_bs_optimum(abs(p["alpha"]), p["bs_phi"])
    return ScenarioResult(cfg, [table], {
        "bs_optimum_excess": opt.excess, "bs_mean_n": opt.mean_n, "bs_r_opt": opt.r_opt,
        "bs_phi": p["bs_phi"]})


def run_oscillator(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    if not (0.0 < p["ratio_min"] < p["ratio_max"] < 1.0):
        raise ConfigError("oscillator sweep needs 0 < ratio_min < ratio_max < 1")
    ratios = np.linspace(p["ratio_min"], p["ratio_max"], p["points"])
    gg = p["gamma_a"] * p["gamma_b"]
    beta0, slowest, squeezing, n_fluct = [], [], [], []
    for ratio in ratios:
        dp = oscillator.DpoParams(p["kappa"], ratio * gg / p["kappa"],
                                  p["gamma_a"], p["gamma_b"])
        below = oscillator.steady_branches(dp)[0]
        evals = oscillator.stability_eigenvalues(dp, below)
        beta0.append(below.beta0.real)
        slowest.append(float(evals.real.max()))
        squeezing.append(oscillator.below_threshold_squeezing(dp))
        n_fluct.append(oscillator.below_threshold_moments(dp)[0])
    table = Table("oscillator", [
        ("threshold_ratio", "dimensionless", list(ratios)),
        ("alpha0", "dimensionless", [0.0] * len(ratios)),
        ("beta0", "dimensionless", beta0),
        ("slowest_eigenvalue", "rad/s", slowest),
        ("squeezed_variance", "dimensionless", squeezing),
        ("signal_n_fluct", "dimensionless", n_fluct),
    ])
    return ScenarioResult(cfg, [table], {
        "squeezing_threshold_limit": oscillator.squeezing_threshold_limit(),
        "gamma_a": p["gamma_a"], "gamma_b": p["gamma_b"], "kappa": p["kappa"]})


def run_nphoton(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    space = fock.make_space([p["signal_dim"], p["pump_dim"]])
    model = models.h_nphoton(space, 1.0, p["kappa_n"], p["n"])
    psi0 = fock.coherent_state(space, [0.0, p["pump_alpha"]], tail_tol=1e-9)
    times = np.linspace(0.0, p["t_max"], p["points"])
    result = evolve.evolve_pure(model, psi0, times)
    n_sig = result.expectation_series(fock.number_operator(space, 0)).real
    n_pump = result.expectation_series(fock.number_operator(space, 1)).real
    rot_dev = [dg.rotation_invariance(s, 0, p["n"]) for s in result.states]
    table = Table("nphoton", [
        ("t", "s", list(times)),
        ("n_signal", "photons", list(n_sig)),
        ("n_pump", "photons", list(n_pump)),
        ("signal_rotation_dev", "dimensionless", rot_dev),
    ])
    grid, _ = dg.husimi_grid(p["husimi_radius"], p["husimi_points"])
    q = dg.husimi_q(result.states[-1], 0, grid)
    husimi = Table("nphoton_husimi", [
        ("re_alpha", "dimensionless", list(grid.real.ravel())),
        ("im_alpha", "dimensionless", list(grid.imag.ravel())),
        ("q", "1/pi", list(q.ravel())),
    ])
    return ScenarioResult(cfg, [table, husimi], {
        "n": p["n"], "final_n_signal": float(n_sig[-1]),
        "max_rotation_dev": float(max(rot_dev))})


def run_medium(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    if p["e0_max"] <= p["e0_min"] or p["e0_min"] < 0:
        raise ConfigError("medium sweep needs 0 <= e0_min < e0_max")
    e0s = np.linspace(p["e0_min"], p["e0_max"], p["points"])
    ref = media.TwoLevelParams(delta=p["delta"], gE=0.0, n_density=p["n_density"], g=p["g"])
    chi1 = media.chi1_two_level(ref)
    chi3 = media.chi3_two_level(ref)
    pol, chi_eff = [], []
    for e0 in e0s:
        tl = media.TwoLevelParams(delta=p["delta"], gE=p["g"] * e0,
                                  n_density=p["n_density"], g=p["g"])
        pol.append(media.two_level_polarization(tl))
        chi_eff.append(media.effective_chi_kerr(chi1, chi3, e0))
    table = Table("medium", [
        ("E0", "V/m", list(e0s)),
        ("polarization_amp", "C/m^2", pol),
        ("chi_eff", "dimensionless", chi_eff),
    ])
    return ScenarioResult(cfg, [table], {"chi1": chi1, "chi3": chi3, "delta": p["delta"]})


def run_dispersion(cfg: ScenarioConfig) -> ScenarioResult:
    from scipy.constants import epsilon_0

    p = cfg.params
    coeffs = media.DispersionCoeffs(
        beta_nu=p["beta_nu_rel"] / epsilon_0,
        beta_nu_prime=p["beta_prime_s"] / epsilon_0,
        beta_nu_dblprime=p["beta_dblprime_s2"] / epsilon_0,
    )
    ks = np.linspace(p["k_min"], p["k_max"], p["points"])
    wp, wm, ak, vk = [], [], [], []
    for k in ks:
        plus, minus = media.dispersion_omega(k, coeffs)
        wp.append(plus)
        wm.append(minus)
        ak.append(media.mode_norm_Ak(k, coeffs))
        vk.append(media.group_velocity(k, coeffs))
    table = Table("dispersion", [
        ("k", "1/m", list(ks)),
        ("omega_plus", "rad/s", wp),
        ("omega_minus", "rad/s", wm),
        ("A_k", "sqrt(H/m * rad/s)", ak),
        ("v_k", "m/s", vk),
    ])
    return ScenarioResult(cfg, [table], {"points": p["points"]})


def run_downconv(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    if p["k0"] <= 0 or p["dz_max"] <= 0:
        raise ConfigError("downconv needs k0 > 0 and dz_max > 0")
    dzs = np.linspace(-p["dz_max"], p["dz_max"], p["points"])
    vals = [cf.downconv_kernel(dz, p["k0"]).value for dz in dzs]
    quad = [cf.downconv_kernel_quadrature(dz, p["k0"], 2001) for dz in dzs]
    ms = np.arange(3, 40)
    envelope_dz = 2.0 * np.pi * ms / p["k0"]
    envelope = np.array([abs(cf.downconv_kernel(dz, p["k0"]).value) for dz in envelope_dz])
    exponent = -float(np.polyfit(np.log(envelope_dz), np.log(envelope), 1)[0])
    table = Table("downconv", [
        ("delta_z", "m", list(dzs)),
        ("abs_kernel", "1/m^3", [abs(v) for v in vals]),
        ("re_kernel", "1/m^3", [v.real for v in vals]),
        ("im_kernel", "1/m^3", [v.imag for v in vals]),
        ("abs_kernel_quadrature", "1/m^3", [abs(q) for q in quad]),
    ])
    return ScenarioResult(cfg, [table], {
        "fitted_decay_exponent": exponent,
        "dz0_value": p["k0"] ** 3 / 6.0, "k0": p["k0"]})


def run_soliton(cfg: ScenarioConfig) -> ScenarioResult:
    p = cfg.params
    if p["n0"] < 2 or p["grid_widths"] < 12:
        raise ConfigError("soliton needs n0 >= 2 and a grid of >= 12 soliton widths")
    g3 = p["g3"]
    if g3 >= 0:
        raise ConfigError("soliton propagation needs g3 < 0")
    width = soliton.FWHM_FACTOR * p["omega1_dblprime"] / (abs(g3) * (p["n0"] - 1))
    grid = soliton.SpatialGrid(extent=p["grid_widths"] * width, points=p["grid_points"])
    fiber = soliton.FiberParams(p["omega1_dblprime"], g3, 0.0, grid)
    period = fiber.soliton_period(p["n0"])
    t_final = p["periods"] * period
    steps = p["steps"] or int(np.ceil(t_final / (grid.dx ** 2 / (np.pi * p["omega1_dblprime"]))))
    profile = soliton.classical_soliton_profile(p["n0"], 0.0, 0.0, fiber, 0.0)

    snap_times = np.linspace(0.0, t_final, max(2, p["snapshots"]))
    columns = [("x", "m", list(grid.x))]
    peaks = []
    for i, st in enumerate(snap_times):
        sub_steps = max(1, int(round(steps * (st / t_final)))) if st > 0 else 0
        out = soliton.split_step_nlse(profile, fiber, st, sub_steps) if sub_steps else profile
        columns.append((f"abs_psi_t{i}", "1/sqrt(m)", list(np.abs(out.values))))
        peaks.append(out.peak())
    profile_table = Table("soliton_profile", columns)
    mf_times = np.linspace(0.0, 4.0 / max(fiber.g3 ** 2 * p["n0"] ** 1.5, 1e-12), 9)
    mf_peaks = [soliton.mean_field(np.sqrt(float(p["n0"])), fiber, None, t).peak()
                for t in mf_times]
    peak_table = Table("soliton_peak", [
        ("t", "s", list(snap_times)),
        ("peak_abs_psi", "1/sqrt(m)", peaks),
    ])
    mf_table = Table("soliton_mean_field_peak", [
        ("t", "s", list(mf_times)),
        ("peak_mean_field", "1/sqrt(m)", mf_peaks),
    ])
    return ScenarioResult(cfg, [profile_table, peak_table, mf_table], {
        "soliton_period": period, "steps": steps, "norm_sq": profile.norm_sq()})


def run_validate(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    matrix_path = os.path.join(out_dir, "validate_matrix.json")
    if os.path.exists(matrix_path):
        with open(matrix_path) as fh:
            previous = json.load(fh)
        if previous.get("config_hash") not in (None, cfg.hash()):
            raise ConfigError(
                f"output dir holds a validate matrix for config {previous['config_hash']}; "
                f"refusing to mix with {cfg.hash()} (use a fresh --out)")
    results = validation.run_all(fast=cfg.fast, threads=cfg.threads, printer=print)
    table = Table("validate", [
        ("criterion", "index", [r.criterion for r in results]),
        ("passed", "bool", [int(r.passed) for r in results]),
        ("seconds", "s", [round(r.seconds, 3) for r in results]),
    ])
    matrix = {
        "config_hash": cfg.hash(),
        "version": __version__,
        "fast": cfg.fast,
        "criteria": {
            str(r.criterion): {
                "name": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
                "details": _jsonable(r.details),
            } for r in results
        },
        "all_passed": all(r.passed for r in results),
    }
    os.makedirs(out_dir, exist_ok=True)
    with open(matrix_path, "w") as fh:
        json.dump(matrix, fh, indent=2, sort_keys=True)
    summary = {"all_passed": matrix["all_passed"],
               "n_passed": sum(r.passed for r in results), "n_run": len(results)}
    return ScenarioResult(cfg, [table], summary)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


RUNNERS = {
    "squeeze": run_squeeze,
    "entangle": run_entangle,
    "kerr": run_kerr,
    "oscillator": run_oscillator,
    "nphoton": run_nphoton,
    "medium": run_medium,
    "dispersion": run_dispersion,
    "downconv": run_downconv,
    "soliton": run_soliton,
}


def run(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    """Execute a validated scenario and write its outputs."""
    t0 = time.time()
    if cfg.command == "validate":
        result = run_validate(cfg, out_dir)
    else:
        result = RUNNERS[cfg.command](cfg)
    result.wall_time = time.time() - t0
    write_outputs(result, out_dir)
    if cfg.command == "validate" and not result.summary.get("all_passed", True):
        raise NumericsError("validate: one or more acceptance criteria failed")
    return result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlo-quanta",
        description="Quantum nonlinear optics scenario runner (CSV/JSON outputs).")
    parser.add_argument("command", nargs="?", choices=None, metavar="COMMAND",
                        help=f"one of: {' | '.join(COMMANDS)}")
    parser.add_argument("--config", metavar="PATH", help="INI scenario config")
    parser.add_argument("--out", metavar="DIR", default="out", help="output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: NLO_QUANTA_THREADS or 1)")
    parser.add_argument("--fast", action="store_true",
                        help="validate: run only the fast criteria tier")
    args = parser.parse_args(argv)

    if args.command is None and args.config is None:
        parser.print_usage(sys.stderr)
        print("error: no command given", file=sys.stderr)
        return EXIT_USAGE
    if args.command is not None and args.command not in COMMANDS:
        print(f"error: unknown command {args.command!r}; choose from {', '.join(COMMANDS)}",
              file=sys.stderr)
        return EXIT_USAGE

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("NLO_QUANTA_THREADS", "1"))
    if threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.config:
            command, raw, seed = parse_config_file(args.config, args.command)
        else:
            command, raw, seed = args.command, {}, 0
        cfg = build_config(command, raw, seed, threads, args.fast)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for key, value in sorted(result.summary.items()):
        print(f"{cfg.command}: {key} = {value}")
    print(f"{cfg.command}: outputs in {args.out} (config {cfg.hash()}, "
          f"{result.wall_time:.1f}s)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
