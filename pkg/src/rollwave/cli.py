"""Command-line front end: one JSON config per run, outputs plus a manifest.

Every subcommand reads a single JSON configuration file, validates it,
executes the corresponding library computation, and writes plot-ready CSV /
JSON artifacts together with ``manifest.json`` (config echo, package and
dependency versions, wall-clock timings) into the output directory.  All
computations are deterministic: re-running a persisted config on the same
build reproduces the CSV/JSON outputs bit for bit.

Exit codes: 0 success, 2 validation error, 3 numerical failure,
4 unreliable result.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bloch import (
    bloch_to_csv,
    dynamic_spectrum_max_real,
    essential_spectrum_of_wave,
    hill_spectrum,
    periodic_extension,
)
from .contour import adaptive_winding, build_semicircle, real_axis_scan
from .errors import NumericalError, UnreliableResultError, ValidationError
from .evans import EvansSystem, evans_derivative_sign_at_zero, stability_index
from .evolve import diagnostics_to_json, run_experiment, snapshots_to_csv
from .hifreq import (
    convergence_table_csv,
    hf_coefficients,
    hf_convergence_study,
    hf_radius,
    theta_blocks,
)
from .model import ModelSpec, WaveParams, equilibrium_info
from .profile import (
    find_equilibria,
    find_homoclinic_speed,
    profile_from_json,
    profile_to_json,
    separation_speed_derivative,
    solve_homoclinic,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_UNRELIABLE = 4


# -- config plumbing --------------------------------------------------------


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"config file not found: {path}")
    try:
        cfg = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValidationError(f"config is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ValidationError("config root must be a JSON object")
    return cfg


def _model_from(cfg: dict) -> ModelSpec:
    if "model" not in cfg:
        raise ValidationError("config is missing the 'model' section")
    return ModelSpec.from_json_dict(cfg["model"])


def _wave_from(cfg: dict) -> WaveParams:
    if "wave" not in cfg:
        raise ValidationError("config is missing the 'wave' section")
    return WaveParams.from_json_dict(cfg["wave"])


def _resolve_speed(model: ModelSpec, cfg: dict) -> WaveParams:
    """Wave parameters, optionally found by rooting the manifold separation.

    With a ``speed_search`` section {"bracket": [lo, hi], "q_rule":
    {"const": a, "slope": b}} the speed is the root of the separation along
    the family q(c) = a + b*c; otherwise 'wave' supplies (c, q) directly.
    """
    search = cfg.get("speed_search")
    if search is None:
        return _wave_from(cfg)
    bracket = search.get("bracket")
    if not (isinstance(bracket, (list, tuple)) and len(bracket) == 2):
        raise ValidationError("speed_search.bracket must be [lo, hi]")
    rule = search.get("q_rule", {})
    a = float(rule.get("const", 0.0))
    b = float(rule.get("slope", 0.0))
    c = find_homoclinic_speed(model, lambda cc: a + b * cc, (float(bracket[0]), float(bracket[1])))
    return WaveParams(c=c, q=a + b * c)


def _profile_from(cfg: dict):
    """Profile either loaded from a persisted JSON file or solved fresh."""
    path = cfg.get("profile_path")
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ValidationError(f"profile file not found: {path}")
        return profile_from_json(p.read_text(encoding="utf-8"))
    model = _model_from(cfg)
    wave = _resolve_speed(model, cfg)
    return solve_homoclinic(model, wave, cfg.get("profile_opts"))


def _write(out_dir: Path, name: str, text: str):
    (out_dir / name).write_text(text, encoding="utf-8")


def _write_json(out_dir: Path, name: str, obj):
    _write(out_dir, name, json.dumps(obj, indent=2) + "\n")


def _write_manifest(out_dir: Path, command: str, cfg: dict, outputs: list, t0: float):
    manifest = {
        "command": command,
        "config": cfg,
        "outputs": sorted(outputs),
        "versions": {
            "rollwave": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "elapsed_seconds": time.perf_counter() - t0,
    }
    _write_json(out_dir, "manifest.json", manifest)


# -- subcommands ------------------------------------------------------------


def _cmd_equilibria(cfg: dict, out: Path) -> list:
    model = _model_from(cfg)
    wave = _wave_from(cfg)
    eqs = find_equilibria(model, wave, cfg.get("tau_max"))
    lines = ["tau0,u0,cs,dfstar,classification"]
    for eq in eqs:
        lines.append(
            f"{eq.tau0:.17g},{eq.u0:.17g},{eq.cs:.17g},{eq.dfstar:.17g},{eq.classification.value}"
        )
    _write(out, "equilibria.csv", "\n".join(lines) + "\n")
    return ["equilibria.csv"]


def _cmd_profile(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    _write(out, "profile.json", profile_to_json(profile))
    summary = {
        "c": profile.wave.c,
        "q": profile.wave.q,
        "tau0": profile.endstate.tau0,
        "amplitude": profile.amplitude,
        "half_length": profile.L,
        "dx": profile.dx,
        "truncation_error": profile.truncation_error,
    }
    _write_json(out, "profile_summary.json", summary)
    return ["profile.json", "profile_summary.json"]


def _cmd_evans_real(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    system = EvansSystem(profile)
    interval = cfg.get("interval")
    if not (isinstance(interval, (list, tuple)) and len(interval) == 2):
        raise ValidationError("evans-real requires 'interval': [a, b] with 0 < a < b")
    roots = real_axis_scan(system, interval, n=int(cfg.get("n", 200)))
    lines = ["root,bracket_lo,bracket_hi"]
    for r in roots:
        lines.append(f"{r.root:.17g},{r.bracket[0]:.17g},{r.bracket[1]:.17g}")
    _write(out, "real_roots.csv", "\n".join(lines) + "\n")
    _write_json(out, "real_roots.json", {"interval": list(map(float, interval)),
                                         "roots": [r.root for r in roots]})
    return ["real_roots.csv", "real_roots.json"]


def _cmd_winding(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    system = EvansSystem(profile)
    contour_cfg = cfg.get("contour", {})
    R = contour_cfg.get("R")
    if R is None:
        raise ValidationError("winding requires 'contour': {'R': ...}")
    contour = build_semicircle(
        float(R),
        r_in=float(contour_cfg.get("r_in", 1e-3)),
        n0=int(contour_cfg.get("n0", 32)),
    )
    result = adaptive_winding(
        system,
        contour,
        max_rel_change=float(cfg.get("max_rel_change", 0.2)),
        max_points=int(cfg.get("max_points", 20000)),
    )
    _write_json(out, "winding.json", {
        "winding": result.winding,
        "max_rel_step": result.max_rel_step,
        "n_points": result.n_points,
        "contour": contour.descriptor,
    })
    return ["winding.json"]


def _cmd_index(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    system = EvansSystem(profile)
    sign = evans_derivative_sign_at_zero(system)
    parity = stability_index(system)
    dc_d = separation_speed_derivative(profile.model, profile.wave)
    consistent = sign == (-1 if dc_d > 0 else 1)
    _write_json(out, "index.json", {
        "d_prime_zero_sign": sign,
        "separation_speed_derivative": dc_d,
        "parity": parity.value,
        "sign_relation_consistent": consistent,
    })
    return ["index.json"]


def _cmd_hf_bound(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    blocks = theta_blocks(profile)
    coeffs = hf_coefficients(blocks, profile)
    bound = hf_radius(coeffs)
    _write_json(out, "hf_bound.json", {
        "coefficients": dict(zip(
            ("a0", "a_half", "a1", "a_3half", "a2", "a_5quarter", "a3"),
            coeffs.as_tuple(),
        )),
        "R": bound.R,
        "radius": bound.radius,
        "relaxed_quartic": bound.relaxed_quartic,
        "relaxed_quadratic": bound.relaxed_quadratic,
    })
    outputs = ["hf_bound.json"]
    radii = cfg.get("convergence_radii")
    if radii:
        table = hf_convergence_study(EvansSystem(profile), [float(r) for r in radii],
                                     n_arc=int(cfg.get("n_arc", 64)))
        _write(out, "hf_convergence.csv", convergence_table_csv(table))
        outputs.append("hf_convergence.csv")
    return outputs


def _cmd_essential(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    model, wave = profile.model, profile.wave
    eq = equilibrium_info(model, wave, profile.endstate.tau0)
    kg = cfg.get("k_grid", {})
    k_grid = np.linspace(float(kg.get("min", -10.0)), float(kg.get("max", 10.0)),
                         int(kg.get("n", 401)))
    samples, max_re, stable = essential_spectrum_of_wave(model, wave, eq, k_grid)
    lines = ["k,re_lambda,im_lambda"]
    for s in samples:
        for lam in s.roots:
            lines.append(f"{s.k:.17g},{lam.real:.17g},{lam.imag:.17g}")
    _write(out, "dispersion.csv", "\n".join(lines) + "\n")
    _write_json(out, "essential.json", {"max_re": max_re, "stable": stable})
    return ["dispersion.csv", "essential.json"]


def _cmd_dynamic(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    ext = periodic_extension(profile, paste_tol=float(cfg.get("paste_tol", 1e-6)))
    n_xi = int(cfg.get("n_xi", 64))
    xi_max = np.pi / ext.X
    xi_list = np.linspace(-xi_max, xi_max, n_xi, endpoint=False)
    samples = hill_spectrum(ext, xi_list, N=int(cfg.get("N", 32)))
    max_re = dynamic_spectrum_max_real(
        samples, exclude_origin=float(cfg.get("exclude_origin", 1e-2))
    )
    _write(out, "bloch.csv", bloch_to_csv(samples, ext.X))
    _write_json(out, "dynamic.json", {
        "period": ext.X,
        "seam_jump": ext.seam_jump,
        "max_re_excluding_origin": max_re,
        "stable": bool(max_re <= 1e-2),
    })
    return ["bloch.csv", "dynamic.json"]


def _cmd_evolve(cfg: dict, out: Path) -> list:
    profile = _profile_from(cfg)
    snapshots, diag = run_experiment(
        profile,
        perturbation=cfg.get("perturbation"),
        T=float(cfg.get("T", 10.0)),
        snapshot_times=cfg.get("snapshot_times"),
        dt=float(cfg.get("dt", 0.01)),
        dx=float(cfg.get("dx", 0.02)),
        pad=float(cfg.get("pad", 1.0)),
    )
    _write(out, "snapshots.csv", snapshots_to_csv(snapshots))
    _write(out, "diagnostics.json", diagnostics_to_json(diag))
    return ["snapshots.csv", "diagnostics.json"]


_COMMANDS = {
    "equilibria": _cmd_equilibria,
    "profile": _cmd_profile,
    "evans-real": _cmd_evans_real,
    "winding": _cmd_winding,
    "index": _cmd_index,
    "hf-bound": _cmd_hf_bound,
    "essential": _cmd_essential,
    "dynamic": _cmd_dynamic,
    "evolve": _cmd_evolve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rollwave",
        description="Spectral stability of viscous St. Venant / Jin-Xin solitary waves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--out", required=True, help="output directory (created if missing)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = _load_config(args.config)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        outputs = _COMMANDS[args.command](cfg, out)
        _write_manifest(out, args.command, cfg, outputs, t0)
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except UnreliableResultError as e:
        print(f"unreliable result: {e}", file=sys.stderr)
        return EXIT_UNRELIABLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
