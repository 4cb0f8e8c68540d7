"""Acceptance gate: the ten headline results, one pass/fail line each."""

import json
import time

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

from rollwave import (
    EvansSystem,
    ModelSpec,
    adaptive_winding,
    build_semicircle,
    constant_extension,
    dispersion_roots,
    dynamic_spectrum_max_real,
    essential_spectrum_of_wave,
    evans_derivative_sign_at_zero,
    evans_eval,
    find_homoclinic_speed,
    hf_coefficients,
    hf_convergence_study,
    hf_radius,
    hill_spectrum,
    jinxin_quadrature,
    periodic_extension,
    real_axis_scan,
    separation_speed_derivative,
    solve_homoclinic,
    subcharacteristic_ok,
    theta_blocks,
)
from rollwave.cli import main as cli_main
from rollwave.evolve import (
    EvolutionState,
    cn_step,
    run_experiment,
)


@pytest.fixture
def check(capfd):
    """Verdict printer whose one-line output bypasses output capture."""

    def _check(num, ok, detail):
        with capfd.disabled():
            print(f"\nCRITERION {num}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)
        assert ok, f"criterion {num}: {detail}"

    return _check


def test_criterion_01_jinxin_instability(check, tmp_path):
    t0 = time.time()
    cfg = {
        "model": {"kind": "jin_xin", "cs": 1.0, "p": 0.5},
        "wave": {"c": 1.0, "q": 2.0},
        "interval": [0.01, 0.99],
        "contour": {"R": 1.0, "r_in": 1e-3},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    rc_scan = cli_main(["evans-real", "--config", str(path), "--out", str(tmp_path / "scan")])
    roots = json.loads((tmp_path / "scan" / "real_roots.json").read_text())["roots"]
    rc_wind = cli_main(["winding", "--config", str(path), "--out", str(tmp_path / "wind")])
    winding = json.loads((tmp_path / "wind" / "winding.json").read_text())["winding"]
    elapsed = time.time() - t0
    ok = rc_scan == 0 and rc_wind == 0 and len(roots) == 1 and winding == 1 and elapsed < 60.0
    check(
        1,
        ok,
        f"Jin-Xin: {len(roots)} interior real root(s) at {roots}, winding {winding}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_02_smooth_wave(check, sv11_model, sv11_system, sv11_profile):
    t0 = time.time()
    c = find_homoclinic_speed(sv11_model, lambda cc: 1.0 + cc, (3.0, 3.4))
    sign = evans_derivative_sign_at_zero(sv11_system)
    root = real_axis_scan(sv11_system, (5e-4, 0.01), n=40)[0].root
    winding = adaptive_winding(sv11_system, build_semicircle(0.01, r_in=1e-4)).winding
    k = np.linspace(-10.0, 10.0, 401)
    _, max_re, stable = essential_spectrum_of_wave(
        sv11_model, sv11_profile.wave, sv11_profile.endstate, k
    )
    elapsed = time.time() - t0
    ok = (
        3.0 <= c <= 3.4
        and abs(c - 3.1869) <= 0.02
        and sign == -1
        and winding == 1
        and stable
        and elapsed < 300.0
    )
    check(
        2,
        ok,
        f"smooth wave: c={c:.6f}, sgn D'(0)={sign}, real root {root:.5f}, winding {winding}, "
        f"essential spectrum max Re={max_re:.2e} (stable={stable}), {elapsed:.1f}s",
    )


def test_criterion_03_steep_wave(check, sv20_model, sv20_system, sv20_profile):
    t0 = time.time()
    c = sv20_profile.wave.c
    sign = evans_derivative_sign_at_zero(sv20_system)
    radius = hf_radius(hf_coefficients(theta_blocks(sv20_profile), sv20_profile)).radius
    result = adaptive_winding(sv20_system, build_semicircle(radius, r_in=1e-3))
    k = np.linspace(-10.0, 10.0, 401)
    _, max_re, stable = essential_spectrum_of_wave(
        sv20_model, sv20_profile.wave, sv20_profile.endstate, k
    )
    elapsed = time.time() - t0
    ok = (
        abs(c - 0.7849) <= 0.01
        and sign == 1
        and abs(radius - 308.0) <= 0.1 * 308.0
        and result.winding == 0
        and result.max_rel_step <= 0.2
        and not stable
        and elapsed < 1800.0
    )
    check(
        3,
        ok,
        f"steep wave: c={c:.6f}, sgn D'(0)={sign}, hf radius {radius:.2f}, winding "
        f"{result.winding} (max step {result.max_rel_step:.3f}, {result.n_points} pts), "
        f"essential spectrum max Re={max_re:.3e} (unstable), {elapsed:.1f}s",
    )


def test_criterion_04_subcharacteristic_threshold(check):
    at = subcharacteristic_ok(ModelSpec(kind="st_venant", F=4.0, nu=0.1, r=2.0, s=0.0), 1.0)
    above = subcharacteristic_ok(
        ModelSpec(kind="st_venant", F=4.0 + 1e-6, nu=0.1, r=2.0, s=0.0), 1.0
    )
    ok = at is True and above is False
    check(4, ok, f"subcharacteristic condition at F=4: {at}; at F=4+1e-6: {above}")


def test_criterion_05_sign_relation(
    check,
    sv20_model, sv20_wave, sv20_system, sv11_model, sv11_wave, sv11_system, jx_model, jx_wave, jx_system
):
    rows = []
    ok = True
    for name, model, wave, system in (
        ("steep", sv20_model, sv20_wave, sv20_system),
        ("smooth", sv11_model, sv11_wave, sv11_system),
        ("jin-xin", jx_model, jx_wave, jx_system),
    ):
        s_d = evans_derivative_sign_at_zero(system)
        dc = separation_speed_derivative(model, wave)
        s_dc = 1 if dc > 0 else -1
        rows.append(f"{name}: sgn D'(0)={s_d:+d}, sgn dc_d={s_dc:+d}")
        ok = ok and (s_d == -s_dc)
    check(5, ok, "; ".join(rows))


def test_criterion_06_convergence_table(check, sv20_system):
    table = hf_convergence_study(sv20_system, [130.0, 308.0, 1020.0, 8192.0])
    reference = [0.5484, 0.4230, 0.2740, 0.1112]
    errors = [rel for _, rel in table]
    ok = all(abs(e - r) <= 0.1 for e, r in zip(errors, reference)) and all(
        errors[i + 1] <= errors[i] for i in range(len(errors) - 1)
    )
    check(
        6,
        ok,
        "fit errors " + ", ".join(f"{R:.0f}:{e:.4f}" for (R, _), e in zip(table, errors)),
    )


def test_criterion_07_hill_oracle(check, sv20_model, sv20_wave, sv20_profile):
    eq = sv20_profile.endstate
    X, N = 7.0, 10
    ext = constant_extension(sv20_model, sv20_wave, eq.tau0, X, n=256)
    xi = 0.37 / X
    ev = np.array(hill_spectrum(ext, [xi], N=N)[0].eigenvalues)
    ks = xi + 2.0 * np.pi * np.arange(-N, N + 1) / X
    oracle = np.array(
        [r for k in ks for r in dispersion_roots(sv20_model, sv20_wave, eq, float(k)).roots]
    )
    worst = max(
        max(float(np.min(np.abs(oracle - e))) for e in ev),
        max(float(np.min(np.abs(ev - o))) for o in oracle),
    )
    check(7, worst <= 1e-6, f"Hill vs dispersion-relation oracle: worst mismatch {worst:.2e}")


def test_criterion_08_dynamic_spectrum_stability(check, sv20_profile):
    ext = periodic_extension(sv20_profile)
    xi_list = np.linspace(-np.pi / ext.X, np.pi / ext.X, 64, endpoint=False)
    samples = hill_spectrum(ext, xi_list, N=32)
    max_re = dynamic_spectrum_max_real(samples, exclude_origin=1e-2)
    check(
        8,
        max_re <= 1e-2,
        f"dynamic spectrum (N=32, 64 Bloch points): max Re = {max_re:.3e} away from origin",
    )


def test_criterion_09_metastability(check, sv20_profile):
    _, diag = run_experiment(sv20_profile, T=15.0)
    ratio = float(np.max(diag.translate_distance)) / sv20_profile.amplitude
    ok = diag.fitted_growth_rate > 0.0 and ratio <= 0.05
    check(
        9,
        ok,
        f"wake growth rate {diag.fitted_growth_rate:+.3f}, translate/amplitude {ratio:.4f}",
    )


def test_criterion_10_invariant_suite(
    check,
    sv20_profile, sv20_system, sv11_system, jx_model, jx_profile, jx_system
):
    details = []
    # Evans value vanishes at the origin (normalized by a nearby value)
    origin = max(
        abs(evans_eval(s, 0.0j).reduced) / abs(evans_eval(s, 0.05 + 0.0j).reduced)
        for s in (sv20_system, sv11_system, jx_system)
    )
    details.append(f"|D(0)| ratio {origin:.1e}")
    # conjugate symmetry
    lam = 0.3 + 0.4j
    conj_err = max(
        abs(evans_eval(s, lam).reduced - evans_eval(s, lam.conjugate()).reduced.conjugate())
        for s in (sv20_system, jx_system)
    )
    details.append(f"conj sym {conj_err:.1e}")
    # domain-doubling robustness
    wide = EvansSystem(
        solve_homoclinic(jx_profile.model, jx_profile.wave, {"L": 2.0 * jx_profile.L})
    )
    dbl = abs(evans_eval(jx_system, 0.3 + 0.4j).reduced - evans_eval(wide, 0.3 + 0.4j).reduced)
    details.append(f"L-doubling {dbl:.1e}")
    # equilibrium fixed point of the implicit step
    eq = sv20_profile.endstate
    state = EvolutionState(
        t=0.0, dx=0.05, x0=0.0, tau=np.full(400, eq.tau0), u=np.full(400, eq.u0),
        frame_speed=sv20_profile.wave.c,
    )
    stepped = cn_step(state, 0.01, sv20_profile.model)
    fixed = max(np.max(np.abs(stepped.tau - eq.tau0)), np.max(np.abs(stepped.u - eq.u0)))
    details.append(f"CN fixed point {fixed:.1e}")
    # closed-form quadrature vs shooting
    quad = jinxin_quadrature(jx_model, 2.0, -0.5)
    spline = CubicSpline(quad.grid, quad.tau)
    inside = (jx_profile.grid >= quad.grid[0]) & (jx_profile.grid <= quad.grid[-1])
    interp = np.where(
        inside,
        spline(np.clip(jx_profile.grid, quad.grid[0], quad.grid[-1])),
        quad.endstate.tau0,
    )
    quad_err = float(np.max(np.abs(interp - jx_profile.tau)))
    details.append(f"quadrature vs shooting {quad_err:.1e}")
    ok = (
        origin <= 1e-6
        and conj_err <= 1e-8
        and dbl <= 1e-5
        and fixed <= 1e-12
        and quad_err <= 1e-5
    )
    check(10, ok, "; ".join(details))
