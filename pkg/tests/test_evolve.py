"""Semi-implicit time evolution and metastability diagnostics."""

import json

import numpy as np
import pytest

from rollwave import NumericalError, ValidationError, cn_step, run_experiment
from rollwave.evolve import (
    EvolutionState,
    _resample_profile,
    diagnostics_to_json,
    mass_flux_drift,
    snapshots_to_csv,
    translate_distance,
    wake_boundary,
)


def _constant_state(model, tau0, u0, n=400, dx=0.05, frame_speed=0.7):
    return EvolutionState(
        t=0.0, dx=dx, x0=0.0, tau=np.full(n, tau0), u=np.full(n, u0), frame_speed=frame_speed
    )


class TestStep:
    def test_equilibrium_is_fixed_point(self, sv20_model, sv20_profile):
        eq = sv20_profile.endstate
        state = _constant_state(sv20_model, eq.tau0, eq.u0, frame_speed=sv20_profile.wave.c)
        stepped = cn_step(state, 0.01, sv20_model)
        move = max(np.max(np.abs(stepped.tau - eq.tau0)), np.max(np.abs(stepped.u - eq.u0)))
        assert move <= 1e-12
        assert stepped.t == pytest.approx(0.01)

    def test_mass_conservation(self, sv20_model, sv20_profile):
        eq = sv20_profile.endstate
        state = _constant_state(sv20_model, eq.tau0, eq.u0, frame_speed=sv20_profile.wave.c)
        stepped = cn_step(state, 0.01, sv20_model)
        assert abs(mass_flux_drift(sv20_model, state, stepped, 0.01)) <= 1e-12

    def test_vacuum_guard(self, sv20_model):
        state = _constant_state(sv20_model, 1e-7, 1.0)
        with pytest.raises(NumericalError):
            cn_step(state, 0.01, sv20_model)

    def test_unperturbed_wave_is_stationary(self, sv20_model, sv20_profile):
        x, tau, u = _resample_profile(sv20_profile, 0.02, 1.0)
        state = EvolutionState(
            t=0.0, dx=0.02, x0=float(x[0]), tau=tau, u=u, frame_speed=sv20_profile.wave.c
        )
        for _ in range(200):
            state = cn_step(state, 0.01, sv20_model)
        W = wake_boundary(sv20_profile)
        assert translate_distance(sv20_profile, state, W) <= 1e-3


class TestExperiments:
    def test_amplitude_cap(self, sv20_profile):
        with pytest.raises(ValidationError):
            run_experiment(
                sv20_profile,
                perturbation={"shape": "gaussian", "amplitude": 0.2 * sv20_profile.amplitude},
                T=0.1,
            )

    def test_unsupported_shape(self, sv20_profile):
        with pytest.raises(ValidationError):
            run_experiment(sv20_profile, perturbation={"shape": "square"}, T=0.1)

    def test_wake_packet_grows_behind_steep_wave(self, sv20_profile):
        W = wake_boundary(sv20_profile)
        _, diag = run_experiment(
            sv20_profile,
            perturbation={"shape": "gaussian", "center": -W - 10.0, "width": 1.0},
            T=15.0,
        )
        assert diag.fitted_growth_rate > 0.0

    def test_wake_packet_decays_behind_smooth_wave(self, sv11_profile):
        W = wake_boundary(sv11_profile)
        _, diag = run_experiment(
            sv11_profile,
            perturbation={"shape": "gaussian", "center": -W - 15.0, "width": 2.0},
            T=20.0,
            dt=0.02,
            dx=0.05,
            pad=0.5,
        )
        assert diag.fitted_growth_rate < 0.0

    def test_outputs_roundtrip(self, sv20_profile):
        snaps, diag = run_experiment(sv20_profile, T=0.5, snapshot_times=[0.0, 0.25, 0.5])
        text = snapshots_to_csv(snaps)
        assert text.startswith("t,x,tau,u\n")
        payload = json.loads(diagnostics_to_json(diag))
        assert set(payload) == {
            "times",
            "translate_distance",
            "wake_peak",
            "fitted_growth_rate",
            "wake_boundary",
            "boundary_contact_time",
        }
        assert len(payload["times"]) == len(snaps)
