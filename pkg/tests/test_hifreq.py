"""High-frequency resolvent bound: block expansion, root bound, convergence."""

import numpy as np
import pytest

from rollwave import (
    ValidationError,
    WaveParams,
    hf_coefficients,
    hf_convergence_study,
    hf_radius,
    theta_blocks,
)
from rollwave.hifreq import convergence_table_csv, hf_radius_pointwise
from rollwave.model import equilibrium_info
from rollwave.profile import ProfileSolution


def _constant_profile(model, tau0: float, c: float, n: int = 101) -> ProfileSolution:
    eq = equilibrium_info(model, WaveParams(c=c, q=0.0), tau0)
    wave = WaveParams(c=c, q=eq.u0 + c * tau0)
    grid = np.linspace(-5.0, 5.0, n)
    tau = np.full(n, tau0)
    zeros = np.zeros(n)
    alpha = np.full(n, tau0 ** (-3.0) / model.F)
    return ProfileSolution(
        grid=grid, tau=tau, dtau=zeros, ddtau=zeros, u=np.full(n, eq.u0),
        alpha=alpha, dalpha=zeros.copy(), endstate=eq, wave=wave, model=model,
        truncation_error=0.0,
    )


class TestThetaBlocks:
    def test_constant_state_oracle(self, sv20_model):
        tau0, c = 1.0, 0.7
        prof = _constant_profile(sv20_model, tau0, c)
        blocks = theta_blocks(prof)
        nu = sv20_model.nu
        # leading diagonal block of the slow-slow corner
        assert np.allclose(blocks.mm0, -c * tau0**2 / (2.0 * nu))
        # leading fast-slow coupling: first component tau^2 / nu, second zero
        assert np.allclose(blocks.pm0[:, 0], tau0**2 / nu)
        assert np.allclose(blocks.pm0[:, 1], -c * tau0**2 / (2.0 * nu))
        # auxiliary fields
        assert np.allclose(blocks.theta_tilde, tau0 / np.sqrt(nu))
        assert np.allclose(blocks.mu, 1.0 / (tau0 * np.sqrt(nu)))

    def test_rejected_for_unit_viscosity_model(self, jx_profile):
        with pytest.raises(ValidationError):
            theta_blocks(jx_profile)


class TestRadius:
    def test_steep_wave_radius(self, sv20_profile):
        coeffs = hf_coefficients(theta_blocks(sv20_profile), sv20_profile)
        bound = hf_radius(coeffs)
        assert bound.radius == pytest.approx(312.668, abs=0.1)
        assert bound.radius == bound.R**4
        # the bound is within ten percent of the reference value 308
        assert abs(bound.radius - 308.0) <= 0.1 * 308.0

    def test_relaxations_are_weaker(self, sv20_profile):
        bound = hf_radius(hf_coefficients(theta_blocks(sv20_profile), sv20_profile))
        assert bound.radius < bound.relaxed_quartic < bound.relaxed_quadratic
        assert bound.relaxed_quartic == pytest.approx(444.31, abs=0.1)
        assert bound.relaxed_quadratic == pytest.approx(537.11, abs=0.1)

    def test_pointwise_radius_below_sup_radius(self, sv20_profile):
        sup = hf_radius(hf_coefficients(theta_blocks(sv20_profile), sv20_profile)).radius
        ptw = hf_radius_pointwise(sv20_profile)
        assert ptw == pytest.approx(305.77, abs=0.1)
        assert ptw <= sup


class TestConvergence:
    def test_fit_error_shrinks_with_radius(self, sv20_system):
        table = hf_convergence_study(sv20_system, [130.0, 308.0])
        (r1, e1), (r2, e2) = table
        assert e1 == pytest.approx(0.5295, abs=5e-3)
        assert e2 == pytest.approx(0.3603, abs=5e-3)
        assert e2 < e1

    def test_csv_format(self):
        text = convergence_table_csv([(130.0, 0.5), (308.0, 0.4)])
        lines = text.strip().split("\n")
        assert lines[0] == "radius,relative_error"
        assert lines[1].startswith("130,")
