"""Evans function: splitting, symmetry, origin behavior, analytic continuation."""

import numpy as np
import pytest

from rollwave import (
    EvansSystem,
    StabilityIndex,
    ValidationError,
    evans_derivative_sign_at_zero,
    evans_eval,
    evans_real,
    kato_basis,
    limiting_matrix,
    solve_homoclinic,
    stability_index,
)
from rollwave.evans import SplittingStatus, evaluations_to_csv


class TestSplitting:
    def test_consistent_splitting_off_axis(self, sv20_system):
        _, rep = sv20_system.limiting(1.0 + 0.0j)
        assert rep.status is SplittingStatus.CONSISTENT
        assert rep.dims == (2, 1)
        assert rep.gap > 0.0
        res = sorted(rep.eigenvalues, key=lambda z: z.real)
        assert res[0].real < 0.0 < res[1].real

    def test_limiting_matrix_matches_interior_matrix_at_infinity(self, sv20_system):
        lam = 0.5 + 0.3j
        A0, _ = sv20_system.limiting(lam)
        A_edge = sv20_system.matrix_at(sv20_system.profile.L, lam)
        assert np.max(np.abs(A0 - A_edge)) < 1e-5


class TestEvansValues:
    def test_zero_at_origin_all_waves(self, sv20_system, sv11_system, jx_system):
        for system in (sv20_system, sv11_system, jx_system):
            v0 = abs(evans_eval(system, 0.0j).reduced)
            vref = abs(evans_eval(system, 0.05 + 0.0j).reduced)
            assert v0 <= 1e-6 * vref

    def test_real_on_real_axis(self, sv20_system, jx_system):
        for system in (sv20_system, jx_system):
            for lam in (0.05, 0.3, 1.0):
                ev = evans_eval(system, complex(lam))
                assert abs(ev.D.imag) <= 1e-8 * max(abs(ev.D.real), 1.0)

    def test_conjugate_symmetry(self, sv20_system, jx_system):
        for system in (sv20_system, jx_system):
            for lam in (0.3 + 0.4j, 0.05 + 1.0j):
                a = evans_eval(system, lam).reduced
                b = evans_eval(system, lam.conjugate()).reduced
                assert abs(a - b.conjugate()) <= 1e-8 * max(abs(a), 1.0)

    def test_domain_doubling_invariance(self, sv20_profile, jx_profile):
        for profile in (sv20_profile, jx_profile):
            base = EvansSystem(profile)
            wide = EvansSystem(
                solve_homoclinic(profile.model, profile.wave, {"L": 2.0 * profile.L})
            )
            for lam in (0.2 + 0.0j, 0.3 + 0.4j):
                d1 = evans_eval(base, lam).reduced
                d2 = evans_eval(wide, lam).reduced
                assert abs(d1 - d2) <= 1e-5 * max(abs(d1), 1.0)

    def test_csv_export(self, jx_system):
        evs = [evans_eval(jx_system, 0.2 + 0.1j)]
        text = evaluations_to_csv(evs)
        header, row = text.strip().split("\n")
        assert header == "re_lambda,im_lambda,re_D,im_D,log_radius"
        fields = [float(v) for v in row.split(",")]
        assert len(fields) == 5
        assert fields[0] == pytest.approx(0.2)
        assert fields[1] == pytest.approx(0.1)


class TestOriginDerivativeAndIndex:
    def test_derivative_signs(self, sv20_system, sv11_system, jx_system):
        assert evans_derivative_sign_at_zero(sv20_system) == 1
        assert evans_derivative_sign_at_zero(sv11_system) == -1
        assert evans_derivative_sign_at_zero(jx_system) == -1

    def test_stability_index_parities(self, sv20_system, sv11_system, jx_system):
        assert stability_index(sv20_system) is StabilityIndex.EVEN_UNSTABLE_COUNT
        assert stability_index(sv11_system) is StabilityIndex.ODD_UNSTABLE_COUNT
        assert stability_index(jx_system) is StabilityIndex.ODD_UNSTABLE_COUNT

    def test_positive_at_large_real_lambda(self, sv20_system):
        # sign convention: D -> +1 direction at the high-frequency end
        assert evans_real(sv20_system, 312.0) > 0.0


class TestKatoContinuation:
    def test_monodromy_around_closed_contour(self, jx_profile):
        model, wave, eq = jx_profile.model, jx_profile.wave, jx_profile.endstate
        theta = np.linspace(0.0, 2.0 * np.pi, 201)
        contour = 0.5 + 0.3 * np.exp(1j * theta)
        for side in ("+", "-"):
            frames = kato_basis(model, wave, eq, contour, side)
            P0 = frames[0] @ np.linalg.pinv(frames[0])
            P1 = frames[-1] @ np.linalg.pinv(frames[-1])
            assert np.linalg.norm(P1 - P0, 2) <= 1e-6

    def test_side_validation(self, jx_profile):
        with pytest.raises(ValidationError):
            kato_basis(jx_profile.model, jx_profile.wave, jx_profile.endstate, [1.0 + 0j], "up")

    def test_basis_independence_of_evans_value(self, jx_system):
        lam = 0.4 + 0.2j
        A0, _ = limiting_matrix(jx_system.model, jx_system.wave, jx_system.endstate, lam)
        ref = evans_eval(jx_system, lam).reduced
        # feed explicitly constructed (non-orthonormal) subspace bases
        vals, vecs = np.linalg.eig(A0)
        order = np.argsort(vals.real)
        Vu = vecs[:, order[1:]] @ np.array([[1.0, 1.0], [0.0, 2.0]])
        Vs = 3.0 * vecs[:, order[:1]]
        alt = evans_eval(jx_system, lam, bases=(Vu, Vs)).reduced
        assert abs(alt - ref) <= 1e-8 * max(abs(ref), 1.0)
