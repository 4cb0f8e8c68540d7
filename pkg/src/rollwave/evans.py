"""Evans function: assembly, endstate splitting, evaluation, stability index.

D(lambda) = det(W1-, W2-, W3+)|_{x=0} / det(V1-, V2-, V3+), where the W's
solve W' = A(x, lambda) W with data on the unstable eigen-extension of the
limiting matrix at -L (two columns) and its stable subspace at +L (one
column).  The ratio is independent of the basis chosen inside each subspace,
so evaluations at distinct lambda are independent of one another.  Values
are kept in log form (unit-modulus part + log-radius) to avoid overflow.
"""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import NumericalError, ValidationError
from .model import ST_VENANT, EquilibriumInfo, ModelSpec, WaveParams
from .profile import ProfileSolution

GAP_TOL = 1e-9


class SplittingStatus(Enum):
    CONSISTENT = "Consistent"
    EXTENDED_ONLY = "ExtendedOnly"
    FAIL = "Fail"


class StabilityIndex(Enum):
    EVEN_UNSTABLE_COUNT = "EvenUnstableCount"
    ODD_UNSTABLE_COUNT = "OddUnstableCount"


@dataclass(frozen=True)
class SplittingReport:
    lam: complex
    eigenvalues: tuple
    status: SplittingStatus
    dims: tuple
    gap: float


@dataclass(frozen=True)
class EvansEvaluation:
    """One Evans evaluation in log form.

    D_report = unit-scale value det ratio times the radial phase; the actual
    Evans value is D_report * exp(log_radius).  log_D carries Re = log|D| and
    a representative of arg D mod 2 pi.
    """

    lam: complex
    D: complex
    log_radius: float
    basis_id: str
    log_gamma: complex = 0.0 + 0.0j

    @property
    def log_D(self) -> complex:
        return cmath.log(self.D) + self.log_radius

    @property
    def reduced(self) -> complex:
        """Determinant part d0 with the radial factor exp(log_gamma) removed.

        log_gamma is a continuous single-valued function of lambda, so d0
        carries the same winding as D around any closed contour while staying
        of order one in modulus and slowly varying in argument.
        """
        return self.D * cmath.exp(-1j * math.remainder(self.log_gamma.imag, 2.0 * math.pi))


def _model_params(model: ModelSpec, wave: WaveParams):
    if model.kind == ST_VENANT:
        return _kernels.ST_VENANT_KIND, np.array(
            [model.F, model.nu, model.r, model.s, wave.c, wave.q], dtype=np.float64
        )
    return _kernels.JIN_XIN_KIND, np.array([model.cs, model.p, wave.c, wave.q, 0.0, 0.0], dtype=np.float64)


class EvansSystem:
    """Evans system bound to a profile; immutable, safe to share."""

    def __init__(self, profile: ProfileSolution, rtol: float = 1e-10, atol: float = 1e-12):
        self.profile = profile
        self.model = profile.model
        self.wave = profile.wave
        self.endstate = profile.endstate
        self.rtol = rtol
        self.atol = atol
        self.kind, self.params = _model_params(self.model, self.wave)
        self._x0 = float(profile.grid[0])
        self._dx = profile.dx
        self._n = len(profile.grid)

    # -- pointwise coefficient matrix (pure-python mirror of the kernel) ----

    def matrix_at(self, x: float, lam: complex) -> np.ndarray:
        tv, dv, _ = _kernels._interp_profile(
            x, self._x0, self._dx, self._n, self.profile.tau, self.profile.dtau, self.profile.ddtau
        )
        ddv = _kernels._tau_accel_k(self.kind, self.params, tv, dv)
        A = np.empty((3, 3), dtype=complex)
        _kernels._fill_A(A, complex(lam), self.kind, self.params, tv, dv, ddv)
        return A

    def limiting(self, lam: complex):
        return limiting_matrix(self.model, self.wave, self.endstate, lam)


def evans_matrix(system: EvansSystem, x: float, lam: complex) -> np.ndarray:
    """Coefficient matrix A(x, lambda) of the first-order Evans system."""
    return system.matrix_at(x, lam)


def limiting_matrix(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, lam: complex):
    """Limiting matrix A0(lambda) at the endstate plus its splitting report."""
    kind, params = _model_params(model, wave)
    A0 = np.empty((3, 3), dtype=complex)
    _kernels._fill_A(A0, complex(lam), kind, params, eq.tau0, 0.0, 0.0)
    vals = np.linalg.eigvals(A0)
    order = np.argsort(vals.real)
    vals = vals[order]
    gap = float(vals[1].real - vals[0].real)
    if vals[0].real < 0.0 < vals[1].real:
        status = SplittingStatus.CONSISTENT
    elif gap > GAP_TOL:
        status = SplittingStatus.EXTENDED_ONLY
    else:
        status = SplittingStatus.FAIL
    report = SplittingReport(lam=complex(lam), eigenvalues=tuple(vals), status=status, dims=(2, 1), gap=gap)
    return A0, report


def _split_bases(A0: np.ndarray):
    """Orthonormal bases (Qm 3x2 unstable-extension, Qp 3x1 stable) of A0."""
    vals, vecs = np.linalg.eig(A0)
    order = np.argsort(vals.real)
    Vs = vecs[:, order[:1]]
    Vu = vecs[:, order[1:]]
    Qm, _ = np.linalg.qr(Vu)
    Qp = Vs / np.linalg.norm(Vs)
    return Qm.astype(np.complex128), Qp.astype(np.complex128)


def evans_eval(system: EvansSystem, lam: complex, bases=None, basis_id: str = "eigen") -> EvansEvaluation:
    """Evaluate D(lambda) by polar-method integration of both manifold frames."""
    lam = complex(lam)
    A0, report = system.limiting(lam)
    if report.status is SplittingStatus.FAIL:
        raise NumericalError(f"splitting failure at lambda={lam}: gap={report.gap:.3e}")
    if bases is None:
        Qm0, Qp0 = _split_bases(A0)
    else:
        Vu, Vs = bases
        Qm0, _ = np.linalg.qr(np.asarray(Vu, dtype=np.complex128).reshape(3, 2))
        Vs = np.asarray(Vs, dtype=np.complex128).reshape(3, 1)
        Qp0 = Vs / np.linalg.norm(Vs)
    L = system.profile.L
    args = (
        lam,
        system.kind,
        system.params,
        system._x0,
        system._dx,
        system._n,
        system.profile.tau,
        system.profile.dtau,
        system.profile.ddtau,
        system.rtol,
        system.atol,
    )
    Qm, loggm, okm = _kernels.integrate_frame(-L, 0.0, Qm0, *args)
    Qp, loggp, okp = _kernels.integrate_frame(L, 0.0, Qp0, *args)
    if not (okm and okp):
        raise NumericalError(f"frame integration did not converge at lambda={lam}")
    num = _kernels.det3(np.ascontiguousarray(np.hstack([Qm, Qp])))
    den = _kernels.det3(np.ascontiguousarray(np.hstack([Qm0, Qp0])))
    if den == 0.0:
        raise NumericalError(f"degenerate initializing basis at lambda={lam}")
    d0 = num / den
    logr = loggm + loggp
    D_report = d0 * cmath.exp(1j * logr.imag)
    return EvansEvaluation(
        lam=lam, D=D_report, log_radius=float(logr.real), basis_id=basis_id, log_gamma=complex(logr)
    )


def evans_real(system: EvansSystem, lam: float, bases=None) -> float:
    """Scaled real Evans value at real lambda (sign-faithful, radius stripped)."""
    ev = evans_eval(system, lam, bases=bases)
    return ev.D.real


# -- Kato analytic basis continuation --------------------------------------


def _projector(A0: np.ndarray, side: str) -> np.ndarray:
    vals, vecs = np.linalg.eig(A0)
    order = np.argsort(vals.real)
    idx = order[:1] if side == "+" else order[1:]
    Vinv = np.linalg.inv(vecs)
    return vecs[:, idx] @ Vinv[idx, :]


def kato_basis(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, contour, side: str):
    """Analytic basis continuation along an ordered lambda contour.

    Transports the initial eigenbasis with the projector rotation
    U = (I - (P1-P0)^2)^{-1/2} (P1 P0 + (I-P1)(I-P0)), which maps ran P0 onto
    ran P1 exactly and agrees with the Kato transport to second order per step.
    """
    if side not in ("+", "-"):
        raise ValidationError("side must be '+' or '-'")
    lams = [complex(z) for z in contour]
    if not lams:
        raise ValidationError("empty contour")
    A0, rep = limiting_matrix(model, wave, eq, lams[0])
    if rep.status is SplittingStatus.FAIL:
        raise NumericalError(f"splitting failure at contour start lambda={lams[0]}")
    P_prev = _projector(A0, side)
    Qm, Qp = _split_bases(A0)
    V = Qp if side == "+" else Qm
    out = [V.copy()]
    eye = np.eye(3, dtype=complex)
    for lam in lams[1:]:
        A0, rep = limiting_matrix(model, wave, eq, lam)
        if rep.status is SplittingStatus.FAIL:
            raise NumericalError(f"splitting failure along contour at lambda={lam}")
        P = _projector(A0, side)
        dP = P - P_prev
        nrm = np.linalg.norm(dP, 2)
        if nrm > 0.1:
            raise NumericalError(f"projector step {nrm:.3f} > 0.1 at lambda={lam}; refine the contour")
        D2 = dP @ dP
        # (I - dP^2)^{-1/2} by series; ||dP|| <= 0.1 so this converges fast
        S = eye + 0.5 * D2 + 0.375 * D2 @ D2
        U = S @ (P @ P_prev + (eye - P) @ (eye - P_prev))
        V = U @ V
        out.append(V.copy())
        P_prev = P
    return out


# -- derivative sign at the origin and stability index ---------------------


def evans_derivative_sign_at_zero(system: EvansSystem, h_list=(1e-3, 1e-4)) -> int:
    """Sign of D'(0) from evaluations at small positive real lambda.

    D(0) = 0 (translation), so sgn D(h) at small h > 0 gives sgn D'(0);
    the sign must agree across the supplied step scales.
    """
    signs = []
    for h in h_list:
        v = evans_real(system, float(h))
        if v == 0.0:
            raise NumericalError(f"Evans value vanished at lambda={h}")
        signs.append(1 if v > 0.0 else -1)
    if len(set(signs)) != 1:
        raise NumericalError(f"inconsistent D'(0) signs across scales {tuple(h_list)}: {signs}")
    return signs[0]


def stability_index(system: EvansSystem, h_list=(1e-3, 1e-4), hf_check_lambda=None) -> StabilityIndex:
    """Parity of unstable Evans roots from sgn D'(0) against sgn D(+inf) = +1."""
    if hf_check_lambda is not None:
        v = evans_real(system, float(hf_check_lambda))
        if v <= 0.0:
            raise NumericalError(f"sgn D({hf_check_lambda}) = {np.sign(v)}, expected +1 at the high-frequency radius")
    s = evans_derivative_sign_at_zero(system, h_list)
    return StabilityIndex.ODD_UNSTABLE_COUNT if s < 0 else StabilityIndex.EVEN_UNSTABLE_COUNT


# -- export ----------------------------------------------------------------


def evaluations_to_csv(evaluations) -> str:
    buf = io.StringIO()
    buf.write("re_lambda,im_lambda,re_D,im_D,log_radius\n")
    for ev in evaluations:
        buf.write(
            f"{ev.lam.real:.17g},{ev.lam.imag:.17g},{ev.D.real:.17g},{ev.D.imag:.17g},{ev.log_radius:.17g}\n"
        )
    return buf.getvalue()
