"""Model definitions: viscous St. Venant (Lagrangian) and viscous Jin-Xin.

Provides equilibrium relations, characteristic speeds, the subcharacteristic
condition, dispersion relations of the linearization about constant states
(in the co-moving frame), and the Hopf bifurcation conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ValidationError

ST_VENANT = "st_venant"
JIN_XIN = "jin_xin"


class EquilibriumClass(Enum):
    SADDLE_POINT = "SaddlePoint"
    REPELLOR_SPIRAL = "RepellorSpiral"
    REPELLOR_REAL = "RepellorReal"
    ATTRACTOR_SPIRAL = "AttractorSpiral"
    ATTRACTOR_REAL = "AttractorReal"


@dataclass(frozen=True)
class ModelSpec:
    """Which PDE system we study, plus its physical parameters.

    St. Venant (Lagrangian): Froude number F, viscosity nu, friction
    exponents (r, s).  Jin-Xin: sound speed cs and source exponent p,
    with nonlinearity f(tau) = -tau**(-p).
    """

    kind: str
    F: float | None = None
    nu: float | None = None
    r: float | None = None
    s: float | None = None
    cs: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind == ST_VENANT:
            if self.F is None or self.nu is None or self.r is None or self.s is None:
                raise ValidationError("St. Venant model requires F, nu, r, s")
            if self.F <= 0 or self.nu <= 0:
                raise ValidationError("F and nu must be positive")
            if not (1.0 <= self.r <= 2.0):
                raise ValidationError("friction exponent r must lie in [1, 2]")
            if not (0.0 <= self.s <= 2.0):
                raise ValidationError("friction exponent s must lie in [0, 2]")
        elif self.kind == JIN_XIN:
            if self.cs is None or self.p is None:
                raise ValidationError("Jin-Xin model requires cs and p")
            if self.cs <= 0 or self.p <= 0:
                raise ValidationError("cs and p must be positive")
        else:
            raise ValidationError(f"unknown model kind: {self.kind!r}")

    # -- source term g(tau, u) and partial derivatives ---------------------

    def source(self, tau, u):
        if self.kind == ST_VENANT:
            return 1.0 - tau ** (self.s + 1.0) * u**self.r
        return tau ** (-self.p) - u

    def source_tau(self, tau, u):
        if self.kind == ST_VENANT:
            return -(self.s + 1.0) * tau**self.s * u**self.r
        return -self.p * tau ** (-self.p - 1.0)

    def source_u(self, tau, u):
        if self.kind == ST_VENANT:
            return -self.r * tau ** (self.s + 1.0) * u ** (self.r - 1.0)
        return -1.0

    def viscosity_coefficient(self, tau):
        """Coefficient of u_xx in the second equation."""
        if self.kind == ST_VENANT:
            return self.nu * tau ** (-2.0)
        return 1.0

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == ST_VENANT:
            d.update(F=self.F, nu=self.nu, r=self.r, s=self.s)
        else:
            d.update(cs=self.cs, p=self.p)
        return d

    @staticmethod
    def from_json_dict(d: dict) -> "ModelSpec":
        allowed = {"kind", "F", "nu", "r", "s", "cs", "p"}
        unknown = set(d) - allowed
        if unknown:
            raise ValidationError(f"unknown ModelSpec keys: {sorted(unknown)}")
        return ModelSpec(**d)


@dataclass(frozen=True)
class WaveParams:
    """Wave speed c and integration constant q, with u(tau) = q - c*tau."""

    c: float
    q: float

    def to_json_dict(self) -> dict:
        return {"c": self.c, "q": self.q}

    @staticmethod
    def from_json_dict(d: dict) -> "WaveParams":
        unknown = set(d) - {"c", "q"}
        if unknown:
            raise ValidationError(f"unknown WaveParams keys: {sorted(unknown)}")
        return WaveParams(**d)

    def check(self, model: ModelSpec):
        if model.kind == ST_VENANT and self.c == 0.0:
            raise ValidationError("St. Venant admits no nontrivial c=0 waves")


@dataclass(frozen=True)
class EquilibriumInfo:
    tau0: float
    u0: float
    cs: float
    dfstar: float
    classification: EquilibriumClass


@dataclass(frozen=True)
class DispersionSample:
    k: float
    roots: tuple


def _require_positive_tau(tau):
    if tau <= 0.0:
        raise ValidationError(f"tau must be positive, got {tau}")


def equilibrium_velocity(model: ModelSpec, tau: float) -> float:
    """Velocity u*(tau) at which the source term vanishes."""
    _require_positive_tau(tau)
    if model.kind == ST_VENANT:
        return tau ** (-(model.s + 1.0) / model.r)
    return tau ** (-model.p)


def char_speed(model: ModelSpec, tau: float) -> float:
    """Positive hyperbolic characteristic speed at volume tau."""
    _require_positive_tau(tau)
    if model.kind == ST_VENANT:
        return tau ** (-1.5) / math.sqrt(model.F)
    return model.cs


def equilibrium_char(model: ModelSpec, tau: float) -> float:
    """Equilibrium characteristic df*(tau) of the relaxed system."""
    _require_positive_tau(tau)
    if model.kind == ST_VENANT:
        return ((model.s + 1.0) / model.r) * tau ** (-(model.r + model.s + 1.0) / model.r)
    return model.p * tau ** (-model.p - 1.0)


def subcharacteristic_ok(model: ModelSpec, tau: float) -> bool:
    """True iff df*(tau) <= c_s(tau) (stability of the constant state)."""
    return equilibrium_char(model, tau) <= char_speed(model, tau)


def classify_equilibrium(model: ModelSpec, wave: WaveParams, tau0: float) -> EquilibriumInfo:
    """Classify an equilibrium of the traveling-wave ODE at (tau0, 0).

    Saddle iff c*(df* - c) < 0; otherwise repellor when c*(c^2 - cs^2) <= 0
    and attractor when > 0, with spiral/real subtype read off the
    discriminant of the profile-ODE linearization.
    """
    c = wave.c
    cs = char_speed(model, tau0)
    dfstar = equilibrium_char(model, tau0)
    u0 = wave.q - c * tau0

    if c * (dfstar - c) < 0.0:
        cls = EquilibriumClass.SADDLE_POINT
    else:
        # discriminant of [[0,1],[G_tau, G_dtau]] at (tau0, 0)
        g_tau, g_dtau = _profile_linearization(model, wave, tau0)
        spiral = g_dtau * g_dtau + 4.0 * g_tau < 0.0
        if c * (c * c - cs * cs) <= 0.0:
            cls = EquilibriumClass.REPELLOR_SPIRAL if spiral else EquilibriumClass.REPELLOR_REAL
        else:
            cls = EquilibriumClass.ATTRACTOR_SPIRAL if spiral else EquilibriumClass.ATTRACTOR_REAL
    return EquilibriumInfo(tau0=tau0, u0=u0, cs=cs, dfstar=dfstar, classification=cls)


def _profile_linearization(model: ModelSpec, wave: WaveParams, tau0: float):
    """Partials (dG/dtau, dG/dtau') of tau'' = G(tau, tau') at (tau0, 0)."""
    c, q = wave.c, wave.q
    if model.kind == ST_VENANT:
        F, nu = model.F, model.nu
        u0 = q - c * tau0
        # d/dtau of g*(tau) = 1 - tau^{s+1} (q - c tau)^r at the equilibrium
        dgstar = (
            -(model.s + 1.0) * tau0**model.s * u0**model.r
            + c * model.r * tau0 ** (model.s + 1.0) * u0 ** (model.r - 1.0)
        )
        g_tau = dgstar * tau0**2 / (c * nu)
        g_dtau = -(c * c - tau0 ** (-3.0) / F) * tau0**2 / (c * nu)
    else:
        # c tau'' = tau^{-p} + c tau - q - (c^2 - cs^2) tau'
        g_tau = (-model.p * tau0 ** (-model.p - 1.0) + c) / c
        g_dtau = -(c * c - model.cs**2) / c
    return g_tau, g_dtau


def equilibrium_info(model: ModelSpec, wave: WaveParams, tau0: float) -> EquilibriumInfo:
    return classify_equilibrium(model, wave, tau0)


# -- dispersion relation about a constant state (co-moving frame) ----------


def _dispersion_quadratic(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, k: float):
    """Coefficients (b, c0) of lambda^2 + b lambda + c0 = 0."""
    tau0, u0 = eq.tau0, eq.u0
    c = wave.c
    cs = char_speed(model, tau0)
    gt = model.source_tau(tau0, u0)
    gu = model.source_u(tau0, u0)
    visc = model.viscosity_coefficient(tau0)
    ik = 1j * k
    alpha = -c * ik
    beta = -c * ik - gu + k * k * visc
    gamma = -ik
    delta = -cs * cs * ik - gt
    return alpha + beta, alpha * beta - gamma * delta


def dispersion_roots(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, k: float) -> DispersionSample:
    """Both roots of the dispersion polynomial at spatial frequency k.

    Solved in closed form with a stable branch choice to keep residuals at
    rounding level.
    """
    b, c0 = _dispersion_quadratic(model, wave, eq, k)
    disc = np.sqrt(b * b - 4.0 * c0 + 0j)
    # pick the sign that avoids cancellation in -b -/+ disc
    if (b.conjugate() * disc).real >= 0.0:
        big = -(b + disc) / 2.0
    else:
        big = -(b - disc) / 2.0
    if big == 0.0:
        roots = (0.0 + 0.0j, -b)
    else:
        roots = (big, c0 / big)
    return DispersionSample(k=k, roots=roots)


def dispersion_residual(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, k: float, lam) -> float:
    """Relative residual of the dispersion polynomial at (k, lambda)."""
    b, c0 = _dispersion_quadratic(model, wave, eq, k)
    val = lam * lam + b * lam + c0
    scale = max(abs(lam) ** 2, abs(b * lam), abs(c0), 1e-300)
    return abs(val) / scale


def hopf_frequency(model: ModelSpec, eq: EquilibriumInfo) -> float:
    """Limiting frequency k_H of the Hopf bifurcation at c = c_s(tau0)."""
    if model.kind != ST_VENANT:
        raise ValidationError("Hopf frequency is defined for the St. Venant model")
    tau0, u0 = eq.tau0, eq.u0
    cs = char_speed(model, tau0)
    dfs = equilibrium_char(model, tau0)
    if dfs < cs:
        raise ValidationError("no Hopf bifurcation: df*(tau0) < c_s(tau0)")
    return math.sqrt(tau0**2 * model.r / (cs * model.nu * u0) * (dfs - cs))


def hopf_conditions(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, rtol: float = 1e-10) -> bool:
    """True iff c = c_s(tau0) (to rtol) and df*(tau0) > c_s(tau0) strictly."""
    cs = char_speed(model, eq.tau0)
    dfs = equilibrium_char(model, eq.tau0)
    c_matches = abs(wave.c - cs) <= rtol * max(abs(cs), abs(wave.c))
    return bool(c_matches and dfs > cs)


def essential_spectrum_curve(model: ModelSpec, wave: WaveParams, eq: EquilibriumInfo, k_grid):
    """Dispersion samples over k_grid and the max real part over all roots.

    The right envelope of these curves bounds the essential spectrum of the
    wave (common endstate at both infinities).
    """
    k_grid = np.asarray(k_grid, dtype=float)
    if k_grid.size == 0:
        raise ValidationError("k_grid must be nonempty")
    samples = [dispersion_roots(model, wave, eq, float(k)) for k in k_grid]
    max_re = max(max(r.real for r in s.roots) for s in samples)
    return samples, max_re
