"""Traveling-wave profiles: equilibria, homoclinic orbits, Melnikov separation.

The profile ODE is the second-order scalar equation for tau(x) obtained from
the traveling-wave ansatz after eliminating u = q - c*tau.  Homoclinic orbits
to a saddle equilibrium are solitary-wave profiles; they are located by
shooting along the saddle's stable/unstable manifolds and matching at the
section tau' = 0, with the signed mismatch d(c, q) acting as a Melnikov
separation function.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import NumericalError, ValidationError
from .model import (
    JIN_XIN,
    ST_VENANT,
    EquilibriumClass,
    EquilibriumInfo,
    ModelSpec,
    WaveParams,
    classify_equilibrium,
)

TAU_FLOOR = 1e-6


@dataclass(frozen=True)
class ProfileSolution:
    """Discretized homoclinic orbit on a uniform symmetric grid [-L, L].

    tau attains its extremum farthest from the endstate at x = 0; tails decay
    exponentially to the saddle endstate on both sides.
    """

    grid: np.ndarray
    tau: np.ndarray
    dtau: np.ndarray
    ddtau: np.ndarray
    u: np.ndarray
    alpha: np.ndarray
    dalpha: np.ndarray
    endstate: EquilibriumInfo
    wave: WaveParams
    model: ModelSpec
    truncation_error: float

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def L(self) -> float:
        return float(self.grid[-1])

    @property
    def amplitude(self) -> float:
        return float(np.max(np.abs(self.tau - self.endstate.tau0)))


@dataclass(frozen=True)
class SeparationResult:
    value: float
    section_point: tuple
    orientation: str


@dataclass(frozen=True)
class HamiltonianState:
    H: float
    V: float


# -- vector field ----------------------------------------------------------


def profile_vector_field(model: ModelSpec, wave: WaveParams, state):
    """Right-hand side (tau', tau'') of the profile ODE as a first-order system."""
    tau, dtau = state
    if tau <= 0.0:
        raise ValidationError(f"vacuum: tau = {tau} <= 0")
    return dtau, _tau_accel(model, wave, tau, dtau)


def _tau_accel(model: ModelSpec, wave: WaveParams, tau, dtau):
    """tau'' solved from the profile ODE (vectorizes over numpy arrays)."""
    c, q = wave.c, wave.q
    if model.kind == ST_VENANT:
        F, nu = model.F, model.nu
        gstar = 1.0 - tau ** (model.s + 1.0) * (q - c * tau) ** model.r
        return (
            tau**2
            / (c * nu)
            * (gstar + 2.0 * c * nu * tau ** (-3.0) * dtau**2 - (c * c - tau ** (-3.0) / F) * dtau)
        )
    return (tau ** (-model.p) + c * tau - q - (c * c - model.cs**2) * dtau) / c


def _source_at_tau(model: ModelSpec, wave: WaveParams, tau):
    """g*(tau) = source evaluated along u = q - c*tau."""
    return model.source(tau, wave.q - wave.c * tau)


# -- equilibria ------------------------------------------------------------


def find_equilibria(model: ModelSpec, wave: WaveParams, tau_max: float | None = None) -> list[EquilibriumInfo]:
    """All positive roots of g*(tau) with u > 0, classified.

    Roots with nonpositive velocity u = q - c*tau are discarded with a warning.
    """
    c, q = wave.c, wave.q
    lo = 1e-4
    hi = tau_max if tau_max is not None else max(10.0, 4.0 * abs(q / c) if c != 0 else 10.0)
    if c > 0:
        hi = min(hi, q / c * (1.0 - 1e-12))
    if hi <= lo:
        return []
    taus = np.linspace(lo, hi, 4096)
    vals = _source_at_tau(model, wave, taus)
    roots: list[float] = []
    for i in range(len(taus) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(taus[i]))
        elif a * b < 0.0:
            roots.append(brentq(lambda t: _source_at_tau(model, wave, t), taus[i], taus[i + 1], xtol=1e-14, rtol=1e-15))
    if vals[-1] == 0.0:
        roots.append(float(taus[-1]))
    # deduplicate near-coincident roots
    out: list[EquilibriumInfo] = []
    kept: list[float] = []
    for t0 in roots:
        if kept and abs(t0 - kept[-1]) < 1e-10:
            continue
        u0 = q - c * t0
        if u0 <= 0.0:
            warnings.warn(f"discarding equilibrium tau={t0:.6g} with nonpositive velocity u={u0:.6g}")
            continue
        kept.append(t0)
        out.append(classify_equilibrium(model, wave, t0))
    return out


def _pick_saddle(equilibria: list[EquilibriumInfo]) -> EquilibriumInfo:
    saddles = [e for e in equilibria if e.classification is EquilibriumClass.SADDLE_POINT]
    if not saddles:
        raise ValidationError("no saddle equilibrium: wave admits no homoclinic orbit")
    return max(saddles, key=lambda e: e.tau0)


def _saddle_eigen(model: ModelSpec, wave: WaveParams, tau0: float):
    """Eigenvalues (mu_s < 0 < mu_u) of the profile-ODE linearization at the saddle."""
    from .model import _profile_linearization

    g_tau, g_dtau = _profile_linearization(model, wave, tau0)
    disc = g_dtau * g_dtau + 4.0 * g_tau
    if disc <= 0.0:
        raise NumericalError(f"equilibrium tau={tau0} is not a hyperbolic saddle (disc={disc})")
    rt = math.sqrt(disc)
    mu_minus = 0.5 * (g_dtau - rt)
    mu_plus = 0.5 * (g_dtau + rt)
    if not (mu_minus < 0.0 < mu_plus):
        raise NumericalError(f"equilibrium tau={tau0} lacks a stable/unstable pair")
    return mu_minus, mu_plus


# -- manifold shooting and separation --------------------------------------


def _shoot_branch(model, wave, saddle, mu, eps, forward: bool, dip_sign: float, x_max: float = 4000.0):
    """Integrate one saddle-manifold branch to its first tau' = 0 section.

    forward=True follows the unstable manifold (mu > 0) in increasing x;
    forward=False follows the stable manifold (mu < 0) in decreasing x.
    dip_sign = -1 seeds toward smaller tau (downward pulse), +1 upward.
    Returns the solve_ivp solution (dense) and the section time t_sec > 0 in
    integration order.
    """
    tau0 = saddle.tau0
    norm = math.hypot(1.0, mu)
    y0 = np.array([tau0 + dip_sign * eps / norm, dip_sign * eps * mu / norm])

    def rhs(x, y):
        return [y[1], _tau_accel(model, wave, y[0], y[1])]

    # tau' = 0 crossing: for a downward pulse the forward branch crosses from
    # negative to positive; event directions flip with dip_sign and with the
    # integration sense.
    direction = -dip_sign if forward else dip_sign

    def section(x, y):
        return y[1]

    section.terminal = True
    section.direction = direction

    def vacuum(x, y):
        return y[0] - TAU_FLOOR

    vacuum.terminal = True
    vacuum.direction = -1

    def blowup(x, y):
        return y[0] - 100.0 * max(tau0, 1.0)

    blowup.terminal = True
    blowup.direction = 1

    t_end = x_max if forward else -x_max
    sol = solve_ivp(
        rhs, (0.0, t_end), y0, method="DOP853", rtol=1e-12, atol=1e-14,
        dense_output=True, events=(section, vacuum, blowup),
    )
    if len(sol.t_events[1]) or len(sol.t_events[2]):
        return sol, math.nan, "escaped"
    if not len(sol.t_events[0]):
        raise NumericalError(f"manifold branch reached x={t_end} without a tau'=0 section")
    return sol, float(sol.t_events[0][0]), "ok"


def _dip_direction(model, wave, equilibria, saddle) -> float:
    below = any(e.tau0 < saddle.tau0 - 1e-12 for e in equilibria)
    return -1.0 if below else 1.0


def separation(model: ModelSpec, wave: WaveParams, eps: float = 1e-8) -> SeparationResult:
    """Signed distance d(c, q) between the unstable and stable manifolds.

    Both branches are followed to their first tau' = 0 section; the section
    normal is oriented by the right-hand rule applied to the orbit tangent
    there, so d = (tau_unstable - tau_stable) * tau''(section).
    """
    equilibria = find_equilibria(model, wave)
    saddle = _pick_saddle(equilibria)
    mu_s, mu_u = _saddle_eigen(model, wave, saddle.tau0)
    dip = _dip_direction(model, wave, equilibria, saddle)
    sol_m, t_m, st_m = _shoot_branch(model, wave, saddle, mu_u, eps, forward=True, dip_sign=dip)
    sol_p, t_p, st_p = _shoot_branch(model, wave, saddle, mu_s, eps, forward=False, dip_sign=dip)
    if st_m == "escaped" or st_p == "escaped":
        # a branch overshoots past any turning point: the manifolds are far
        # apart; report a sentinel with the sign continuation of d so that
        # speed root-finding can still bracket the homoclinic.
        value = (-1.0 if st_m == "escaped" else 1.0) * 1e3
        return SeparationResult(value=value, section_point=(math.nan, 0.0), orientation="escape")
    tau_m = float(sol_m.sol(t_m)[0])
    tau_p = float(sol_p.sol(t_p)[0])
    tau_mid = 0.5 * (tau_m + tau_p)
    accel = _tau_accel(model, wave, tau_mid, 0.0)
    d = (tau_m - tau_p) * accel
    return SeparationResult(
        value=float(d),
        section_point=(tau_mid, 0.0),
        orientation="right-hand rule about the orbit tangent at the section",
    )


def separation_speed_derivative(model: ModelSpec, wave: WaveParams) -> float:
    """d/dc of the separation along the family that preserves the endstate.

    The saddle endstate (tau0, u0) of the given wave is held fixed while the
    speed varies, i.e. q(c) = u0 + c*tau0.  This is the family whose sign
    relation sgn D'(0) = -sgn(d/dc of separation) holds for the Evans
    function; differentiating at fixed q instead can flip the sign because
    the endstate itself then drifts with c.  Central differences with a
    Richardson step-halving check.
    """
    c = wave.c
    saddle = _pick_saddle(find_equilibria(model, wave))
    tau0, u0 = saddle.tau0, saddle.u0
    h = 1e-4 * max(1.0, abs(c))

    def central(hh):
        dp = separation(model, WaveParams(c=c + hh, q=u0 + (c + hh) * tau0)).value
        dm = separation(model, WaveParams(c=c - hh, q=u0 + (c - hh) * tau0)).value
        return (dp - dm) / (2.0 * hh)

    g1 = central(h)
    g2 = central(h / 2.0)
    if abs(g1 - g2) > 0.01 * max(abs(g1), abs(g2), 1e-300):
        raise NumericalError(f"speed-derivative step sizes disagree: {g1} vs {g2}")
    return g2


def find_homoclinic_speed(model: ModelSpec, q_rule, bracket) -> float:
    """Root of c -> d(c, q_rule(c)) over the bracket (homoclinic wave speed)."""
    c_lo, c_hi = bracket

    def d_of_c(c):
        return separation(model, WaveParams(c=c, q=q_rule(c))).value

    d_lo, d_hi = d_of_c(c_lo), d_of_c(c_hi)
    if d_lo == 0.0:
        return c_lo
    if d_hi == 0.0:
        return c_hi
    if d_lo * d_hi > 0.0:
        raise ValidationError(
            f"separation does not change sign over [{c_lo}, {c_hi}]: d={d_lo:.3e}, {d_hi:.3e}"
        )
    return float(brentq(d_of_c, c_lo, c_hi, xtol=1e-12, rtol=1e-14))


# -- homoclinic profile construction ---------------------------------------


def _alpha_fields(model: ModelSpec, wave: WaveParams, tau, dtau, ddtau):
    """Linearized pressure-gradient coefficient alpha(x) and its derivative."""
    if model.kind == ST_VENANT:
        F, nu, c = model.F, model.nu, wave.c
        alpha = tau ** (-3.0) * (1.0 / F + 2.0 * c * nu * dtau)
        dalpha = -3.0 * tau ** (-4.0) * dtau * (1.0 / F + 2.0 * c * nu * dtau) + 2.0 * tau ** (-3.0) * c * nu * ddtau
        return alpha, dalpha
    alpha = np.full_like(np.asarray(tau, dtype=float), model.cs**2)
    return alpha, np.zeros_like(alpha)


def _fd_residual(model, wave, x, tau):
    """Max-norm profile-ODE residual via 6th-order finite differences on tau alone."""
    dx = x[1] - x[0]
    c1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / (60.0 * dx)
    c2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / (180.0 * dx * dx)
    d1 = np.convolve(tau, c1[::-1], mode="valid")
    d2 = np.convolve(tau, c2[::-1], mode="valid")
    ti = tau[3:-3]
    return float(np.max(np.abs(d2 - _tau_accel(model, wave, ti, d1))))


def solve_homoclinic(model: ModelSpec, wave: WaveParams, opts: dict | None = None) -> ProfileSolution:
    """Homoclinic profile by shooting from the saddle's invariant manifolds.

    The supplied speed is polished (at fixed q) until the two manifold
    branches match at the tau' = 0 section to near machine precision, so the
    stitched profile satisfies the ODE residual bound; the returned wave
    carries the polished speed.
    """
    opts = dict(opts or {})
    eps = opts.get("eps", 1e-8)
    match_tol = opts.get("match_tol", 1e-3)
    residual_tol = opts.get("residual_tol", 1e-7)
    c, q = wave.c, wave.q
    wave.check(model)

    d0 = separation(model, wave, eps=eps).value
    if abs(d0) > 1e-10:
        if abs(d0) > match_tol:
            raise NumericalError(f"not homoclinic at (c={c}, q={q}): separation d={d0:.6e}")
        delta = 0.02 * max(1.0, abs(c))
        try:
            c = find_homoclinic_speed(model, lambda cc: q, (c - delta, c + delta))
        except ValidationError as exc:
            raise NumericalError(f"not homoclinic at (c={c}, q={q}): separation d={d0:.6e}") from exc
    wave = WaveParams(c=c, q=q)

    equilibria = find_equilibria(model, wave)
    saddle = _pick_saddle(equilibria)
    mu_s, mu_u = _saddle_eigen(model, wave, saddle.tau0)
    dip = _dip_direction(model, wave, equilibria, saddle)
    sol_m, t_m, st_m = _shoot_branch(model, wave, saddle, mu_u, eps, forward=True, dip_sign=dip)
    sol_p, t_p, st_p = _shoot_branch(model, wave, saddle, mu_s, eps, forward=False, dip_sign=dip)
    if st_m != "ok" or st_p != "ok":
        raise NumericalError(f"manifold branch escaped at polished speed c={c}")
    # branch extents: minus branch covers x in [-t_m, 0], plus branch [0, -t_p]
    X_left, X_right = t_m, -t_p
    mu_max = max(abs(mu_s), abs(mu_u))
    dx = opts.get("dx", min(0.02, 0.1 / mu_max))
    L_req = opts.get("L", max(X_left, X_right))

    tau0 = saddle.tau0
    for _ in range(8):
        n_half = int(math.ceil(L_req / dx))
        x = (np.arange(2 * n_half + 1) - n_half) * dx
        tau = np.empty_like(x)
        dtau = np.empty_like(x)
        left = x < -X_left
        right = x > X_right
        core_l = (~left) & (x <= 0.0)
        core_r = (~right) & (x > 0.0)
        ym = sol_m.sol(x[core_l] + X_left)
        tau[core_l], dtau[core_l] = ym[0], ym[1]
        yp = sol_p.sol(x[core_r] - X_right)
        tau[core_r], dtau[core_r] = yp[0], yp[1]
        # exponential tails continuing the linearized manifolds
        A_l = sol_m.sol(0.0)[0] - tau0
        tau[left] = tau0 + A_l * np.exp(mu_u * (x[left] + X_left))
        dtau[left] = mu_u * A_l * np.exp(mu_u * (x[left] + X_left))
        A_r = sol_p.sol(0.0)[0] - tau0
        tau[right] = tau0 + A_r * np.exp(mu_s * (x[right] - X_right))
        dtau[right] = mu_s * A_r * np.exp(mu_s * (x[right] - X_right))
        resid = _fd_residual(model, wave, x, tau)
        if resid <= residual_tol:
            break
        dx /= 2.0
    else:
        raise NumericalError(f"profile residual {resid:.3e} did not reach {residual_tol}")

    if np.any(tau <= 0.0):
        raise NumericalError("profile reached vacuum (tau <= 0)")
    u = q - c * tau
    if np.any(u <= 0.0):
        raise NumericalError("anomalous profile with nonpositive velocity discarded")
    ddtau = _tau_accel(model, wave, tau, dtau)
    alpha, dalpha = _alpha_fields(model, wave, tau, dtau, ddtau)
    trunc = float(max(abs(tau[0] - tau0), abs(tau[-1] - tau0)))
    return ProfileSolution(
        grid=x, tau=tau, dtau=dtau, ddtau=ddtau, u=u, alpha=alpha, dalpha=dalpha,
        endstate=saddle, wave=wave, model=model, truncation_error=trunc,
    )


# -- Jin-Xin Hamiltonian structure -----------------------------------------


def _antiderivative_f(model: ModelSpec, tau):
    """F(tau) = integral of f(tau) = -tau**(-p), vanishing at 0 (p < 1) or 1."""
    p = model.p
    if abs(p - 1.0) < 1e-14:
        return -np.log(tau)
    return -(tau ** (1.0 - p)) / (1.0 - p)


def hamiltonian(model: ModelSpec, wave: WaveParams, tau, dtau) -> HamiltonianState:
    """ODE energy H = (c/2) tau'^2 + V(tau) of the Jin-Xin profile equation."""
    if model.kind != JIN_XIN:
        raise ValidationError("Hamiltonian structure is specific to the Jin-Xin model")
    c, q = wave.c, wave.q
    V = _antiderivative_f(model, tau) - 0.5 * c * tau**2 + q * tau
    return HamiltonianState(H=float(0.5 * c * dtau**2 + V), V=float(V))


def _potential(model: ModelSpec, wave: WaveParams, tau):
    return _antiderivative_f(model, tau) - 0.5 * wave.c * tau**2 + wave.q * tau


def jinxin_quadrature(model: ModelSpec, q: float, H: float, n: int = 4001) -> ProfileSolution:
    """Jin-Xin homoclinic profile via the Hamiltonian quadrature.

    The orbit lives on the level set (c/2) tau'^2 + V(tau) = H at c = cs; it
    leaves the saddle (V'' < 0 there, V = H), reaches the turning point where
    V(tau) = H, and returns by reflection.  Independent oracle for the generic
    shooting construction.
    """
    if model.kind != JIN_XIN:
        raise ValidationError("quadrature applies to the Jin-Xin model only")
    c = model.cs
    wave = WaveParams(c=c, q=q)
    equilibria = find_equilibria(model, wave)
    saddle = _pick_saddle(equilibria)
    tau_sad = saddle.tau0
    H_sad = float(_potential(model, wave, tau_sad))
    if abs(H_sad - H) > 1e-8 * max(1.0, abs(H)):
        raise ValidationError(f"H={H} does not match the saddle level V({tau_sad:.6g})={H_sad:.10g}")
    centers = [e.tau0 for e in equilibria if e.classification is not EquilibriumClass.SADDLE_POINT and e.tau0 < tau_sad]
    if not centers:
        raise ValidationError("no enclosed equilibrium below the saddle")
    tau_c = max(centers)

    def gap(t):
        return float(H - _potential(model, wave, t))

    lo = 1e-8
    if gap(lo) >= 0.0:
        raise NumericalError("no turning point: V(tau) stays below H near vacuum")
    tau_turn = float(brentq(gap, lo, tau_c, xtol=1e-15, rtol=1e-15))

    # right half-orbit: integrate the quadrature tau' = sqrt((2/c)(H - V(tau)))
    # from a quartic series start at the turning point; stop 1e-5 short of the
    # saddle (where H - V is still far above rounding level) and continue with
    # the linearized saddle tail.
    eps = 1e-5
    mu_s, mu_u = _saddle_eigen(model, wave, tau_sad)

    def dV(t):
        return -(t ** (-model.p)) - c * t + q

    def ddV(t):
        return model.p * t ** (-model.p - 1.0) - c

    a2 = -dV(tau_turn) / c  # tau'' at the turn (> 0 for a downward pulse)
    a4 = -ddV(tau_turn) * a2 / c
    x0 = 1e-3
    tau_start = tau_turn + 0.5 * a2 * x0**2 + a4 * x0**4 / 24.0

    def rhs(x, y):
        hv = max(H - float(_potential(model, wave, y[0])), 0.0)
        return [math.sqrt(2.0 / c * hv)]

    def near_saddle(x, y):
        return y[0] - (tau_sad - eps)

    near_saddle.terminal = True
    near_saddle.direction = 1
    sol = solve_ivp(rhs, (x0, 1e4), [tau_start], method="DOP853", rtol=1e-12,
                    atol=1e-14, dense_output=True, events=(near_saddle,))
    if not len(sol.t_events[0]):
        raise NumericalError("quadrature orbit failed to approach the saddle")
    X = float(sol.t_events[0][0])

    L_total = X + math.log(eps / 1e-9) / mu_u
    dx = min(0.02, 2.0 * L_total / (n - 1))
    n_half = int(math.ceil(L_total / dx))
    xg = (np.arange(2 * n_half + 1) - n_half) * dx
    ax = np.abs(xg)
    tau = np.empty_like(xg)
    near = ax <= x0
    tau[near] = tau_turn + 0.5 * a2 * ax[near] ** 2 + a4 * ax[near] ** 4 / 24.0
    core = (~near) & (ax <= X)
    tau[core] = sol.sol(ax[core])[0]
    far = ax > X
    tau[far] = tau_sad - eps * np.exp(-mu_u * (ax[far] - X))
    hvg = np.maximum(H - _potential(model, wave, tau), 0.0)
    dtau = np.sign(xg) * np.sqrt(2.0 / c * hvg)
    dtau[far] = np.sign(xg[far]) * mu_u * eps * np.exp(-mu_u * (ax[far] - X))
    ddtau = _tau_accel(model, wave, tau, dtau)
    u = q - c * tau
    alpha, dalpha = _alpha_fields(model, wave, tau, dtau, ddtau)
    trunc = float(abs(tau[-1] - tau_sad))
    return ProfileSolution(
        grid=xg, tau=tau, dtau=dtau, ddtau=ddtau, u=u, alpha=alpha, dalpha=dalpha,
        endstate=saddle, wave=wave, model=model, truncation_error=trunc,
    )


def integrate_orbit(model: ModelSpec, wave: WaveParams, state0, x_span, n: int = 1001):
    """Integrate the profile ODE from state0 over x_span; returns (x, tau, dtau)."""

    def rhs(x, y):
        return [y[1], _tau_accel(model, wave, y[0], y[1])]

    x = np.linspace(x_span[0], x_span[1], n)
    sol = solve_ivp(rhs, x_span, list(state0), method="DOP853", rtol=1e-12, atol=1e-14, t_eval=x)
    if not sol.success:
        raise NumericalError(f"orbit integration failed: {sol.message}")
    return x, sol.y[0], sol.y[1]


def hamiltonian_decay_check(model: ModelSpec, c: float, segment) -> float:
    """Max defect of H' = -(c^2 - cs^2) tau'^2 along an orbit segment (x, tau, dtau)."""
    if model.kind != JIN_XIN:
        raise ValidationError("Hamiltonian decay applies to the Jin-Xin model only")
    x, tau, dtau = (np.asarray(a, dtype=float) for a in segment)
    wave = WaveParams(c=c, q=0.0)
    V = _potential(model, wave, tau)
    H = 0.5 * c * dtau**2 + V
    dH = np.gradient(H, x)
    defect = dH + (c * c - model.cs**2) * dtau**2
    return float(np.max(np.abs(defect[2:-2])))


# -- persistence -----------------------------------------------------------


def profile_to_json(profile: ProfileSolution) -> str:
    def arr(a):
        return [float(f"{v:.17g}") for v in a]

    doc = {
        "model": profile.model.to_json_dict(),
        "wave": profile.wave.to_json_dict(),
        "L": profile.L,
        "truncation_error": profile.truncation_error,
        "x": arr(profile.grid),
        "tau": arr(profile.tau),
        "dtau": arr(profile.dtau),
        "u": arr(profile.u),
    }
    return json.dumps(doc)


def profile_from_json(text: str) -> ProfileSolution:
    doc = json.loads(text)
    model = ModelSpec.from_json_dict(doc["model"])
    wave = WaveParams.from_json_dict(doc["wave"])
    x = np.asarray(doc["x"], dtype=float)
    tau = np.asarray(doc["tau"], dtype=float)
    dtau = np.asarray(doc["dtau"], dtype=float)
    ddtau = _tau_accel(model, wave, tau, dtau)
    u = np.asarray(doc["u"], dtype=float)
    alpha, dalpha = _alpha_fields(model, wave, tau, dtau, ddtau)
    equilibria = find_equilibria(model, wave)
    saddle = _pick_saddle(equilibria)
    return ProfileSolution(
        grid=x, tau=tau, dtau=dtau, ddtau=ddtau, u=u, alpha=alpha, dalpha=dalpha,
        endstate=saddle, wave=wave, model=model,
        truncation_error=float(doc["truncation_error"]),
    )
