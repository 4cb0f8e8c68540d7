"""High-frequency exclusion bounds and asymptotic convergence study.

Away from a disk |lambda| <= radius there are no unstable Evans roots; the
radius comes from block-norm estimates of the frequency-rescaled system.
The blocks (Theta) are closed-form fields along the profile; the
coefficients a0..a3 combine their l2 operator norms; the radius is the
fourth power of the unique positive root of an explicit degree-8
polynomial, with quartic and quadratic relaxations that can only enlarge
the bound.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .evans import EvansSystem, evans_eval
from .model import ST_VENANT
from .profile import ProfileSolution

_COEFF_NAMES = ("a0", "a_half", "a1", "a_3half", "a2", "a_5quarter", "a3")


@dataclass(frozen=True)
class ThetaBlocks:
    """Frequency-expansion blocks along the profile grid.

    pp-blocks are (n,2,2); pm are (n,2); mp are (n,2); mm are (n,).
    theta, mu, theta_tilde are the auxiliary scalar fields.
    """

    x: np.ndarray
    pp0: np.ndarray
    pp1: np.ndarray
    pp2: np.ndarray
    pp3: np.ndarray
    pm0: np.ndarray
    pm1: np.ndarray
    pm2: np.ndarray
    pm3: np.ndarray
    mp0: np.ndarray
    mp1: np.ndarray
    mp2: np.ndarray
    mm0: np.ndarray
    mm1: np.ndarray
    mm2: np.ndarray
    theta: np.ndarray
    mu: np.ndarray
    theta_tilde: np.ndarray


@dataclass(frozen=True)
class HfCoefficients:
    a0: float
    a_half: float
    a1: float
    a_3half: float
    a2: float
    a_5quarter: float
    a3: float

    def as_tuple(self):
        return (self.a0, self.a_half, self.a1, self.a_3half, self.a2, self.a_5quarter, self.a3)


@dataclass(frozen=True)
class HfBound:
    R: float
    radius: float
    relaxed_quartic: float
    relaxed_quadratic: float


def theta_blocks(profile: ProfileSolution) -> ThetaBlocks:
    """Closed-form frequency-expansion blocks at every grid point."""
    model = profile.model
    if model.kind != ST_VENANT:
        raise ValidationError("high-frequency blocks are defined for the St. Venant model")
    if np.any(profile.tau <= 0.0):
        raise ValidationError("profile volume must be positive everywhere")
    nu, r, s = model.nu, model.r, model.s
    c, q = profile.wave.c, profile.wave.q
    t = profile.tau
    tp = profile.dtau
    al = profile.alpha
    u = q - c * t
    n = len(t)

    # recurring combinations
    fric = t ** (s + 2.0) * u**r  # tau^{s+2} (q - c tau)^r
    fric_u = t ** (s + 2.0) * u ** (r - 1.0)  # tau^{s+2} (q - c tau)^{r-1}
    sq = math.sqrt(nu)
    A = al * t**3 / nu**1.5  # alpha tau^3 / nu^{3/2}
    cA2 = c * al * t**3 / (2.0 * nu**2)  # c alpha tau^3 / (2 nu^2)

    pp0 = np.empty((n, 2, 2))
    pp0[:, 0, 0] = al * t**2 / (c * nu)
    pp0[:, 0, 1] = -(t**2) / nu
    pp0[:, 1, 0] = -al * t**2 / (2.0 * nu)
    pp0[:, 1, 1] = tp / t - c * t**2 / (2.0 * nu)

    pp1 = np.zeros((n, 2, 2))
    pp1[:, 0, 1] = -2.0 * tp / sq + (t**3 / nu**1.5) * (al / c + c)
    pp1[:, 1, 0] = (t / (2.0 * sq)) * ((s + 1.0) * t**s * u**r + c * al * t**2 / nu)
    pp1[:, 1, 1] = r * fric_u / (2.0 * sq) + A / 2.0

    pp2 = np.zeros((n, 2, 2))
    pp2[:, 0, 0] = -(s + 1.0) * fric / nu - 2.0 * cA2
    pp2[:, 0, 1] = -r * t * fric_u / nu
    pp2[:, 1, 1] = (s + 1.0) * fric / (2.0 * nu) + cA2

    pp3 = np.zeros((n, 2, 2))
    pp3[:, 0, 1] = -(s + 1.0) * t * fric / nu**1.5 - c * al * t**4 / nu**2.5

    pm0 = np.empty((n, 2))
    pm0[:, 0] = t**2 / nu
    pm0[:, 1] = tp / (2.0 * t) - c * t**2 / (2.0 * nu)

    pm1 = np.empty((n, 2))
    pm1[:, 0] = -2.0 * tp / sq + (t**3 / nu**1.5) * (al / c + c)
    pm1[:, 1] = -r * fric_u / (2.0 * sq) - A / 2.0

    pm2 = np.empty((n, 2))
    pm2[:, 0] = r * t * fric_u / nu
    pm2[:, 1] = (s + 1.0) * fric / (2.0 * nu) + cA2

    pm3 = np.zeros((n, 2))
    pm3[:, 0] = -(s + 1.0) * t * fric / nu**1.5 - c * al * t**4 / nu**2.5

    mp0 = np.empty((n, 2))
    mp0[:, 0] = al * t**2 / (2.0 * nu)
    mp0[:, 1] = tp / t - c * t**2 / (2.0 * nu)

    mp1 = np.empty((n, 2))
    mp1[:, 0] = (t / (2.0 * sq)) * ((s + 1.0) * t**s * u**r + c * al * t**2 / nu)
    mp1[:, 1] = r * fric_u / (2.0 * sq) + A / 2.0

    mp2 = np.zeros((n, 2))
    mp2[:, 1] = (s + 1.0) * fric / (2.0 * nu) + cA2

    mm0 = tp / t - c * t**2 / (2.0 * nu)
    mm1 = -(s + 1.0) * fric / (2.0 * nu) + cA2
    mm2 = (s + 1.0) * fric / (2.0 * nu) + cA2

    return ThetaBlocks(
        x=profile.grid,
        pp0=pp0, pp1=pp1, pp2=pp2, pp3=pp3,
        pm0=pm0, pm1=pm1, pm2=pm2, pm3=pm3,
        mp0=mp0, mp1=mp1, mp2=mp2,
        mm0=np.asarray(mm0), mm1=np.asarray(mm1), mm2=np.asarray(mm2),
        theta=-al / nu, mu=1.0 / (t * sq), theta_tilde=t / sq,
    )


def _spectral_norm_2x2(M: np.ndarray) -> np.ndarray:
    """Largest singular value of each 2x2 block in an (n,2,2) stack."""
    # singular values from eigenvalues of M^T M (closed form)
    a = M[:, 0, 0] ** 2 + M[:, 1, 0] ** 2
    b = M[:, 0, 0] * M[:, 0, 1] + M[:, 1, 0] * M[:, 1, 1]
    d = M[:, 0, 1] ** 2 + M[:, 1, 1] ** 2
    tr = a + d
    disc = np.sqrt(np.maximum((a - d) ** 2 + 4.0 * b * b, 0.0))
    return np.sqrt(np.maximum(0.5 * (tr + disc), 0.0))


def _vec_norm(V: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(V * V, axis=1))


def _pointwise_coeffs(blocks: ThetaBlocks, profile: ProfileSolution):
    """The seven coefficient fields a_j(x) before any sup over x."""
    nu = profile.model.nu
    pre = math.sqrt(2.0 * nu) / profile.tau
    npp0 = _spectral_norm_2x2(blocks.pp0)
    npp1 = _spectral_norm_2x2(blocks.pp1)
    npp2 = _spectral_norm_2x2(blocks.pp2)
    npp3 = _spectral_norm_2x2(blocks.pp3)
    npm0 = _vec_norm(blocks.pm0)
    npm1 = _vec_norm(blocks.pm1)
    npm2 = _vec_norm(blocks.pm2)
    npm3 = _vec_norm(blocks.pm3)
    nmp0 = _vec_norm(blocks.mp0)
    nmp1 = _vec_norm(blocks.mp1)
    nmp2 = _vec_norm(blocks.mp2)
    nmm0 = np.abs(blocks.mm0)
    nmm1 = np.abs(blocks.mm1)
    nmm2 = np.abs(blocks.mm2)

    a0 = pre * (nmm0 + npp0 + 2.0 * np.sqrt(nmp0 * npm0))
    a_half = pre * 2.0 * np.sqrt(nmp0 * npm1 + nmp1 * npm0)
    a1 = pre * (nmm1 + npp1 + 2.0 * np.sqrt(nmp1 * npm1 + nmp0 * npm2 + nmp2 * npm0))
    a_3half = pre * 2.0 * np.sqrt(nmp0 * npm3 + nmp1 * npm2 + nmp2 * npm1)
    a2 = pre * (nmm2 + npp2 + 2.0 * np.sqrt(nmp2 * npm2 + nmp1 * npm3))
    a_5quarter = pre * 2.0 * np.sqrt(nmp2 * npm3)
    a3 = pre * npp3
    return a0, a_half, a1, a_3half, a2, a_5quarter, a3


def hf_coefficients(blocks: ThetaBlocks, profile: ProfileSolution) -> HfCoefficients:
    """Sup over the grid of the seven coefficient fields."""
    fields = _pointwise_coeffs(blocks, profile)
    return HfCoefficients(*(float(np.max(f)) for f in fields))


def _positive_root(coeffs) -> float:
    """Unique positive root of X^8 - a0 X^6 - ... - a3 by bisection."""
    a0, a_half, a1, a_3half, a2, a_5quarter, a3 = coeffs

    def poly(X):
        return (
            X**8 - a0 * X**6 - a_half * X**5 - a1 * X**4
            - a_3half * X**3 - a2 * X**2 - a_5quarter * X - a3
        )

    hi = 1.0 + sum(coeffs)
    lo = 0.0
    if poly(hi) <= 0.0:
        raise NumericalError("root bracket failed for the degree-8 bound polynomial")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12:
            break
        if poly(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _relaxed_bounds(coeffs):
    a0, a_half, a1, a_3half, a2, a_5quarter, a3 = coeffs
    at0 = a0 + a_half / 2.0
    at1 = a_half / 2.0 + a1 + a_3half / 2.0
    at2 = a_3half / 2.0 + a2 + a_5quarter / 2.0
    at3 = a_5quarter / 2.0 + a3

    def quartic(X):
        return X**4 - at0 * X**3 - at1 * X**2 - at2 * X - at3

    hi = 1.0 + at0 + at1 + at2 + at3
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12:
            break
        if quartic(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    y = 0.5 * (lo + hi)  # positive root; radius bound = y^2
    relaxed_quartic = y * y

    b = at0 * at0 + 2.0 * at1 + at2
    c0 = at2 + 2.0 * at3
    relaxed_quadratic = 0.5 * (b + math.sqrt(b * b + 4.0 * c0))
    return relaxed_quartic, relaxed_quadratic


def hf_radius(coeffs: HfCoefficients) -> HfBound:
    """Exclusion radius R^4 from the degree-8 polynomial plus relaxations."""
    tup = coeffs.as_tuple()
    if any(a < 0.0 for a in tup):
        raise ValidationError("coefficients must be nonnegative")
    if all(a == 0.0 for a in tup):
        warnings.warn("all coefficients zero; exclusion radius is 0")
        return HfBound(R=0.0, radius=0.0, relaxed_quartic=0.0, relaxed_quadratic=0.0)
    R = _positive_root(tup)
    quart, quad = _relaxed_bounds(tup)
    return HfBound(R=R, radius=R**4, relaxed_quartic=quart, relaxed_quadratic=quad)


def hf_radius_pointwise(profile: ProfileSolution) -> float:
    """max over x of R(x)^4 with the coefficient fields evaluated pointwise.

    Sharper than solving with sup-coefficients (which mixes suprema attained
    at different x).
    """
    blocks = theta_blocks(profile)
    fields = _pointwise_coeffs(blocks, profile)
    stacked = np.stack(fields, axis=1)
    best = 0.0
    for row in stacked:
        best = max(best, _positive_root(tuple(row)) ** 4)
    return best


def hf_convergence_study(system: EvansSystem, radii, n_arc: int = 64):
    """Fit D ~ c1 exp(c2 sqrt(lambda)) with real c1, c2 on each arc.

    D is first normalized by the constant-coefficient growth
    exp(L (mu2 + mu3 - mu1)) of the limiting matrix, which removes the
    domain-truncation factor and leaves the genuine square-root asymptotics.
    Returns a list of (R, relative_error): the max over arc samples of
    |log(D/fit)|, the log-domain relative misfit.  A failed fit yields
    (R, nan).
    """
    L = system.profile.L
    # theoretical square-root coefficient: integral of the local parabolic
    # rate minus its endstate value (zero for unit-viscosity models)
    if system.model.kind == ST_VENANT:
        c2_pred = float(
            np.trapezoid(system.profile.tau - system.endstate.tau0, system.profile.grid)
        ) / math.sqrt(system.model.nu)
    else:
        c2_pred = 0.0

    def normalized_log(lam):
        ev = evans_eval(system, lam)
        _, rep = system.limiting(lam)
        mu = rep.eigenvalues
        return ev.log_D - L * (mu[1] + mu[2] - mu[0])

    out = []
    for R in radii:
        try:
            thetas = np.linspace(-math.pi / 2.0, math.pi / 2.0, n_arc)
            lams = [R * cmath.exp(1j * th) for th in thetas]
            roots = np.array([cmath.sqrt(lam) for lam in lams])
            # continuous branch of the normalized log D: unwrap each
            # increment against the predicted slow model c2_pred * sqrt
            logs = []
            prev = None
            acc = 0.0 + 0.0j
            for j, lam in enumerate(lams):
                cur = normalized_log(lam)
                if prev is None:
                    acc = cur
                else:
                    pred = c2_pred * (roots[j] - roots[j - 1])
                    d = cur - prev
                    d = complex(d.real, math.remainder(d.imag - pred.imag, 2.0 * math.pi) + pred.imag)
                    acc = acc + d
                logs.append(acc)
                prev = cur
            logs = np.array(logs)
            # least squares log D ~ b0 + c2 sqrt(lambda) with complex
            # intercept b0 (the normalization leaves an arbitrary constant
            # phase) and real slope c2
            Amat = np.zeros((2 * len(logs), 3))
            Amat[: len(logs), 0] = 1.0
            Amat[len(logs):, 2] = 1.0
            Amat[: len(logs), 1] = roots.real
            Amat[len(logs):, 1] = roots.imag
            y = np.concatenate([logs.real, logs.imag])
            coef, *_ = np.linalg.lstsq(Amat, y, rcond=None)
            resid = logs - (complex(coef[0], coef[2]) + coef[1] * roots)
            rel = float(np.max(np.abs(resid)))
            out.append((float(R), rel))
        except (NumericalError, ValidationError):
            out.append((float(R), float("nan")))
    return out


def convergence_table_csv(table) -> str:
    lines = ["radius,relative_error"]
    for R, rel in table:
        lines.append(f"{R:.17g},{rel:.17g}")
    return "\n".join(lines) + "\n"
