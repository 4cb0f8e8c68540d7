"""Essential spectrum of constant states and Floquet-Bloch (Hill) spectra.

The essential spectrum of the solitary wave equals that of its endstate
(dispersion curves).  The dynamic spectrum of the periodically extended
profile is computed by a Fourier-Bloch Galerkin method: for each Bloch
parameter xi the linearized operator acts on modes e^{i(xi + 2 pi m / X) x},
with variable coefficients entering through discrete convolutions.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .model import ModelSpec, ST_VENANT, WaveParams, essential_spectrum_curve
from .profile import ProfileSolution


@dataclass(frozen=True)
class PeriodicExtension:
    """One period of coefficient data from a truncated solitary profile."""

    X: float
    grid: np.ndarray
    tau: np.ndarray
    alpha: np.ndarray
    g_tau: np.ndarray
    g_u: np.ndarray
    visc: np.ndarray
    c: float
    paste_tol: float
    source_id: str

    @property
    def seam_jump(self) -> float:
        """Largest coefficient jump between the two ends of the period."""
        return max(
            abs(float(f[0] - f[-1])) for f in (self.tau, self.alpha, self.g_tau, self.g_u, self.visc)
        )


@dataclass(frozen=True)
class BlochSample:
    xi: float
    eigenvalues: tuple
    N: int


def periodic_extension(profile: ProfileSolution, paste_tol: float = 1e-6) -> PeriodicExtension:
    """Truncate the profile where |tau - tau0| <= paste_tol and wrap periodically."""
    if profile.truncation_error > paste_tol:
        raise ValidationError(
            f"profile tails converged to {profile.truncation_error:.2e} > paste_tol {paste_tol:.2e}"
        )
    tau0 = profile.endstate.tau0
    dev = np.abs(profile.tau - tau0)
    # cut where the deviation is well below paste_tol so that the seam jump
    # of every derived coefficient (not just tau) stays within paste_tol
    inside = np.where(dev > 0.1 * paste_tol)[0]
    if inside.size == 0:
        i0, i1 = 0, len(profile.grid) - 1
    else:
        i0 = max(int(inside[0]) - 1, 0)
        i1 = min(int(inside[-1]) + 1, len(profile.grid) - 1)
    # period covers [x_i0, x_i1); the right endpoint is identified with the left
    sl = slice(i0, i1)
    model, wave = profile.model, profile.wave
    tau = profile.tau[sl].copy()
    u = wave.q - wave.c * tau
    # Jin-Xin source/viscosity coefficients are scalar constants; broadcast
    g_tau = np.broadcast_to(np.asarray(model.source_tau(tau, u), dtype=float), tau.shape)
    g_u = np.broadcast_to(np.asarray(model.source_u(tau, u), dtype=float), tau.shape)
    visc = np.broadcast_to(np.asarray(model.viscosity_coefficient(tau), dtype=float), tau.shape)
    X = float((i1 - i0) * profile.dx)
    return PeriodicExtension(
        X=X,
        grid=profile.grid[sl].copy(),
        tau=tau,
        alpha=profile.alpha[sl].copy(),
        g_tau=np.array(g_tau, dtype=float),
        g_u=np.array(g_u, dtype=float),
        visc=np.array(visc, dtype=float),
        c=wave.c,
        paste_tol=paste_tol,
        source_id=f"{model.kind}:c={wave.c!r}:q={wave.q!r}",
    )


def constant_extension(model: ModelSpec, wave: WaveParams, tau0: float, X: float, n: int = 512) -> PeriodicExtension:
    """Constant-state 'extension' of period X (oracle and padding helper)."""
    tau = np.full(n, float(tau0))
    u = wave.q - wave.c * tau
    if model.kind == ST_VENANT:
        alpha = tau ** (-3.0) / model.F
    else:
        alpha = np.full(n, model.cs**2)
    return PeriodicExtension(
        X=float(X),
        grid=np.linspace(0.0, X, n, endpoint=False),
        tau=tau,
        alpha=alpha,
        g_tau=np.broadcast_to(np.asarray(model.source_tau(tau, u), dtype=float), tau.shape).copy(),
        g_u=np.broadcast_to(np.asarray(model.source_u(tau, u), dtype=float), tau.shape).copy(),
        visc=np.broadcast_to(np.asarray(model.viscosity_coefficient(tau), dtype=float), tau.shape).copy(),
        c=wave.c,
        paste_tol=0.0,
        source_id=f"{model.kind}:constant",
    )


def _conv_matrix(samples: np.ndarray, N: int) -> np.ndarray:
    """Toeplitz convolution matrix C[m,n] = fhat_{m-n} on modes m,n in [-N, N]."""
    M = len(samples)
    if M < 4 * N + 1:
        raise ValidationError(f"period grid of {M} points cannot resolve 2N={2 * N} coefficients")
    fhat = np.fft.fft(samples) / M
    idx = np.arange(-N, N + 1)
    diff = idx[:, None] - idx[None, :]
    return fhat[np.mod(diff, M)]


def hill_spectrum(ext: PeriodicExtension, xi_list, N: int = 32):
    """Galerkin eigenvalues of the linearized operator per Bloch parameter."""
    if N < 8:
        raise ValidationError("Fourier truncation N must be >= 8")
    M = len(ext.tau)
    if M < 4 * (2 * N + 1):
        raise ValidationError(
            f"need at least {4 * (2 * N + 1)} grid points per period, have {M}"
        )
    Ca = _conv_matrix(ext.alpha, N)
    Cgt = _conv_matrix(ext.g_tau, N)
    Cgu = _conv_matrix(ext.g_u, N)
    Cv = _conv_matrix(ext.visc, N)
    modes = np.arange(-N, N + 1)
    out = []
    for xi in xi_list:
        k = xi + 2.0 * np.pi * modes / ext.X
        D = np.diag(1j * k)
        cD = ext.c * D
        top = np.hstack([cD, D])
        bottom = np.hstack([D @ Ca + Cgt, cD + Cgu + D @ Cv @ D])
        Lmat = np.vstack([top, bottom])
        try:
            vals = np.linalg.eigvals(Lmat)
        except np.linalg.LinAlgError as e:
            raise NumericalError(f"eigenvalue solve failed at xi={xi}: {e}") from e
        out.append(BlochSample(xi=float(xi), eigenvalues=tuple(vals), N=int(N)))
    return out


def dynamic_spectrum_max_real(samples, exclude_origin: float = 1e-2) -> float:
    """Max real part over all samples, ignoring eigenvalues near the origin."""
    best = -np.inf
    for s in samples:
        for lam in s.eigenvalues:
            if abs(lam) <= exclude_origin:
                continue
            best = max(best, lam.real)
    return float(best)


def essential_spectrum_of_wave(model: ModelSpec, wave: WaveParams, eq, k_grid):
    """Endstate dispersion curves plus a stability verdict.

    The essential spectrum of the wave is bounded to the right by the
    envelope of the endstate's dispersion curves, so the verdict is read off
    max Re lambda over the grid.
    """
    samples, max_re = essential_spectrum_curve(model, wave, eq, k_grid)
    return samples, max_re, bool(max_re <= 1e-10)


def bloch_to_csv(samples, period: float) -> str:
    buf = io.StringIO()
    buf.write("xi,re_lambda,im_lambda,N,period\n")
    for s in samples:
        for lam in s.eigenvalues:
            buf.write(f"{s.xi:.17g},{lam.real:.17g},{lam.imag:.17g},{s.N},{period:.17g}\n")
    return buf.getvalue()
