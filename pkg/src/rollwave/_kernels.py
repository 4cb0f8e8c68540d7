"""Compiled kernels for Evans-function integration.

The Evans systems W' = A(x, lambda) W are integrated by the polar
(continuous orthogonalization) method: an orthonormal frame Q obeys
Q' = A Q - Q (Q* A Q) while the radial factor gamma obeys
(log gamma)' = tr(Q* A Q).  Profile coefficients are evaluated by cubic
Hermite interpolation on the stored uniform grid; the integrator is an
adaptive Dormand-Prince RK45 pair working on the frame + log-radius state.
"""


import numpy as np
from numba import njit

ST_VENANT_KIND = 0
JIN_XIN_KIND = 1


@njit(cache=True)
def _interp_profile(x, x0, dx, n, tau, dtau, ddtau):
    """Cubic Hermite values (tau, tau', tau'') at arbitrary x."""
    s = (x - x0) / dx
    i = int(np.floor(s))
    if i < 0:
        return tau[0], dtau[0], ddtau[0]
    if i >= n - 1:
        return tau[n - 1], dtau[n - 1], ddtau[n - 1]
    t = s - i
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    tv = h00 * tau[i] + h10 * dx * dtau[i] + h01 * tau[i + 1] + h11 * dx * dtau[i + 1]
    dv = h00 * dtau[i] + h10 * dx * ddtau[i] + h01 * dtau[i + 1] + h11 * dx * ddtau[i + 1]
    # Hermite slope of the tau-interpolant keeps (tau, tau') consistent, but
    # tau'' is best recovered from the profile ODE by the caller.
    return tv, dv, 0.0


@njit(cache=True)
def _tau_accel_k(kind, params, tv, dv):
    """tau'' from the profile ODE at (tau, tau')."""
    if kind == ST_VENANT_KIND:
        F, nu, r, s, c, q = params[0], params[1], params[2], params[3], params[4], params[5]
        gstar = 1.0 - tv ** (s + 1.0) * (q - c * tv) ** r
        return tv * tv / (c * nu) * (gstar + 2.0 * c * nu * dv * dv / tv**3 - (c * c - 1.0 / (F * tv**3)) * dv)
    cs, p, c, q = params[0], params[1], params[2], params[3]
    return (tv ** (-p) + c * tv - q - (c * c - cs * cs) * dv) / c


@njit(cache=True)
def _fill_A(A, lam, kind, params, tv, dv, ddv):
    """Evans coefficient matrix A(x, lambda) at one profile point."""
    if kind == ST_VENANT_KIND:
        F, nu, r, s, c, q = params[0], params[1], params[2], params[3], params[4], params[5]
        t2 = tv * tv
        up = q - c * tv
        alpha = (1.0 / F + 2.0 * c * nu * dv) / tv**3
        dalpha = -3.0 * dv * (1.0 / F + 2.0 * c * nu * dv) / tv**4 + 2.0 * c * nu * ddv / tv**3
        A[0, 0] = lam / c
        A[0, 1] = 0.0
        A[0, 2] = -t2 / c
        A[1, 0] = 0.0
        A[1, 1] = 0.0
        A[1, 2] = t2
        A[2, 0] = ((s + 1.0) * tv**s * up**r - dalpha - alpha * lam / c) / nu
        A[2, 1] = (lam + r * tv ** (s + 1.0) * up ** (r - 1.0)) / nu
        A[2, 2] = (-c * t2 + alpha * t2 / c) / nu
    else:
        cs, p, c, q = params[0], params[1], params[2], params[3]
        A[0, 0] = lam / c
        A[0, 1] = 0.0
        A[0, 2] = -1.0 / c
        A[1, 0] = 0.0
        A[1, 1] = 0.0
        A[1, 2] = 1.0
        A[2, 0] = -cs * cs * lam / c + p * tv ** (-p - 1.0)
        A[2, 1] = lam + 1.0
        A[2, 2] = cs * cs / c - c


@njit(cache=True)
def _frame_rhs(x, Q, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ):
    """dQ = A Q - Q (Q* A Q); returns tr(Q* A Q)."""
    tv, dv, _ = _interp_profile(x, x0, dx, n, tau, dtau, ddtau)
    ddv = _tau_accel_k(kind, params, tv, dv)
    A = np.empty((3, 3), dtype=np.complex128)
    _fill_A(A, lam, kind, params, tv, dv, ddv)
    AQ = np.empty((3, k), dtype=np.complex128)
    for i in range(3):
        for j in range(k):
            acc = 0.0 + 0.0j
            for m in range(3):
                acc += A[i, m] * Q[m, j]
            AQ[i, j] = acc
    B = np.empty((k, k), dtype=np.complex128)
    tr = 0.0 + 0.0j
    for i in range(k):
        for j in range(k):
            acc = 0.0 + 0.0j
            for m in range(3):
                acc += np.conj(Q[m, i]) * AQ[m, j]
            B[i, j] = acc
        tr += B[i, i]
    for i in range(3):
        for j in range(k):
            acc = AQ[i, j]
            for m in range(k):
                acc -= Q[i, m] * B[m, j]
            dQ[i, j] = acc
    return tr


@njit(cache=True)
def _mgs(Q, k):
    """Modified Gram-Schmidt in place; returns log of the (positive) diagonal product."""
    logr = 0.0
    for j in range(k):
        for m in range(j):
            acc = 0.0 + 0.0j
            for i in range(3):
                acc += np.conj(Q[i, m]) * Q[i, j]
            for i in range(3):
                Q[i, j] -= acc * Q[i, m]
        nrm = 0.0
        for i in range(3):
            nrm += Q[i, j].real ** 2 + Q[i, j].imag ** 2
        nrm = np.sqrt(nrm)
        logr += np.log(nrm)
        for i in range(3):
            Q[i, j] /= nrm
    return logr


# Dormand-Prince coefficients
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@njit(cache=True)
def integrate_frame(x_start, x_end, Q0, lam, kind, params, x0, dx, n, tau, dtau, ddtau, rtol, atol):
    """Integrate the frame + log-radius system from x_start to x_end.

    Returns (Q, log_gamma, ok) with ok=False on step-count exhaustion.
    """
    k = Q0.shape[1]
    Q = Q0.copy()
    logg = 0.0 + 0.0j
    logg += _mgs(Q, k)
    x = x_start
    span = abs(x_end - x_start)
    direction = 1.0 if x_end > x_start else -1.0
    h = direction * min(1e-3, span)
    hmax = 1.0
    nacc = 0
    dQ = np.empty((3, k), dtype=np.complex128)
    K = np.empty((7, 3, k), dtype=np.complex128)
    Kg = np.empty(7, dtype=np.complex128)
    Qs = np.empty((3, k), dtype=np.complex128)
    for _ in range(5_000_000):
        if direction * (x - x_end) >= 0.0:
            break
        if direction * (x + h - x_end) > 0.0:
            h = x_end - x

        Kg[0] = _frame_rhs(x, Q, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[0] = dQ
        for i in range(3):
            for j in range(k):
                Qs[i, j] = Q[i, j] + h * _A21 * K[0, i, j]
        Kg[1] = _frame_rhs(x + h / 5.0, Qs, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[1] = dQ
        for i in range(3):
            for j in range(k):
                Qs[i, j] = Q[i, j] + h * (_A31 * K[0, i, j] + _A32 * K[1, i, j])
        Kg[2] = _frame_rhs(x + 0.3 * h, Qs, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[2] = dQ
        for i in range(3):
            for j in range(k):
                Qs[i, j] = Q[i, j] + h * (_A41 * K[0, i, j] + _A42 * K[1, i, j] + _A43 * K[2, i, j])
        Kg[3] = _frame_rhs(x + 0.8 * h, Qs, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[3] = dQ
        for i in range(3):
            for j in range(k):
                Qs[i, j] = Q[i, j] + h * (
                    _A51 * K[0, i, j] + _A52 * K[1, i, j] + _A53 * K[2, i, j] + _A54 * K[3, i, j]
                )
        Kg[4] = _frame_rhs(x + 8.0 / 9.0 * h, Qs, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[4] = dQ
        for i in range(3):
            for j in range(k):
                Qs[i, j] = Q[i, j] + h * (
                    _A61 * K[0, i, j]
                    + _A62 * K[1, i, j]
                    + _A63 * K[2, i, j]
                    + _A64 * K[3, i, j]
                    + _A65 * K[4, i, j]
                )
        Kg[5] = _frame_rhs(x + h, Qs, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[5] = dQ
        # 5th-order solution
        for i in range(3):
            for j in range(k):
                Qs[i, j] = Q[i, j] + h * (
                    _B1 * K[0, i, j] + _B3 * K[2, i, j] + _B4 * K[3, i, j] + _B5 * K[4, i, j] + _B6 * K[5, i, j]
                )
        logg_new = logg + h * (_B1 * Kg[0] + _B3 * Kg[2] + _B4 * Kg[3] + _B5 * Kg[4] + _B6 * Kg[5])
        Kg[6] = _frame_rhs(x + h, Qs, k, lam, kind, params, x0, dx, n, tau, dtau, ddtau, dQ)
        K[6] = dQ

        errnorm = 0.0
        cnt = 0
        for i in range(3):
            for j in range(k):
                e = h * (
                    _E1 * K[0, i, j]
                    + _E3 * K[2, i, j]
                    + _E4 * K[3, i, j]
                    + _E5 * K[4, i, j]
                    + _E6 * K[5, i, j]
                    + _E7 * K[6, i, j]
                )
                sc = atol + rtol * max(abs(Q[i, j]), abs(Qs[i, j]))
                errnorm += (abs(e) / sc) ** 2
                cnt += 1
        eg = h * (_E1 * Kg[0] + _E3 * Kg[2] + _E4 * Kg[3] + _E5 * Kg[4] + _E6 * Kg[5] + _E7 * Kg[6])
        scg = atol + rtol * max(abs(logg), abs(logg_new), 1.0)
        errnorm += (abs(eg) / scg) ** 2
        cnt += 1
        errnorm = np.sqrt(errnorm / cnt)

        if errnorm <= 1.0:
            x = x + h
            for i in range(3):
                for j in range(k):
                    Q[i, j] = Qs[i, j]
            logg = logg_new
            nacc += 1
            if nacc % 40 == 0:
                logg += _mgs(Q, k)
            fac = 0.9 * errnorm ** (-0.2) if errnorm > 0.0 else 5.0
        else:
            fac = max(0.2, 0.9 * errnorm ** (-0.2))
        fac = min(5.0, max(0.2, fac))
        h *= fac
        if abs(h) > hmax:
            h = direction * hmax
        if abs(h) < 1e-14:
            return Q, logg, False
    else:
        return Q, logg, False
    logg += _mgs(Q, k)
    return Q, logg, True


@njit(cache=True)
def det3(M):
    return (
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )
