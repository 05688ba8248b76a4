"""Time steppers for the Schrodinger equation i dpsi/dt = H(t) psi.

Two integration methods share one loop structure:

* classical fixed-step 4th-order Runge-Kutta,
* adaptive Dormand-Prince 5(4) embedded pair with PI-free standard step
  control.

The drive Hamiltonians all have the form

    H(t) = Omega_1(t) * A  +  xi(t) * B  +  conj(xi(t)) * B^dagger  +  diag,

with xi(t) = Omega_r(t) exp(i phi_r(t)), constant matrices A, B and a
constant (complex, for decay) diagonal.  The kernel below evaluates the
envelopes and the piecewise-linear phase at every internal stage time, so no
time grid of the Hamiltonian is ever cached.

Requested sample times are hit exactly: the stepper truncates any step that
would cross the next pending sample, so sampled states carry no interpolation
error.  The kernels are compiled with numba when it is available and run as
plain Python otherwise.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_NAN = 2

_TINY_STEP = 1e-14


@_njit(cache=True)
def _envelope_sum(t, starts, sigmas, peaks):
    total = 0.0
    for k in range(starts.shape[0]):
        dt = t - starts[k]
        if 0.0 < dt < 2.0 * sigmas[k]:
            s = np.sin(np.pi * dt / (2.0 * sigmas[k]))
            total += peaks[k] * s * s
    return total


@_njit(cache=True)
def _phase_at(t, ts, vs):
    n = ts.shape[0]
    if t <= ts[0]:
        return vs[0]
    if t >= ts[n - 1]:
        return vs[n - 1]
    for k in range(n - 1):
        if t <= ts[k + 1]:
            f = (t - ts[k]) / (ts[k + 1] - ts[k])
            return vs[k] + f * (vs[k + 1] - vs[k])
    return vs[n - 1]


@_njit(cache=True)
def _rhs(t, y, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs):
    o1 = _envelope_sum(t, s1, g1, p1)
    orr = _envelope_sum(t, sr, gr, pr)
    out = diag * y
    if o1 != 0.0:
        out = out + o1 * (A @ y)
    if orr != 0.0:
        xi = orr * np.exp(1j * _phase_at(t, pts, pvs))
        out = out + xi * (B @ y) + np.conj(xi) * (Bd @ y)
    return -1j * out


@_njit(cache=True)
def _step_error(err, y, ynew, rtol, atol):
    acc = 0.0
    n = y.shape[0]
    for i in range(n):
        m = abs(y[i])
        m2 = abs(ynew[i])
        if m2 > m:
            m = m2
        tol = atol + rtol * m
        q = abs(err[i]) / tol
        acc += q * q
    return np.sqrt(acc / n)


@_njit(cache=True)
def propagate_kernel(
    y0,
    t0,
    samples,
    rtol,
    atol,
    hmax,
    fixed_step,
    A,
    B,
    Bd,
    diag,
    s1,
    g1,
    p1,
    sr,
    gr,
    pr,
    pts,
    pvs,
):
    """Integrate from t0 through every time in ``samples`` (sorted, > t0).

    fixed_step > 0 selects classical RK4 with that step; otherwise the
    adaptive 5(4) pair with (rtol, atol) runs, capped at hmax.  Returns
    (states at samples, status, failure time, accepted step count).
    """
    # Dormand-Prince 5(4) tableau
    c2, c3, c4, c5 = 0.2, 0.3, 0.8, 8.0 / 9.0
    a21 = 0.2
    a31, a32 = 3.0 / 40.0, 9.0 / 40.0
    a41, a42, a43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
    a51, a52, a53, a54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
    a61, a62, a63, a64, a65 = (
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    )
    b1, b3, b4, b5, b6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
    e1, e3, e4, e5, e6, e7 = (
        71.0 / 57600.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    )

    n_samp = samples.shape[0]
    dim = y0.shape[0]
    out = np.zeros((n_samp, dim), dtype=np.complex128)
    t = t0
    t1 = samples[n_samp - 1]
    y = y0.copy()
    idx = 0
    n_steps = 0

    adaptive = fixed_step <= 0.0
    if adaptive:
        h_want = min(hmax, (t1 - t0) / 100.0)
    else:
        h_want = min(hmax, fixed_step)
    k1 = _rhs(t, y, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)

    while idx < n_samp:
        target = samples[idx]
        h = h_want
        hit = False
        if t + h >= target:
            h = target - t
            hit = True
        if h <= _TINY_STEP * max(1.0, abs(t)):
            if hit and h >= 0.0:
                # degenerate clamp: sample coincides with current time
                out[idx] = y
                idx += 1
                continue
            return out, STATUS_UNDERFLOW, t, n_steps

        if adaptive:
            k2 = _rhs(t + c2 * h, y + h * (a21 * k1), A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            k3 = _rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2), A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            k4 = _rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3), A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            k5 = _rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            k6 = _rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)
            k7 = _rhs(t + h, ynew, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)
            err = _step_error(errv, y, ynew, rtol, atol)
        else:
            ka = _rhs(t + 0.5 * h, y + 0.5 * h * k1, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            kb = _rhs(t + 0.5 * h, y + 0.5 * h * ka, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            kc = _rhs(t + h, y + h * kb, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            ynew = y + (h / 6.0) * (k1 + 2.0 * ka + 2.0 * kb + kc)
            k7 = _rhs(t + h, ynew, A, B, Bd, diag, s1, g1, p1, sr, gr, pr, pts, pvs)
            err = 0.0

        bad = False
        for i in range(dim):
            if np.isnan(ynew[i].real) or np.isnan(ynew[i].imag):
                bad = True
        if bad:
            return out, STATUS_NAN, t, n_steps

        if err <= 1.0:
            t = target if hit else t + h
            y = ynew
            k1 = k7
            n_steps += 1
            if hit:
                out[idx] = y
                idx += 1
        if adaptive:
            if err > 0.0:
                fac = 0.9 * err ** -0.2
                if fac > 5.0:
                    fac = 5.0
                elif fac < 0.2:
                    fac = 0.2
            else:
                fac = 5.0
            h_new = h * fac
            if not hit or err > 1.0:
                h_want = min(hmax, h_new)
            elif h_new > h_want:
                # sample-truncated step: only let the controller grow h
                h_want = min(hmax, h_new)

    return out, STATUS_OK, t, n_steps


def propagate_generic(h_of_t, y0, t0, samples, rtol, atol, hmax, fixed_step):
    """Same stepping logic for an arbitrary dense Hamiltonian callable.

    ``h_of_t(t)`` returns the (possibly non-Hermitian) matrix H(t)/hbar.
    Used by models that do not expose drive templates; slower but identical
    in contract to ``propagate_kernel``.
    """

    def rhs(t, y):
        return -1j * (h_of_t(t) @ y)

    c2, c3, c4, c5 = 0.2, 0.3, 0.8, 8.0 / 9.0
    a21 = 0.2
    a31, a32 = 3.0 / 40.0, 9.0 / 40.0
    a41, a42, a43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
    a51, a52, a53, a54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
    a61, a62, a63, a64, a65 = (
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    )
    b1, b3, b4, b5, b6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
    e = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

    samples = np.asarray(samples, dtype=float)
    n_samp = len(samples)
    out = np.zeros((n_samp, len(y0)), dtype=np.complex128)
    t = t0
    t1 = samples[-1]
    y = np.array(y0, dtype=np.complex128)
    idx = 0
    n_steps = 0
    adaptive = fixed_step <= 0.0
    h_want = min(hmax, (t1 - t0) / 100.0) if adaptive else min(hmax, fixed_step)
    k1 = rhs(t, y)

    while idx < n_samp:
        target = samples[idx]
        h = h_want
        hit = False
        if t + h >= target:
            h = target - t
            hit = True
        if h <= _TINY_STEP * max(1.0, abs(t)):
            if hit and h >= 0.0:
                out[idx] = y
                idx += 1
                continue
            return out, STATUS_UNDERFLOW, t, n_steps

        if adaptive:
            k2 = rhs(t + c2 * h, y + h * (a21 * k1))
            k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2))
            k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3))
            k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4))
            k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5))
            ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)
            if np.any(np.isnan(ynew)):
                return out, STATUS_NAN, t, n_steps
            k7 = rhs(t + h, ynew)
            errv = h * (e[0] * k1 + e[1] * k3 + e[2] * k4 + e[3] * k5 + e[4] * k6 + e[5] * k7)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
            err = float(np.sqrt(np.mean(np.abs(errv / sc) ** 2)))
        else:
            ka = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            kb = rhs(t + 0.5 * h, y + 0.5 * h * ka)
            kc = rhs(t + h, y + h * kb)
            ynew = y + (h / 6.0) * (k1 + 2.0 * ka + 2.0 * kb + kc)
            k7 = rhs(t + h, ynew)
            err = 0.0

        if np.any(np.isnan(ynew)):
            return out, STATUS_NAN, t, n_steps

        if err <= 1.0:
            t = target if hit else t + h
            y = ynew
            k1 = k7
            n_steps += 1
            if hit:
                out[idx] = y
                idx += 1
        if adaptive:
            fac = min(5.0, max(0.2, 0.9 * err ** -0.2)) if err > 0 else 5.0
            h_new = h * fac
            if not hit or err > 1.0 or h_new > h_want:
                h_want = min(hmax, h_new)

    return out, STATUS_OK, t, n_steps
