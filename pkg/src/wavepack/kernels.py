"""Hot inner loops, each in a numba and a pure numpy/Python flavour.

The public names (``rk4_width``, ``phase_kick``, ``real_space_moments``) are
bound at import time to the numba versions when numba imports cleanly and
``WAVEPACK_NUMBA`` is not set to a false-like value ("0", "false", "no",
"off"); otherwise to the numpy versions.  Both flavours stay importable as
``*_numba`` / ``*_numpy`` so they can be compared directly.
"""

import os

import numpy as np

STATUS_COMPLETED = 0
STATUS_COLLAPSED = 1
STATUS_NONFINITE = 2

_FALSE = {"0", "false", "no", "off"}


def _numba_requested():
    return os.environ.get("WAVEPACK_NUMBA", "1").strip().lower() not in _FALSE


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is installed in CI
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and _numba_requested()


def _jit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# Width ODE: Y'' = a + b*Y + c/sqrt(Y), classic RK4 on (Y, Y').
# ---------------------------------------------------------------------------

def _rk4_width_loop(a, b, c, y0, ydot0, dt, nsteps, y_floor, t_out, y_out, v_out):
    # Returns (samples written, status).  A stage that lands at or below
    # y_floor counts as collapse at the end of the attempted step.
    y = y0
    v = ydot0
    t_out[0] = 0.0
    y_out[0] = y
    v_out[0] = v
    half = 0.5 * dt
    for i in range(nsteps):
        k1y = v
        k1v = a + b * y + c / np.sqrt(y)
        y2 = y + half * k1y
        if y2 <= y_floor:
            return i + 1, STATUS_COLLAPSED
        k2y = v + half * k1v
        k2v = a + b * y2 + c / np.sqrt(y2)
        y3 = y + half * k2y
        if y3 <= y_floor:
            return i + 1, STATUS_COLLAPSED
        k3y = v + half * k2v
        k3v = a + b * y3 + c / np.sqrt(y3)
        y4 = y + dt * k3y
        if y4 <= y_floor:
            return i + 1, STATUS_COLLAPSED
        k4y = v + dt * k3v
        k4v = a + b * y4 + c / np.sqrt(y4)
        y = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (np.isfinite(y) and np.isfinite(v)):
            return i + 1, STATUS_NONFINITE
        if y <= y_floor:
            return i + 1, STATUS_COLLAPSED
        t_out[i + 1] = (i + 1) * dt
        y_out[i + 1] = y
        v_out[i + 1] = v
    return nsteps + 1, STATUS_COMPLETED


rk4_width_numpy = _rk4_width_loop
rk4_width_numba = _jit(_rk4_width_loop)


# ---------------------------------------------------------------------------
# Split-step potential/nonlinear half kick: amp *= exp(-i (V + c|amp|^2) h).
# ---------------------------------------------------------------------------

def phase_kick_numpy(amp, v, c, h):
    dens = amp.real * amp.real + amp.imag * amp.imag
    amp *= np.exp(-1j * (v + c * dens) * h)


def _phase_kick_loop(amp, v, c, h):
    for j in range(amp.shape[0]):
        z = amp[j]
        phi = -(v[j] + c * (z.real * z.real + z.imag * z.imag)) * h
        amp[j] = z * complex(np.cos(phi), np.sin(phi))


phase_kick_numba = _jit(_phase_kick_loop)


# ---------------------------------------------------------------------------
# Real-space moments in one pass: (sum|a|^2, sum x|a|^2, sum x^2|a|^2,
# sum |a|^4, sum V|a|^2), all without the dx factor.
# ---------------------------------------------------------------------------

def real_space_moments_numpy(amp, x, v):
    dens = amp.real * amp.real + amp.imag * amp.imag
    return (
        float(dens.sum()),
        float(np.dot(x, dens)),
        float(np.dot(x * x, dens)),
        float(np.dot(dens, dens)),
        float(np.dot(v, dens)),
    )


def _real_space_moments_loop(amp, x, v):
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s4 = 0.0
    sv = 0.0
    for j in range(amp.shape[0]):
        z = amp[j]
        d = z.real * z.real + z.imag * z.imag
        s0 += d
        s1 += x[j] * d
        s2 += x[j] * x[j] * d
        s4 += d * d
        sv += v[j] * d
    return s0, s1, s2, s4, sv


real_space_moments_numba = _jit(_real_space_moments_loop)


if NUMBA_ENABLED:
    rk4_width = rk4_width_numba
    phase_kick = phase_kick_numba
    real_space_moments = real_space_moments_numba
else:
    rk4_width = rk4_width_numpy
    phase_kick = phase_kick_numpy
    real_space_moments = real_space_moments_numpy


def backend():
    """Name of the active kernel flavour: ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_ENABLED else "numpy"
