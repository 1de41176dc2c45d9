"""Width traces, regime classification, frequencies and locus sweeps."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import enum
import logging
import math
import os

import numpy as np

from .core import WidthConvention
from .errors import Ambiguous, InsufficientData, InvalidInput, NoOverlap, WavepackError
from . import variational as var

log = logging.getLogger(__name__)

CONSTANT_EXCURSION = 0.02
COLLAPSE_FRACTION = 0.25
SPREAD_FACTOR = 1.5
# relative excursion below which a trace has no oscillation to measure
FLAT_TOLERANCE = 1e-9


class TraceSource(str, enum.Enum):
    VARIATIONAL = "Variational"
    PDE = "Pde"


class TraceRegime(str, enum.Enum):
    SPREAD = "Spread"
    COLLAPSE = "Collapse"
    CONSTANT_WIDTH = "ConstantWidth"
    OSCILLATING = "Oscillating"


@dataclass(frozen=True)
class WidthTrace:
    t: np.ndarray = field(repr=False)
    width: np.ndarray = field(repr=False)
    source: TraceSource = TraceSource.VARIATIONAL
    convention: WidthConvention = WidthConvention.ANSATZ
    # True when the producing run stopped at its collapse floor
    terminated: bool = False

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        w = np.asarray(self.width, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size == 0:
            raise InvalidInput("t and width must be equal-length 1D arrays")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise InvalidInput("trace times must be strictly increasing")
        if not np.all(w > 0):
            raise InvalidInput("trace widths must be positive")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "width", w)
        object.__setattr__(self, "source", TraceSource(self.source))
        object.__setattr__(self, "convention", WidthConvention(self.convention))

    @classmethod
    def from_series(cls, series):
        # the variational Delta is the ansatz parameter by construction
        return cls(series.t, series.width, TraceSource.VARIATIONAL, WidthConvention.ANSATZ, series.collapsed)

    @classmethod
    def from_trajectory(cls, traj, convention=None):
        from .pde import TrajectoryStatus

        conv = WidthConvention(convention or traj.config.width_convention)
        return cls(
            traj.t,
            traj.width(conv),
            TraceSource.PDE,
            conv,
            traj.status is TrajectoryStatus.COLLAPSE_UNRESOLVABLE,
        )

    def resample(self, every):
        return WidthTrace(self.t[::every], self.width[::every], self.source, self.convention, self.terminated)

    def relative_excursion(self):
        w0 = self.width[0]
        return float(np.max(np.abs(self.width - w0)) / w0)


@dataclass(frozen=True)
class RegimeReport:
    regime: TraceRegime
    collapse_time: float | None = None
    frequency: float | None = None
    amplitude: float | None = None


def _count_maxima(w):
    inner = w[1:-1]
    return int(np.count_nonzero((inner > w[:-2]) & (inner >= w[2:])))


def classify_trace(trace):
    """Assign one of the four regimes using fixed operational thresholds.

    Rules, first match wins: excursion < 2% is ConstantWidth; a run that hit
    its collapse floor, or fell below 25% of its initial width, is Collapse;
    two or more local maxima is Oscillating; a final width above 1.5x the
    initial one is Spread.
    """
    t, w = trace.t, trace.width
    if t[-1] - t[0] < 2.0:
        raise InsufficientData(f"trace spans {t[-1] - t[0]:.3g} < 2 time units")
    w0 = w[0]
    amplitude = trace.relative_excursion()
    if amplitude < CONSTANT_EXCURSION and not trace.terminated:
        return RegimeReport(TraceRegime.CONSTANT_WIDTH, amplitude=amplitude)
    below = np.nonzero(w < COLLAPSE_FRACTION * w0)[0]
    if trace.terminated or below.size:
        t_c = float(t[-1]) if trace.terminated and not below.size else float(t[below[0]])
        return RegimeReport(TraceRegime.COLLAPSE, collapse_time=t_c, amplitude=amplitude)
    if _count_maxima(w) >= 2:
        try:
            freq = estimate_frequency(trace)
        except InsufficientData:
            # too few clean crossings for the counter; the spectrum still has a peak
            freq = spectral_frequency(trace)
        return RegimeReport(TraceRegime.OSCILLATING, frequency=freq, amplitude=amplitude)
    if w[-1] > SPREAD_FACTOR * w0:
        return RegimeReport(TraceRegime.SPREAD, amplitude=amplitude)
    raise Ambiguous(f"no regime rule fired (excursion {amplitude:.3g}, final/initial {w[-1] / w0:.3g})")


def _upward_crossings(t, s, band):
    """Interpolated times where ``s`` rises through zero after dipping below -band."""
    times = []
    armed = s[0] < -band
    for i in range(1, s.size):
        if s[i] < -band:
            armed = True
        elif armed and s[i - 1] < 0 <= s[i]:
            frac = -s[i - 1] / (s[i] - s[i - 1])
            times.append(t[i - 1] + frac * (t[i] - t[i - 1]))
            armed = False
    return np.asarray(times)


def spectral_frequency(trace):
    """Peak of the zero-padded amplitude spectrum, refined by a parabola fit."""
    t, w = trace.t, trace.width
    dt = float(np.median(np.diff(t)))
    s = (w - w.mean()) * np.hanning(w.size)
    nfft = 1 << int(math.ceil(math.log2(8 * w.size)))
    spec = np.abs(np.fft.rfft(s, nfft))
    freqs = np.fft.rfftfreq(nfft, dt)
    i = int(np.argmax(spec[1:])) + 1
    if 0 < i < spec.size - 1:
        a, b, c = np.log(spec[i - 1 : i + 2] + 1e-300)
        denom = a - 2.0 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
        return float(freqs[i] + shift * (freqs[1] - freqs[0]))
    return float(freqs[i])


def estimate_frequency(trace):
    """Oscillation frequency of the width in cycles per unit time.

    Counts upward crossings of the mean, after a light moving average and
    with a hysteresis band so noise does not add spurious crossings.  The
    spectral peak seeds the smoothing window and is logged when it disagrees
    with the crossing count by more than 5%.  A flat trace gives 0.
    """
    t, w = trace.t, trace.width
    if t.size < 8:
        raise InsufficientData("need at least 8 samples")
    mean = float(w.mean())
    if np.max(np.abs(w - mean)) <= FLAT_TOLERANCE * mean:
        return 0.0
    f_spec = spectral_frequency(trace)
    dt = float(np.median(np.diff(t)))
    s = w - mean
    if f_spec > 0:
        win = int(0.25 / (f_spec * dt))
        if win >= 3:
            s = np.convolve(s, np.ones(win) / win, mode="same")
            # drop the edges where the window ran off the data
            half = win // 2
            t, s = t[half : t.size - half], s[half : s.size - half]
    band = 0.5 * math.sqrt(2.0) * float(np.std(s))
    up = _upward_crossings(t, s, band)
    if up.size < 3:
        raise InsufficientData(f"only {up.size} upward crossings; need at least 3")
    f = (up.size - 1) / (up[-1] - up[0])
    if f_spec > 0 and abs(f - f_spec) > 0.05 * f:
        log.info("crossing frequency %.4g and spectral peak %.4g disagree", f, f_spec)
    return float(f)


@dataclass(frozen=True)
class TraceComparison:
    max_rel_dev: float
    at_t: float


def compare_traces(a, b):
    """Largest |w_a - w_b| / max(w_a, w_b) over a's times inside b's range."""
    lo, hi = max(a.t[0], b.t[0]), min(a.t[-1], b.t[-1])
    mask = (a.t >= lo) & (a.t <= hi)
    if hi < lo or not mask.any():
        raise NoOverlap("traces share no time range")
    if a.convention is not b.convention:
        log.info("comparing %s width with %s width", a.convention.value, b.convention.value)
    ta = a.t[mask]
    wa = a.width[mask]
    wb = np.interp(ta, b.t, b.width)
    dev = np.abs(wa - wb) / np.maximum(wa, wb)
    i = int(np.argmax(dev))
    return TraceComparison(float(dev[i]), float(ta[i]))


@dataclass(frozen=True)
class LocusPoint:
    delta: float
    beta: float
    y_min: float
    frequency: float
    max_excursion: float
    verified: bool


def worker_count(requested=None):
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("WAVEPACK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer WAVEPACK_THREADS=%r", env)
    return min(8, os.cpu_count() or 1)


def locus_values(delta):
    """(beta, Y_min, small-oscillation frequency) on the constant-width locus.

    At delta = 3**-0.25 the coupling vanishes and the minimum is the bare
    breathing fixed point D/4 with frequency 2/(2 pi).
    """
    beta = -var.beta_for_constant_width(delta)
    p = var.TrapParams(beta, delta)
    if beta == 0.0:
        return beta, var.trap_D(p) / 4.0, 1.0 / math.pi
    return beta, var.trap_ymin(p), var.stability_frequency(p)


def _locus_point(delta, tolerance, t_end, dt):
    beta, y_min, freq = locus_values(delta)
    y0 = delta * delta
    try:
        series = var.integrate_width(var.TrapParams(beta, delta), y0, 0.0, t_end, dt)
    except WavepackError as exc:
        log.warning("locus point delta=%g failed: %s", delta, exc)
        return LocusPoint(delta, beta, y_min, freq, math.inf, False)
    exc_rel = float(np.max(np.abs(series.y - y0)) / y0)
    ok = (not series.collapsed) and exc_rel < tolerance
    return LocusPoint(delta, beta, y_min, freq, exc_rel, ok)


def sweep_constant_width(deltas, tolerance=1e-6, t_end=20.0, dt=1e-3, workers=None):
    """Check the constant-width locus at each delta with the width ODE.

    For every delta, beta is set on the locus, Y starts at rest at delta^2,
    and the point is verified when max |Y - delta^2| / delta^2 stays below
    ``tolerance``.  Points run on a thread pool (``WAVEPACK_THREADS`` caps
    its size); results come back in input order.
    """
    deltas = [float(d) for d in deltas]
    bad = [d for d in deltas if not 0 < d <= var.DELTA_CONSTANT_WIDTH_MAX]
    if bad:
        raise InvalidInput(f"delta values outside (0, 3**-0.25]: {bad}")
    n = worker_count(workers)
    if n == 1 or len(deltas) < 2:
        return [_locus_point(d, tolerance, t_end, dt) for d in deltas]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda d: _locus_point(d, tolerance, t_end, dt), deltas))


@dataclass(frozen=True)
class DensityMatrix:
    x: np.ndarray
    t: np.ndarray
    rho: np.ndarray


def density_matrix(traj):
    return DensityMatrix(traj.grid.x.copy(), traj.snapshot_times.copy(), traj.snapshots.copy())
