"""Width dynamics of a Gaussian packet, Y = Delta^2, in dimensionless units.

Free particle (lengths in hbar/p0, times in m hbar/p0^2)::

    Y'' = gamma / sqrt(Y) + 1 / (2 Delta0^2)

Harmonic trap (lengths in sqrt(hbar/m omega), times in 1/omega)::

    Y'' = D - 4 Y - beta / sqrt(Y),   D = delta^2 + 1/delta^2 + 2 beta/delta

Both are Y'' = -dV/dY for the effective potentials returned by
:func:`free_potential` and :func:`trap_potential`.  The trap formulas are
written for signed beta; for beta < 0 they are the |beta| forms usually
quoted for the attractive case.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np
from scipy.optimize import bisect

from . import kernels
from .errors import (
    ConvergenceFailure,
    DomainError,
    InvalidInput,
    InvalidRegime,
    NoSolution,
    NonFinite,
    StepTooLarge,
)

Y_FLOOR = 1e-6
MAX_DT = 1e-2
DELTA_CONSTANT_WIDTH_MAX = 3.0 ** -0.25


@dataclass(frozen=True)
class FreeParams:
    gamma: float
    delta0: float

    def __post_init__(self):
        if not self.delta0 > 0:
            raise InvalidInput(f"delta0 must be positive, got {self.delta0!r}")


@dataclass(frozen=True)
class TrapParams:
    beta: float
    delta: float
    alpha: float = 0.0

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidInput(f"delta must be positive, got {self.delta!r}")


@dataclass(frozen=True)
class WidthState:
    y: float
    ydot: float
    t: float

    def __post_init__(self):
        if not self.y > 0:
            raise DomainError(f"Y must be positive, got {self.y!r}")


class Regime(str, enum.Enum):
    SPREAD = "Spread"
    COLLAPSE = "Collapse"
    MARGINAL = "Marginal"


class SeriesStatus(str, enum.Enum):
    COMPLETED = "Completed"
    COLLAPSED = "Collapsed"


@dataclass(frozen=True)
class CriticalWidth:
    y_c: float | None
    delta_c: float | None
    regime: Regime


@dataclass(frozen=True)
class ExtremaThreshold:
    threshold: float
    exists: bool


@dataclass(frozen=True)
class WidthSeries:
    """RK4 samples of (t, Y, Y').  ``stop_time`` is set only on collapse."""

    t: np.ndarray
    y: np.ndarray
    ydot: np.ndarray
    params: FreeParams | TrapParams
    dt: float
    status: SeriesStatus
    stop_time: float | None = None

    @property
    def width(self):
        return np.sqrt(self.y)

    @property
    def collapsed(self):
        return self.status is SeriesStatus.COLLAPSED

    def states(self):
        return [WidthState(float(y), float(v), float(t)) for t, y, v in zip(self.t, self.y, self.ydot)]


def _check_y(y):
    if not y > 0:
        raise DomainError(f"Y must be positive, got {y!r}")


# --- free particle --------------------------------------------------------

def free_rhs(y, p):
    _check_y(y)
    return p.gamma / math.sqrt(y) + 1.0 / (2.0 * p.delta0 ** 2)


def free_potential(y, p):
    if y < 0:
        raise DomainError(f"Y must be non-negative, got {y!r}")
    return -y / (2.0 * p.delta0 ** 2) - 2.0 * p.gamma * math.sqrt(y)


def free_critical(p):
    """Barrier top Y_c and critical initial width for attractive coupling.

    For gamma < 0 the potential has a maximum at Y_c = (2|gamma| delta0^2)^2.
    A packet released at rest with delta0 > 1/(2|gamma|) sits left of the
    barrier and collapses; a narrower one spreads.
    """
    if p.gamma >= 0:
        return CriticalWidth(None, None, Regime.SPREAD)
    g = abs(p.gamma)
    y_c = (2.0 * g * p.delta0 ** 2) ** 2
    delta_c = 1.0 / (2.0 * g)
    if abs(p.delta0 - delta_c) <= 1e-12:
        regime = Regime.MARGINAL
    elif p.delta0 < delta_c:
        regime = Regime.SPREAD
    else:
        regime = Regime.COLLAPSE
    return CriticalWidth(y_c, delta_c, regime)


# --- harmonic trap --------------------------------------------------------

def trap_D(p):
    d = p.delta
    return d * d + 1.0 / (d * d) + 2.0 * p.beta / d


def trap_rhs(y, p):
    _check_y(y)
    return trap_D(p) - 4.0 * y - p.beta / math.sqrt(y)


def trap_potential(y, p):
    if y < 0:
        raise DomainError(f"Y must be non-negative, got {y!r}")
    return 2.0 * y * y + 2.0 * p.beta * math.sqrt(y) - trap_D(p) * y


def trap_extrema_threshold(p):
    if not p.beta > 0:
        raise InvalidRegime(f"extrema threshold applies to beta > 0, got {p.beta!r}")
    threshold = 3.0 * 4.0 ** (1.0 / 3.0) * (p.beta / 4.0) ** (2.0 / 3.0)
    return ExtremaThreshold(threshold, trap_D(p) > threshold)


def trap_ymin(p):
    """Location of the trap potential minimum for beta < 0.

    Solves |beta|/sqrt(Y) = 4Y - D by bisection on (max(D/4, 0), hi]; the
    left side falls and the right side rises, so the root is unique.
    """
    if not p.beta < 0:
        raise InvalidRegime(f"Y_min exists only for beta < 0, got {p.beta!r}")
    D = trap_D(p)
    b = abs(p.beta)

    def g(y):
        return 4.0 * y - D - b / math.sqrt(y)

    lo = max(D / 4.0, 0.0)
    if lo == 0.0:
        lo = 1e-300
    hi = max(2.0 * lo, 1.0)
    for _ in range(200):
        if g(hi) > 0:
            break
        hi *= 2.0
    if not (g(lo) < 0 < g(hi)):
        raise ConvergenceFailure(f"could not bracket Y_min for {p}")
    return bisect(g, lo, hi, xtol=1e-300, rtol=1e-12, maxiter=2000)


def beta_for_constant_width(delta):
    """|beta| that makes Y_min = delta^2, i.e. 1/delta - 3 delta^3.

    Only attractive couplings can pin the width, and only for
    delta <= 3**-0.25; the boundary itself gives 0.
    """
    if not delta > 0:
        raise InvalidInput(f"delta must be positive, got {delta!r}")
    if delta > DELTA_CONSTANT_WIDTH_MAX:
        raise NoSolution(f"no constant-width coupling for delta={delta} >= 3**-0.25")
    return max(1.0 / delta - 3.0 * delta ** 3, 0.0)


def stability_frequency(p):
    """Small-oscillation frequency about Y_min, in cycles per unit time."""
    y_min = trap_ymin(p)
    return math.sqrt(4.0 + abs(p.beta) / (2.0 * y_min ** 1.5)) / (2.0 * math.pi)


# --- integration ----------------------------------------------------------

def rhs_coefficients(params):
    """(a, b, c) with Y'' = a + b Y + c/sqrt(Y)."""
    if isinstance(params, FreeParams):
        return 1.0 / (2.0 * params.delta0 ** 2), 0.0, float(params.gamma)
    if isinstance(params, TrapParams):
        return trap_D(params), -4.0, -float(params.beta)
    raise TypeError(f"expected FreeParams or TrapParams, got {type(params).__name__}")


def effective_potential(y, params):
    if isinstance(params, FreeParams):
        return free_potential(y, params)
    return trap_potential(y, params)


def integrate_width(params, y0, ydot0=0.0, t_end=1.0, dt=1e-3):
    """Fixed-step RK4 on (Y, Y'); stops early once Y reaches ``Y_FLOOR``."""
    _check_y(y0)
    if not dt > 0:
        raise InvalidInput(f"dt must be positive, got {dt!r}")
    if dt > MAX_DT:
        raise StepTooLarge(f"dt={dt} exceeds {MAX_DT}")
    if not t_end > 0:
        raise InvalidInput(f"t_end must be positive, got {t_end!r}")
    a, b, c = rhs_coefficients(params)
    nsteps = int(math.ceil(t_end / dt - 1e-9))
    t = np.empty(nsteps + 1)
    y = np.empty(nsteps + 1)
    v = np.empty(nsteps + 1)
    count, status = kernels.rk4_width(
        float(a), float(b), float(c), float(y0), float(ydot0), float(dt), nsteps, Y_FLOOR, t, y, v
    )
    if status == kernels.STATUS_NONFINITE:
        raise NonFinite(f"width ODE produced NaN/Inf near t={count * dt}")
    # on collapse, samples [0, count) are valid and count*dt is the failed step's end time
    if status == kernels.STATUS_COMPLETED:
        series_status, stop_time = SeriesStatus.COMPLETED, None
    else:
        series_status, stop_time = SeriesStatus.COLLAPSED, count * dt
    return WidthSeries(
        t[:count].copy(), y[:count].copy(), v[:count].copy(), params, float(dt), series_status, stop_time
    )
