"""Periodic grid, Gaussian packets and quadrature observables.

Everything here is in the dimensionless units of the simulations
(hbar = m = 1, and omega = 1 for the trap), so a field evolves under

    i psi_t = -1/2 psi_xx + V(x) psi + c |psi|^2 psi

with V = 0 (free particle) or V = x^2/2 (harmonic trap).
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np

from . import kernels
from .errors import GridTooCoarse, InvalidInput, NonFinite, PacketOutOfDomain


class PotentialKind(str, enum.Enum):
    FREE = "free"
    HARMONIC = "harmonic"

    def values(self, x):
        if self is PotentialKind.FREE:
            return np.zeros_like(x)
        return 0.5 * x * x


class WidthConvention(str, enum.Enum):
    """How a packet width is read off the position variance.

    ``VARIANCE`` returns sqrt(<x^2> - <x>^2).  ``ANSATZ`` returns the Delta of
    exp(-(x - x0)^2 / (2 Delta^2)), which is sqrt(2) times larger.
    """

    VARIANCE = "variance"
    ANSATZ = "ansatz"


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice on [-L/2, L/2) with its FFT momentum lattice."""

    n: int
    length: float
    x: np.ndarray = field(init=False, repr=False, compare=False)
    k: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or int(n) != n:
            raise InvalidInput(f"grid size must be an integer, got {n!r}")
        n = int(n)
        if n < 8 or n & (n - 1):
            raise InvalidInput(f"grid size must be a power of two >= 8, got {n}")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise InvalidInput(f"domain length must be positive, got {self.length!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "length", float(self.length))
        dx = self.length / n
        object.__setattr__(self, "x", _readonly(-0.5 * self.length + dx * np.arange(n)))
        object.__setattr__(self, "k", _readonly(2.0 * np.pi * np.fft.fftfreq(n, d=dx)))

    @property
    def dx(self):
        return self.length / self.n

    @property
    def k_max(self):
        return np.pi * self.n / self.length


@dataclass(frozen=True)
class WaveField:
    grid: Grid
    amp: np.ndarray = field(repr=False)
    t: float = 0.0

    def __post_init__(self):
        amp = np.array(self.amp, dtype=np.complex128)
        if amp.shape != (self.grid.n,):
            raise InvalidInput(f"amplitude shape {amp.shape} does not match grid size {self.grid.n}")
        if not np.all(np.isfinite(amp)):
            raise NonFinite("wave field contains NaN or Inf")
        object.__setattr__(self, "amp", _readonly(amp))
        object.__setattr__(self, "t", float(self.t))

    def norm2(self):
        return self.grid.dx * float(np.vdot(self.amp, self.amp).real)

    def density(self):
        return np.abs(self.amp) ** 2


@dataclass(frozen=True)
class Observables:
    t: float
    norm2: float
    mean_x: float
    mean_p: float
    var_x: float
    mean_p2: float
    quartic: float
    energy: float

    FIELDS = ("t", "norm2", "mean_x", "mean_p", "var_x", "mean_p2", "quartic", "energy")

    def as_tuple(self):
        return tuple(getattr(self, f) for f in self.FIELDS)


def gaussian_packet(grid, delta0, center=0.0, p0=0.0):
    """Normalized Gaussian exp(-(x-center)^2/(2 delta0^2)) exp(i p0 x) on ``grid``.

    The packet must be resolvable (delta0 >= 4 dx) and fit in the box with
    five widths to spare on either side of ``center``.
    """
    if not delta0 > 0:
        raise InvalidInput(f"delta0 must be positive, got {delta0!r}")
    if delta0 < 4.0 * grid.dx:
        raise GridTooCoarse(f"delta0={delta0} is below 4*dx={4.0 * grid.dx:.6g}")
    if abs(center) + 5.0 * delta0 > 0.5 * grid.length:
        raise PacketOutOfDomain(
            f"|center| + 5*delta0 = {abs(center) + 5.0 * delta0:.6g} exceeds L/2 = {0.5 * grid.length:.6g}"
        )
    x = grid.x
    amp = (
        np.pi ** -0.25
        / math.sqrt(delta0)
        * np.exp(-((x - center) ** 2) / (2.0 * delta0 * delta0))
        * np.exp(1j * p0 * x)
    )
    amp /= math.sqrt(grid.dx * float(np.vdot(amp, amp).real))
    return WaveField(grid, amp, 0.0)


def momentum_moments(amp, grid):
    """<p> and <p^2> via the spectrum: sum k^n |psi_k|^2 with Parseval scaling."""
    spec = np.fft.fft(amp)
    pk = spec.real * spec.real + spec.imag * spec.imag
    scale = grid.dx / grid.n
    k = grid.k
    return scale * float(np.dot(k, pk)), scale * float(np.dot(k * k, pk))


def observables(wf, potential=PotentialKind.FREE, cubic=0.0, potential_values=None):
    """Moments and energy of ``wf``.

    ``cubic`` is the coefficient c of c|psi|^2 psi in the equation of motion;
    it only enters the energy, E = int 1/2|psi_x|^2 + V|psi|^2 + c/2 |psi|^4.
    Pass ``potential_values`` to skip re-evaluating V on the grid.
    """
    grid = wf.grid
    if potential_values is None:
        potential_values = PotentialKind(potential).values(grid.x)
    return _observables(wf.amp, grid, wf.t, potential_values, cubic)


def _observables(amp, grid, t, v, cubic):
    dx = grid.dx
    s0, s1, s2, s4, sv = kernels.real_space_moments(amp, grid.x, v)
    mean_p, mean_p2 = momentum_moments(amp, grid)
    norm2 = dx * s0
    mean_x = dx * s1
    var_x = dx * s2 - mean_x * mean_x
    quartic = dx * s4
    energy = 0.5 * mean_p2 + dx * sv + 0.5 * cubic * quartic
    obs = Observables(float(t), norm2, mean_x, mean_p, var_x, mean_p2, quartic, energy)
    if not all(math.isfinite(val) for val in obs.as_tuple()):
        raise NonFinite(f"non-finite moment at t={t}: {obs}")
    return obs


def width_measure(obs, convention=WidthConvention.ANSATZ):
    convention = WidthConvention(convention)
    if convention is WidthConvention.VARIANCE:
        return math.sqrt(obs.var_x)
    return math.sqrt(2.0 * obs.var_x)
