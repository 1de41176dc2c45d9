"""Split-step Fourier integration of the dimensionless NLSE / trapped GPE.

Free particle:  i psi_t = -1/2 psi_xx + sqrt(2 pi) gamma |psi|^2 psi
Harmonic trap:  i psi_t = -1/2 psi_xx + x^2/2 psi + sqrt(2 pi) beta |psi|^2 psi

Each step is a Strang splitting: half kick with the potential plus cubic
term in real space, exact kinetic propagation in Fourier space, half kick.
All three factors are unimodular, so the norm is conserved to roundoff.
"""

from dataclasses import asdict, dataclass, field, fields
import enum
import logging
import math

import numpy as np

from . import kernels
from .core import (
    Grid,
    Observables,
    PotentialKind,
    WaveField,
    WidthConvention,
    _observables,
    gaussian_packet,
    width_measure,
)
from .errors import InvalidInput, NonFinite

log = logging.getLogger(__name__)

COLLAPSE_WIDTH_IN_DX = 6.0


def effective_cubic(potential_kind, coupling):
    """Coefficient of |psi|^2 psi for coupling gamma (free) or beta (trap)."""
    PotentialKind(potential_kind)
    return math.sqrt(2.0 * math.pi) * coupling


@dataclass(frozen=True)
class PdeConfig:
    n: int = 1024
    length: float = 40.0
    potential_kind: PotentialKind = PotentialKind.FREE
    coupling: float = 0.0
    delta0: float = 1.0
    center: float = 0.0
    p0: float = 0.0
    dt: float = 1e-3
    t_end: float = 1.0
    snapshot_stride: int = 100
    width_convention: WidthConvention = WidthConvention.ANSATZ

    def __post_init__(self):
        object.__setattr__(self, "potential_kind", PotentialKind(self.potential_kind))
        object.__setattr__(self, "width_convention", WidthConvention(self.width_convention))
        for name in ("length", "coupling", "delta0", "center", "p0", "dt", "t_end"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
                raise InvalidInput(f"{name} must be a finite number, got {val!r}")
            object.__setattr__(self, name, float(val))
        if not self.dt > 0:
            raise InvalidInput(f"dt must be positive, got {self.dt}")
        if not self.t_end > 0:
            raise InvalidInput(f"t_end must be positive, got {self.t_end}")
        stride = self.snapshot_stride
        if isinstance(stride, bool) or not isinstance(stride, int) or stride < 1:
            raise InvalidInput(f"snapshot_stride must be a positive integer, got {stride!r}")
        # validates n
        Grid(self.n, self.length)

    @property
    def grid(self):
        return Grid(self.n, self.length)

    @property
    def cubic(self):
        return effective_cubic(self.potential_kind, self.coupling)

    @property
    def nsteps(self):
        return int(math.ceil(self.t_end / self.dt - 1e-9))

    def kinetic_phase_bound(self):
        """Largest kinetic phase per half step, dt * k_max^2 / 2."""
        return self.dt * (math.pi * self.n / self.length) ** 2 / 2.0

    def to_dict(self):
        d = asdict(self)
        d["potential_kind"] = self.potential_kind.value
        d["width_convention"] = self.width_convention.value
        return d

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise InvalidInput("PDE config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidInput(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(str(exc)) from exc


class TrajectoryStatus(str, enum.Enum):
    COMPLETED = "Completed"
    COLLAPSE_UNRESOLVABLE = "CollapseUnresolvable"
    NONFINITE = "NonFinite"


@dataclass(frozen=True)
class Trajectory:
    """Observables at every step plus density snapshots.

    ``series`` has one row per recorded time and the columns of
    :attr:`Observables.FIELDS`; ``snapshots`` holds |psi|^2 at
    ``snapshot_times`` (every ``snapshot_stride`` steps, plus the final state).
    """

    config: PdeConfig
    grid: Grid
    series: np.ndarray = field(repr=False)
    snapshot_times: np.ndarray = field(repr=False)
    snapshots: np.ndarray = field(repr=False)
    status: TrajectoryStatus = TrajectoryStatus.COMPLETED

    @property
    def t(self):
        return self.series[:, 0]

    def column(self, name):
        return self.series[:, Observables.FIELDS.index(name)]

    def width(self, convention=None):
        conv = WidthConvention(convention or self.config.width_convention)
        var = self.column("var_x")
        return np.sqrt(var) if conv is WidthConvention.VARIANCE else np.sqrt(2.0 * var)


class _Stepper:
    """Preallocated operators for repeated Strang steps on one grid."""

    def __init__(self, cfg, grid):
        self.grid = grid
        self.v = cfg.potential_kind.values(grid.x)
        self.cubic = cfg.cubic
        self.half_dt = 0.5 * cfg.dt
        self.kinetic = np.exp(-0.5j * grid.k ** 2 * cfg.dt)

    def advance(self, amp):
        kernels.phase_kick(amp, self.v, self.cubic, self.half_dt)
        spec = np.fft.fft(amp)
        spec *= self.kinetic
        amp[:] = np.fft.ifft(spec)
        kernels.phase_kick(amp, self.v, self.cubic, self.half_dt)


def step(wf, cfg):
    """One Strang step of size ``cfg.dt``; returns a new field."""
    if wf.grid != cfg.grid:
        raise InvalidInput("field grid does not match config grid")
    amp = np.array(wf.amp, dtype=np.complex128)
    _Stepper(cfg, wf.grid).advance(amp)
    if not np.all(np.isfinite(amp)):
        raise NonFinite(f"non-finite amplitude after step from t={wf.t}")
    return WaveField(wf.grid, amp, wf.t + cfg.dt)


def initial_field(cfg):
    return gaussian_packet(cfg.grid, cfg.delta0, cfg.center, cfg.p0)


def evolve(cfg, initial=None):
    """Run ``cfg`` to ``t_end`` or until the packet narrows below 6 dx.

    Observables are recorded after every step.  A non-finite field ends the
    run with status ``NonFinite`` instead of raising, so the partial record
    survives for diagnosis.
    """
    wf = initial if initial is not None else initial_field(cfg)
    grid = wf.grid
    if cfg.kinetic_phase_bound() >= math.pi / 4:
        log.info(
            "dt*k_max^2/2 = %.3g exceeds pi/4; high-k modes are phase-aliased, "
            "harmless only while the spectrum stays well inside k_max",
            cfg.kinetic_phase_bound(),
        )
    stepper = _Stepper(cfg, grid)
    amp = np.array(wf.amp, dtype=np.complex128)
    nsteps = cfg.nsteps
    stride = cfg.snapshot_stride
    floor = COLLAPSE_WIDTH_IN_DX * grid.dx
    conv = cfg.width_convention

    rows = np.empty((nsteps + 1, 8))
    snap_t = [wf.t]
    snaps = [np.abs(amp) ** 2]
    obs = _observables(amp, grid, wf.t, stepper.v, stepper.cubic)
    rows[0] = obs.as_tuple()
    status = TrajectoryStatus.COMPLETED
    last = 0
    for i in range(1, nsteps + 1):
        t = wf.t + i * cfg.dt
        stepper.advance(amp)
        if not np.all(np.isfinite(amp)):
            status = TrajectoryStatus.NONFINITE
            break
        try:
            obs = _observables(amp, grid, t, stepper.v, stepper.cubic)
        except NonFinite:
            status = TrajectoryStatus.NONFINITE
            break
        rows[i] = obs.as_tuple()
        last = i
        if i % stride == 0:
            snap_t.append(t)
            snaps.append(np.abs(amp) ** 2)
        if width_measure(obs, conv) < floor:
            status = TrajectoryStatus.COLLAPSE_UNRESOLVABLE
            break
    if last % stride != 0 and status is not TrajectoryStatus.NONFINITE:
        snap_t.append(rows[last, 0])
        snaps.append(np.abs(amp) ** 2)
    return Trajectory(
        cfg,
        grid,
        rows[: last + 1].copy(),
        np.array(snap_t),
        np.vstack(snaps),
        status,
    )
