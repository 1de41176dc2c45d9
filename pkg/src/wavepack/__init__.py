"""Gaussian wave-packet dynamics for the 1D NLSE and the harmonically trapped GPE.

Two independent engines: the width ODE for Y = Delta^2 (:mod:`wavepack.variational`)
and a split-step Fourier PDE solver (:mod:`wavepack.pde`), with
:mod:`wavepack.analysis` to compare them.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Grid,
    Observables,
    PotentialKind,
    WaveField,
    WidthConvention,
    gaussian_packet,
    observables,
    width_measure,
)
from .variational import (  # noqa: E402
    FreeParams,
    TrapParams,
    WidthSeries,
    WidthState,
    beta_for_constant_width,
    free_critical,
    free_potential,
    free_rhs,
    integrate_width,
    stability_frequency,
    trap_D,
    trap_extrema_threshold,
    trap_potential,
    trap_rhs,
    trap_ymin,
)
from .pde import PdeConfig, Trajectory, effective_cubic, evolve, step  # noqa: E402
from .analysis import (  # noqa: E402
    WidthTrace,
    classify_trace,
    compare_traces,
    density_matrix,
    estimate_frequency,
    sweep_constant_width,
)
