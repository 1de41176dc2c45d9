"""Canned parameter sets for each figure, taken from the figure captions.

Figures are numbered in the order they appear.  Where a caption leaves a
value open (run length, initial momentum, plot range) the choice made here
is noted inline.
"""

from dataclasses import dataclass, field

from . import variational as var
from .pde import PdeConfig


@dataclass(frozen=True)
class Panel:
    label: str
    kind: str  # "potential", "variational" or "pde"
    params: object = None
    y0: float | None = None
    t_end: float = 0.0
    y_max: float = 0.0
    config: PdeConfig | None = None


@dataclass(frozen=True)
class Figure:
    name: str
    title: str
    panels: tuple = field(default_factory=tuple)


def _free_ode(gamma, delta0, t_end=5.0):
    return Panel(f"gamma={gamma:g}_delta0={delta0:g}", "variational", var.FreeParams(gamma, delta0), delta0**2, t_end)


def _trap_ode(beta, delta, t_end=20.0):
    return Panel(f"beta={beta:.6g}_delta={delta:g}", "variational", var.TrapParams(beta, delta), delta**2, t_end)


def _free_pde(gamma, delta0, t_end, p0=1.0):
    cfg = PdeConfig(potential_kind="free", coupling=gamma, delta0=delta0, p0=p0, t_end=t_end)
    return Panel(f"gamma={gamma:g}_delta0={delta0:g}", "pde", config=cfg)


def _trap_pde(beta, delta, t_end=20.0, p0=0.0):
    cfg = PdeConfig(potential_kind="harmonic", coupling=beta, delta0=delta, p0=p0, t_end=t_end)
    return Panel(f"beta={beta:g}_delta={delta:g}_p0={p0:g}", "pde", config=cfg)


_BETA_075 = -var.beta_for_constant_width(0.75)

FIGURES = {
    f.name: f
    for f in (
        Figure(
            "fig1",
            "free effective potential V(Y), repulsive and attractive",
            (
                Panel("gamma=0.5_delta0=2", "potential", var.FreeParams(0.5, 2.0), y_max=40.0),
                Panel("gamma=-0.5_delta0=2", "potential", var.FreeParams(-0.5, 2.0), y_max=40.0),
            ),
        ),
        Figure(
            "fig2",
            "free width, delta0 = 2 above the critical width",
            (_free_ode(-0.5, 2.0), _free_ode(-1.0, 2.0), _free_ode(-2.0, 2.0)),
        ),
        # caption prints gamma = 1.0, 2.0 under "gamma < 0"; taken as attractive
        Figure(
            "fig3",
            "free width, delta0 below the critical width",
            (_free_ode(-0.5, 0.5), _free_ode(-1.0, 0.4), _free_ode(-2.0, 0.2)),
        ),
        Figure(
            "fig4",
            "trap effective potential V(Y), repulsive and attractive",
            (
                Panel("beta=1_delta=0.75", "potential", var.TrapParams(1.0, 0.75), y_max=2.0),
                Panel("beta=-1_delta=0.75", "potential", var.TrapParams(-1.0, 0.75), y_max=2.0),
            ),
        ),
        Figure("fig5", "trap width on the constant-width locus, delta = 0.75", (_trap_ode(_BETA_075, 0.75),)),
        # caption "beta = 0.8" in the attractive discussion; taken as -0.8
        Figure("fig6", "trap width off the locus, delta = 0.75, beta = -0.8", (_trap_ode(-0.8, 0.75),)),
        Figure("fig7", "NLSE, gamma = 2, delta0 = 2: spreading", (_free_pde(2.0, 2.0, 5.0),)),
        Figure("fig8", "NLSE, gamma = -2, delta0 = 2: focusing near t = 2", (_free_pde(-2.0, 2.0, 3.0),)),
        Figure("fig9", "NLSE, gamma = -0.5, delta0 = 0.5: spreading", (_free_pde(-0.5, 0.5, 5.0),)),
        Figure(
            "fig10",
            "NLSE density panels",
            (_free_pde(-0.5, 0.5, 5.0), _free_pde(-2.0, 2.0, 5.0), _free_pde(2.0, 2.0, 5.0)),
        ),
        Figure("fig11", "trapped GPE, beta = 1, delta = 0.75", (_trap_pde(1.0, 0.75),)),
        Figure("fig12", "trapped GPE, beta = -0.01, delta = 0.75: off the locus", (_trap_pde(-0.01, 0.75),)),
        Figure("fig13", "trapped GPE, beta = -1.625, delta = 0.5: on the locus", (_trap_pde(-1.625, 0.5),)),
        # "small initial momentum" for the last panel: p0 = 0.5
        Figure(
            "fig14",
            "trapped GPE density panels",
            (
                _trap_pde(1.0, 0.75),
                _trap_pde(-0.01, 0.75),
                _trap_pde(-1.625, 0.5),
                _trap_pde(-1.625, 0.5, p0=0.5),
            ),
        ),
    )
}
