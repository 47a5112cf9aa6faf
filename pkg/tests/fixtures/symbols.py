from typing import List, Optional

import numpy as np

from tunnelkit.hamflow.fan import TrajectoryFan, evolve_fan
from tunnelkit.hamflow.initial import InitialData, InitialManifold, uniform_labels
from tunnelkit.models.function import (
    ConstantFunctionConfig,
    FunctionConfig,
    LogCoshFunctionConfig,
    PolynomialFunctionConfig,
    SineFunctionConfig,
    SumFunctionConfig,
)
from tunnelkit.models.initial_data import InitialDataConfig
from tunnelkit.models.symbol import (
    JumpSymbolConfig,
    PotentialSymbolConfig,
    QuadraticSymbolConfig,
)
from tunnelkit.symbol.factory import create_symbol


def quadratic_symbol(diffusion: float = 1.0):
    return create_symbol(
        QuadraticSymbolConfig(diffusion=ConstantFunctionConfig(value=diffusion))
    )


def potential_symbol(potential: FunctionConfig, diffusion: Optional[FunctionConfig] = None):
    return create_symbol(
        PotentialSymbolConfig(
            diffusion=diffusion or ConstantFunctionConfig(value=1.0),
            potential=potential,
        )
    )


def sine_potential_symbol(amplitude: float = 0.1):
    return potential_symbol(SineFunctionConfig(amplitude=amplitude))


def jump_symbol(intensity: float = 1.0, jump_size: float = 1.0, diffusion: float = 1.0):
    return create_symbol(
        JumpSymbolConfig(
            diffusion=ConstantFunctionConfig(value=diffusion),
            intensity=ConstantFunctionConfig(value=intensity),
            jump_size=jump_size,
        )
    )


def initial_data(phase="tanh-plus") -> InitialData:
    return InitialData.from_config(InitialDataConfig(phase=phase))


def bumps_phase(centers: List[float], width: float = 0.5, slope: float = 1.0):
    """Concave bumps -slope*width*ln cosh((x - c)/width), one fold per bump."""
    return SumFunctionConfig(
        terms=[
            LogCoshFunctionConfig(slope=-slope, center=c, width=width) for c in centers
        ]
    )


def linear_plus(phase: FunctionConfig, slope: float) -> SumFunctionConfig:
    return SumFunctionConfig(
        terms=[PolynomialFunctionConfig(coefficients=[0.0, slope]), phase]
    )


def make_fan(
    symbol,
    phase="tanh-plus",
    x_min: float = -3.0,
    x_max: float = 3.0,
    spacing: float = 2e-3,
    t_max: float = 1.0,
    dt_out: float = 0.01,
    max_step: Optional[float] = None,
) -> TrajectoryFan:
    labels = uniform_labels(x_min, x_max, spacing)
    manifold = InitialManifold.from_initial_data(initial_data(phase), labels)
    tgrid = np.linspace(0.0, t_max, int(round(t_max / dt_out)) + 1)
    return evolve_fan(symbol, manifold, tgrid, max_step=max_step)
