from typing import Optional

import numpy as np

from tunnelkit.continuity.density import accumulated_rate, resolve_symbol
from tunnelkit.continuity.rules import MadelungCoefficientRule
from tunnelkit.hamflow.fan import TrajectoryFan
from tunnelkit.models.coefficient import MadelungCoefficientConfig
from tunnelkit.symbol.base import BaseHamiltonianSymbol
from tunnelkit.symbol.functions import ScalarFunction


def transport_amplitude(
    fan: TrajectoryFan,
    phi0: ScalarFunction,
    symbol: Optional[BaseHamiltonianSymbol] = None,
) -> np.ndarray:
    """psi = phi0(x0) exp(1/2 int H_xp dt) / sqrt(J) along every trajectory.

    NaN where J <= 0. With rho0 = phi0^2 and the Madelung coefficient rule,
    psi^2 is the Cauchy-formula density.
    """
    symbol = resolve_symbol(fan, symbol)
    rule = MadelungCoefficientRule(MadelungCoefficientConfig())
    int_a = accumulated_rate(fan, rule, symbol)
    J = np.where(fan.J > 0.0, fan.J, np.nan)
    return phi0(fan.labels)[None, :] * np.exp(-0.5 * int_a) / np.sqrt(J)
