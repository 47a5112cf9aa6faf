import numpy as np

from tunnelkit.cli.artifacts import at_most
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome
from tunnelkit.errors import PreconditionError
from tunnelkit.models.experiment import ReferenceExperimentConfig
from tunnelkit.reference.grid import GridField
from tunnelkit.reference.heat_kernel import heat_kernel_convolve
from tunnelkit.reference.parabolic import fd_parabolic_solve, scheme_grid
from tunnelkit.symbol.functions import ConstantFunction
from tunnelkit.symbol.kolmogorov_feller import KolmogorovFellerSymbol


class ReferenceExperiment(BaseExperiment[ReferenceExperimentConfig]):
    """Pure diffusion of a Gaussian: heat kernel against the theta-scheme."""

    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        if not self._pure_diffusion():
            raise PreconditionError("the cross-check needs a pure constant-diffusion symbol")
        epsilon = self.epsilons[0]
        xgrid = scheme_grid(self.scenario.reference, epsilon)
        u0 = GridField.from_values(
            xgrid, [0.0], np.exp(-(xgrid**2) / (2.0 * config.width**2)), epsilon
        )
        symbol = self.symbol
        diffusion = float(symbol.diffusion(0.0))
        kernel = heat_kernel_convolve(u0, config.t, epsilon, diffusion, logger=self.logger)
        fd = fd_parabolic_solve(
            symbol, u0, epsilon, [0.0, config.t], self.scenario.reference, logger=self.logger
        )
        exact = kernel.values[0]
        approx = fd.at(config.t).values[0]
        relative_error = float(np.max(np.abs(approx - exact)) / np.max(exact))
        mass = fd.mass()
        mass_drift = float(np.max(np.abs(mass / mass[0] - 1.0)))
        self.logger.info(
            "eps=%g: relative sup error %.3e, mass drift %.3e",
            epsilon,
            relative_error,
            mass_drift,
        )
        self.writer.write_csv(
            "reference.csv",
            ("t", "x", "u_kernel", "u_fd"),
            ((config.t, x, k, f) for x, k, f in zip(xgrid, exact, approx)),
        )
        self.writer.write_csv("fd.csv", ("t", "x", "u"), fd.rows())
        return ExperimentOutcome(
            checks=[
                at_most("relative_sup_error", relative_error, config.relative_tol),
                at_most("mass_drift", mass_drift, config.mass_tol),
            ],
            metrics={
                "relative_sup_error": relative_error,
                "mass_drift": mass_drift,
                "kernel_mass_leakage": kernel.mass_leakage,
                "nodes": float(xgrid.size),
            },
        )

    def _pure_diffusion(self) -> bool:
        symbol = self.symbol
        return (
            isinstance(symbol, KolmogorovFellerSymbol)
            and isinstance(symbol.diffusion, ConstantFunction)
            and symbol.potential.is_zero()
            and symbol.potential_time is None
            and symbol.intensity.is_zero()
        )
