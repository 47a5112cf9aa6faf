import numpy as np

from tunnelkit.cli.artifacts import at_least, at_most
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome
from tunnelkit.continuity.rules import create_coefficient_rule
from tunnelkit.continuity.shock import (
    ShockStratum,
    advance_amplitude,
    amplitude_step,
    stratum_velocity,
)
from tunnelkit.continuity.tracking import track_strata
from tunnelkit.errors import PreconditionError
from tunnelkit.models.coefficient import VelocityCoefficientConfig, ZeroCoefficientConfig
from tunnelkit.models.experiment import (
    ShockMergeExperimentConfig,
    ShockOraclesExperimentConfig,
)
from tunnelkit.symbol.kolmogorov_feller import KolmogorovFellerSymbol

# minimal |p_l - p_r| among the sampled momentum pairs
MIN_SAMPLED_JUMP = 1e-3


def stationary_shock_amplitude(rule, t: float, dt: float) -> np.ndarray:
    """e(t) of the symmetric stationary shock u = -sign(x) with R = 1 on both sides."""
    stratum = ShockStratum(id=0, birth_time=0.0)
    stratum.record(0.0, 0.0, 0.0, 0.0)
    steps = int(round(t / dt))
    for n in range(1, steps + 1):
        e = amplitude_step(stratum, 1.0, 1.0, 1.0, -1.0, rule, dt)
        stratum.record(n * dt, 0.0, 0.0, e)
    return np.array(stratum.e)


class ShockOraclesExperiment(BaseExperiment[ShockOraclesExperimentConfig]):
    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        symbol = self.symbol
        if not isinstance(symbol, KolmogorovFellerSymbol) or not symbol.intensity.is_zero():
            raise PreconditionError("the Rankine-Hugoniot oracle needs H = A(x) p^2 + V")

        rng = np.random.default_rng(config.seed)
        pairs = []
        while len(pairs) < config.samples:
            p_left, p_right = rng.uniform(-config.momentum_range, config.momentum_range, 2)
            if abs(p_left - p_right) >= MIN_SAMPLED_JUMP:
                pairs.append((p_left, p_right))
        positions = rng.uniform(self.scenario.grids.x_min, self.scenario.grids.x_max, len(pairs))
        rh_rows = []
        for x, (p_left, p_right) in zip(positions, pairs):
            velocity = stratum_velocity(symbol, x, p_left, p_right)
            oracle = float(symbol.diffusion(x)) * (p_left + p_right)
            rh_rows.append((x, p_left, p_right, velocity, abs(velocity - oracle)))
        rh_error = max(row[-1] for row in rh_rows)
        self.writer.write_csv(
            "rankine_hugoniot.csv", ("x", "p_left", "p_right", "velocity", "error"), rh_rows
        )

        t = np.linspace(0.0, config.t, int(round(config.t / config.dt)) + 1)
        flux_only = stationary_shock_amplitude(
            create_coefficient_rule(ZeroCoefficientConfig()), config.t, config.dt
        )
        with_reaction = stationary_shock_amplitude(
            create_coefficient_rule(VelocityCoefficientConfig(coefficients=[config.reaction])),
            config.t,
            config.dt,
        )
        flux_oracle = 2.0 * t
        # de/dt = 2 + f e with constant f
        reaction_oracle = 2.0 * np.expm1(config.reaction * t) / config.reaction
        self.writer.write_csv(
            "amplitude.csv",
            ("t", "e_flux", "e_flux_oracle", "e_reaction", "e_reaction_oracle"),
            zip(t, flux_only, flux_oracle, with_reaction, reaction_oracle),
        )
        flux_error = float(abs(flux_only[-1] - flux_oracle[-1]))
        reaction_error = float(abs(with_reaction[-1] - reaction_oracle[-1]))
        return ExperimentOutcome(
            checks=[
                at_most("rankine_hugoniot_error", rh_error, config.velocity_tol),
                at_most("amplitude_flux_error", flux_error, config.flux_tol),
                at_most("amplitude_reaction_error", reaction_error, config.reaction_tol),
            ],
            metrics={
                "rankine_hugoniot_error": rh_error,
                "amplitude_flux_error": flux_error,
                "amplitude_reaction_error": reaction_error,
                "amplitude_final": float(flux_only[-1]),
            },
        )


class ShockMergeExperiment(BaseExperiment[ShockMergeExperimentConfig]):
    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        fan = self.evolve()
        tracking = track_strata(
            fan, self.density(), self.coefficient_rule(), logger=self.logger
        )
        children = [s for s in tracking.strata if len(s.parents) == 2]
        kirchhoff_error = 0.0
        for child in children:
            left, right = (tracking.stratum(i) for i in child.parents)
            # parent amplitudes carried to the child's first sample
            parents_e = sum(
                advance_amplitude(
                    parent.e[-1],
                    parent.flux[-1],
                    parent.reaction[-1],
                    child.times[0] - parent.times[-1],
                )
                for parent in (left, right)
            )
            kirchhoff_error = max(kirchhoff_error, abs(child.e[0] - parents_e))
            self.logger.info(
                "strata %d + %d -> %d at t=%.6f, x=%.6f, e=%.6g",
                left.id,
                right.id,
                child.id,
                child.birth_time,
                child.x[0],
                child.e[0],
            )
        mass_drift = tracking.mass_drift()
        self.writer.write_csv(
            "strata.csv",
            ("id", "t", "x", "velocity", "e"),
            (row for stratum in tracking.strata for row in stratum.rows()),
        )
        self.writer.write_json("merge_graph.json", tracking.merge_graph())
        self.writer.write_csv(
            "mass.csv",
            ("t", "regular", "singular", "total"),
            zip(
                tracking.times,
                tracking.regular_mass,
                tracking.singular_mass,
                tracking.total_mass,
            ),
        )
        return ExperimentOutcome(
            checks=[
                at_least("merges", float(len(children)), float(config.min_merges)),
                at_most("kirchhoff_error", kirchhoff_error, config.kirchhoff_tol),
                at_most("mass_drift", mass_drift, config.mass_tol),
            ],
            metrics={
                "merges": float(len(children)),
                "strata": float(len(tracking.strata)),
                "kirchhoff_error": kirchhoff_error,
                "mass_drift": mass_drift,
                "singular_mass_final": float(tracking.singular_mass[-1]),
            },
        )
