from typing import Dict, List, Tuple

import numpy as np

from tunnelkit.cli.artifacts import at_most, holds
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome, time_grid
from tunnelkit.models.experiment import SurgeryExperimentConfig
from tunnelkit.surgery.blend import BaseBlendProfile, create_blend_profile
from tunnelkit.surgery.blended_fan import (
    BlendedFan,
    backflow_and_blend,
    blended_fan_homogeneous,
    captured_mass,
    fit_floor_constant,
    limiting_jacobian_deviation,
)
from tunnelkit.surgery.insertion import Insertion, insertion_initial_data
from tunnelkit.surgery.manifold_surgery import surgery_from_fan


class SurgeryExperiment(BaseExperiment[SurgeryExperimentConfig]):
    """Blended characteristics for every eps; checks the Jacobian floor J >= C eps."""

    @property
    def auto_shift(self) -> bool:
        return self.scenario.surgery.shift == "auto"

    def blend(self, epsilon: float, t_star: float) -> BaseBlendProfile:
        surgery = self.scenario.surgery
        return create_blend_profile(
            surgery.profile,
            epsilon,
            surgery.beta,
            t_star,
            shift=1.0 if self.auto_shift else float(surgery.shift),
            logger=self.logger,
        )

    def homogeneous(self) -> Tuple[Dict[float, BlendedFan], Insertion, dict]:
        config = self.get_experiment_config()
        surgery = self.scenario.surgery
        tgrid = self.tgrid()
        insertion = insertion_initial_data(
            self.initial_data.p0, config.x0_star, surgery.beta, self.symbol, tgrid
        )
        labels = self.labels()
        results = {
            epsilon: blended_fan_homogeneous(
                self.symbol,
                insertion,
                labels,
                self.blend(epsilon, insertion.t_star),
                tgrid,
                S0=self.initial_data.S0,
                c_rule=surgery.c_rule,
                auto_shift=self.auto_shift,
                max_step=self.scenario.grids.max_step,
                logger=self.logger,
            )
            for epsilon in self.epsilons
        }
        report = {
            "x0_star": insertion.x0_star,
            "beta": insertion.beta,
            "t_star": insertion.t_star,
            "u_left": insertion.u_left,
            "u_right": insertion.u_right,
        }
        return results, insertion, report

    def inhomogeneous(self) -> Tuple[Dict[float, BlendedFan], dict]:
        config = self.get_experiment_config()
        surgery = self.scenario.surgery
        grids = self.scenario.grids
        surgered = surgery_from_fan(
            self.evolve(), beta=surgery.beta, t1=surgery.backflow_time, max_step=grids.max_step
        )
        duration = config.duration if config.duration is not None else grids.t_max - surgered.t0
        tgrid = time_grid(surgered.t0 + duration, grids.output_dt, t0=surgered.t0)
        results = {
            epsilon: backflow_and_blend(
                self.symbol,
                surgered,
                self.blend(epsilon, surgered.t1_star),
                tgrid,
                c_rule=surgery.c_rule,
                auto_shift=self.auto_shift,
                max_step=grids.max_step,
                logger=self.logger,
            )
            for epsilon in self.epsilons
        }
        return results, surgered.report()

    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        insertion = None
        if config.construction == "homogeneous":
            results, insertion, report = self.homogeneous()
        else:
            results, report = self.inhomogeneous()
        self.writer.write_json("surgery.json", report)

        outcome = ExperimentOutcome()
        density = self.density()
        rows = []
        floors: List[float] = []
        minima: List[float] = []
        for epsilon, result in results.items():
            fan = result.fan
            window_min = np.min(fan.J[:, result.window], axis=1)
            rows.extend(
                (epsilon, t, j_min, mass)
                for t, j_min, mass in zip(fan.tgrid, window_min, captured_mass(result, density))
            )
            sorted_x = bool(np.all(np.diff(fan.x, axis=1) > 0))
            outcome.checks.append(holds(f"non_crossing[eps={epsilon:g}]", result.non_crossing))
            outcome.checks.append(holds(f"sorted[eps={epsilon:g}]", sorted_x))
            outcome.metrics[f"shift[eps={epsilon:g}]"] = result.shift
            if result.floor_constant is not None:
                floors.append(result.floor_constant)
                outcome.metrics[f"floor_constant[eps={epsilon:g}]"] = result.floor_constant
                outcome.checks.append(
                    holds(
                        f"floor_positive[eps={epsilon:g}]",
                        result.floor_constant > 0,
                        result.floor_constant,
                    )
                )
            minimum = result.min_window_jacobian()
            if minimum is not None:
                minima.append(minimum)
            self.logger.info(
                "eps=%g: A=%g, C=%s, non-crossing=%s",
                epsilon,
                result.shift,
                result.floor_constant,
                result.non_crossing,
            )
        self.writer.write_csv(
            "floor.csv", ("epsilon", "t", "min_window_J", "block_mass"), rows
        )

        if floors:
            outcome.metrics["floor_constant"] = floors[-1]
        if len(floors) > 1 and min(floors) > 0:
            outcome.checks.append(
                at_most("floor_stability", max(floors) / min(floors), config.floor_stability)
            )
        if len(minima) == len(results) > 1:
            outcome.metrics["floor_fit"] = fit_floor_constant(self.epsilons, minima)
        if insertion is not None and floors:
            deviations = limiting_jacobian_deviation(list(results.values()), insertion)
            for epsilon, deviation in zip(results, deviations):
                outcome.metrics[f"limiting_deviation[eps={epsilon:g}]"] = deviation
        return outcome
