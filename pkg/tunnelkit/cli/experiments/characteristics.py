import numpy as np

from tunnelkit.cli.artifacts import at_least, at_most, holds
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome
from tunnelkit.hamflow.caustic import detect_caustic
from tunnelkit.hamflow.fan import jacobian_field
from tunnelkit.manifold.strata import singular_support
from tunnelkit.models.experiment import CharacteristicsExperimentConfig

JACOBIAN_FIELD_FLOOR = 1e-3


class CharacteristicsExperiment(BaseExperiment[CharacteristicsExperimentConfig]):
    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        fan = self.evolve()
        events = detect_caustic(fan)
        self.logger.info(
            "%d labels to t=%g: %d caustic events", fan.labels.size, fan.horizon, len(events)
        )

        stride = slice(None, None, config.label_stride)
        self.writer.write_csv(
            "fan.csv",
            ("label", "t", "x", "p", "S", "J"),
            (
                (label, t, x, p, S, J)
                for k, t in enumerate(fan.tgrid)
                for label, x, p, S, J in zip(
                    fan.labels[stride],
                    fan.x[k, stride],
                    fan.p[k, stride],
                    fan.S[k, stride],
                    fan.J[k, stride],
                )
            ),
        )
        self.writer.write_json("caustics.json", [event.dict() for event in events])

        x_final = fan.x[-1]
        xs = np.linspace(float(x_final.min()), float(x_final.max()), config.phase_points)
        phase = self.global_phase(fan, fan.horizon, xs)
        self.writer.write_csv("phase.csv", ("t", "x", "phi", "branch", "p"), phase.rows())
        strata = singular_support(fan, n_points=config.phase_points)
        self.writer.write_json("strata.json", [stratum.dict() for stratum in strata])

        centre = fan.labels.size // 2
        outcome = ExperimentOutcome(
            metrics={
                "caustic_count": float(len(events)),
                "t_star": events[0].t_star if events else None,
                "label_star": events[0].label_star if events else None,
                "x_star": events[0].x_star if events else None,
                "min_jacobian": float(np.min(fan.J)),
                "kink_count": float(len(phase.kinks)),
                "strata_count": float(len(strata)),
                "jacobian_discrepancy": jacobian_field(fan).max_relative_discrepancy(
                    floor=JACOBIAN_FIELD_FLOOR
                ),
                "x_final_centre": float(x_final[centre]),
                "p_final_centre": float(fan.p[-1, centre]),
            }
        )
        checks = outcome.checks
        if config.expect_caustic is not None:
            checks.append(
                holds("caustic_presence", bool(events) == config.expect_caustic, len(events))
            )
        if config.expected_t_star is not None:
            checks.append(
                at_most(
                    "t_star_error",
                    abs(events[0].t_star - config.expected_t_star) if events else np.inf,
                    config.t_star_tol,
                )
            )
        if config.expected_label is not None:
            checks.append(
                at_most(
                    "label_star_error",
                    abs(events[0].label_star - config.expected_label) if events else np.inf,
                    config.label_tol,
                )
            )
        if config.min_jacobian is not None:
            checks.append(
                at_least("min_jacobian", float(np.min(fan.J)), config.min_jacobian)
            )
        return outcome
