from typing import List

import numpy as np

from tunnelkit.cli.artifacts import at_most, holds, strictly_decreasing
from tunnelkit.cli.experiments.base import BaseExperiment, ExperimentOutcome
from tunnelkit.continuity.madelung import transport_amplitude
from tunnelkit.errors import PreconditionError
from tunnelkit.models.experiment import VaradhanExperimentConfig
from tunnelkit.reference.grid import GridField
from tunnelkit.reference.parabolic import fd_parabolic_solve, scheme_grid
from tunnelkit.reference.varadhan import (
    kink_from_curvature,
    leading_term_ratio,
    varadhan_extract,
)

AMPLITUDE_FIELD = "transport_amplitude"
KINK_SEARCH_POINTS = 401


def varadhan_bound(epsilon: float, factor: float) -> float:
    return factor * epsilon * abs(np.log(epsilon))


class VaradhanExperiment(BaseExperiment[VaradhanExperimentConfig]):
    """Compares -eps ln u of the finite-difference solution with min_j S_j."""

    def solve(self, epsilon: float) -> GridField:
        config = self.get_experiment_config()
        scheme = self.scenario.reference
        u0 = GridField.from_initial_data(
            self.initial_data, epsilon, scheme_grid(scheme, epsilon)
        )
        return fd_parabolic_solve(
            self.symbol, u0, epsilon, [0.0, config.t], scheme, logger=self.logger
        )

    def run(self) -> ExperimentOutcome:
        config = self.get_experiment_config()
        fan = self.evolve(config.t)
        xs = np.linspace(config.window[0], config.window[1], config.samples)
        fields = {}
        if config.leading_term_points > 0:
            fields[AMPLITUDE_FIELD] = transport_amplitude(
                fan, self.initial_data.amplitude, self.symbol
            )
        phase = self.global_phase(fan, config.t, xs, fields)
        regular = np.ones(xs.size, dtype=bool)
        for kink in phase.kinks:
            regular &= np.abs(xs - kink.x) >= config.kink_distance
        if not np.any(regular):
            raise PreconditionError("every sample point lies next to a kink")

        outcome = ExperimentOutcome()
        errors: List[float] = []
        deviations: List[float] = []
        rows = []
        solutions = {}
        for epsilon in self.epsilons:
            solution = self.solve(epsilon)
            solutions[epsilon] = solution
            phase_field = varadhan_extract(solution)
            fd_phase = phase_field.sample(xs, config.t)
            error = float(np.max(np.abs(fd_phase - phase.phi)[regular]))
            errors.append(error)
            self.logger.info("eps=%g: Varadhan error %.3e", epsilon, error)
            rows.extend(
                (epsilon, x, value, phi, bool(r))
                for x, value, phi, r in zip(xs, fd_phase, phase.phi, regular)
            )
            outcome.metrics[f"varadhan_error[eps={epsilon:g}]"] = error
            outcome.checks.append(
                at_most(
                    f"varadhan_error[eps={epsilon:g}]",
                    error,
                    varadhan_bound(epsilon, config.bound_factor),
                )
            )
            if config.leading_term_points > 0:
                deviations.append(
                    self._leading_term(solution, phase, regular, epsilon, outcome)
                )
        self.writer.write_csv(
            "varadhan.csv", ("epsilon", "x", "minus_eps_log_u", "phi", "regular"), rows
        )
        finest = self.epsilons[-1]
        final = varadhan_extract(solutions[finest])
        self.writer.write_csv(
            "phase_fd.csv",
            ("epsilon", "t", "x", "minus_eps_log_u"),
            ((finest, config.t, x, value) for x, value in zip(final.xgrid, final.at())),
        )
        outcome.metrics["varadhan_error"] = errors[-1]
        if len(errors) > 1:
            outcome.checks.append(strictly_decreasing("varadhan_error_decreasing", errors))
        if len(deviations) > 1:
            outcome.checks.append(self._trend_check(deviations))
        if config.kink_window is not None:
            self._kink_check(fan, final, outcome)
        return outcome

    def _leading_term(self, solution, phase, regular, epsilon, outcome) -> float:
        config = self.get_experiment_config()
        candidates = np.nonzero(regular)[0]
        picks = candidates[
            np.unique(np.linspace(0, candidates.size - 1, config.leading_term_points).round())
            .astype(int)
        ]
        rho_reg = phase.fields[AMPLITUDE_FIELD][picks] ** 2
        ratio = leading_term_ratio(
            solution, phase.phi[picks], rho_reg, epsilon, phase.x[picks], config.t
        )
        constant = float(np.mean(ratio))
        spread = float(np.max(np.abs(ratio / constant - 1.0)))
        deviation = float(np.max(np.abs(ratio - 1.0)))
        outcome.metrics[f"leading_term_constant[eps={epsilon:g}]"] = constant
        outcome.metrics[f"leading_term_deviation[eps={epsilon:g}]"] = deviation
        outcome.checks.append(
            at_most(
                f"leading_term_spread[eps={epsilon:g}]",
                spread,
                config.leading_term_band * epsilon,
            )
        )
        return deviation

    def _trend_check(self, deviations: List[float]):
        """Deviation from the leading term must shrink like eps, within a factor 2."""
        factors = []
        for (e1, d1), (e2, d2) in zip(
            zip(self.epsilons, deviations), zip(self.epsilons[1:], deviations[1:])
        ):
            q = (d1 / d2) / (e1 / e2) if d2 > 0 else np.inf
            factors.append(max(q, 1.0 / q) if q > 0 else np.inf)
        return at_most("leading_term_trend", max(factors), 2.0)

    def _kink_check(self, fan, phase_field, outcome):
        config = self.get_experiment_config()
        lo, hi = config.kink_window
        window_phase = self.global_phase(
            fan, config.t, np.linspace(lo, hi, KINK_SEARCH_POINTS)
        )
        if not window_phase.kinks:
            outcome.checks.append(holds("kink_found", False))
            return
        manifold_kink = window_phase.kinks[0].x
        fd_kink = kink_from_curvature(phase_field, t=config.t, window=config.kink_window)
        outcome.metrics["kink_manifold"] = manifold_kink
        outcome.metrics["kink_fd"] = fd_kink
        outcome.checks.append(
            at_most("kink_offset", abs(fd_kink - manifold_kink), config.kink_tol)
        )
