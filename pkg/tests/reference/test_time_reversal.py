import numpy as np
import pytest

from tests.fixtures.symbols import initial_data
from tunnelkit.errors import PreconditionError
from tunnelkit.reference.hopf_lax import QuadraticPhaseEvaluator
from tunnelkit.reference.time_reversal import time_reversal_check

XS = np.linspace(-1.0, 1.0, 21)


def test_reconstruction_improves_with_epsilon():
    evaluator = QuadraticPhaseEvaluator(initial_data("tanh-plus"), 1.0, 0.5)
    residuals = [
        time_reversal_check(evaluator, epsilon, XS).residual
        for epsilon in (1e-2, 5e-3, 2.5e-3)
    ]
    assert residuals[0] <= 0.1
    assert residuals[0] > residuals[1] > residuals[2]


def test_report_fields():
    evaluator = QuadraticPhaseEvaluator(initial_data("tanh-plus"), 1.0, 0.5)
    report = time_reversal_check(evaluator, 1e-2, XS)
    assert report.t == 0.5
    assert len(report.residuals) == XS.size
    assert report.worst_x in report.xs
    assert report.residual == max(report.residuals)


def test_time_zero_is_exact():
    evaluator = QuadraticPhaseEvaluator(initial_data("tanh-plus"), 1.0, 0.0)
    assert time_reversal_check(evaluator, 1e-2, XS).residual == 0.0


def test_refused_past_the_caustic():
    evaluator = QuadraticPhaseEvaluator(initial_data("tanh-minus"), 1.0, 1.0)
    with pytest.raises(PreconditionError, match="caustic"):
        time_reversal_check(evaluator, 1e-2, XS)
