import numpy as np
import pytest

from tests.fixtures.symbols import (
    initial_data,
    make_fan,
    quadratic_symbol,
    sine_potential_symbol,
)
from tunnelkit.errors import PreconditionError, RootFindingError
from tunnelkit.reference.hopf_lax import QuadraticPhaseEvaluator


def test_caustic_times():
    concave = QuadraticPhaseEvaluator(initial_data("tanh-minus"), 1.0, 0.0)
    convex = QuadraticPhaseEvaluator(initial_data("tanh-plus"), 1.0, 0.0)
    assert concave.first_caustic_time == pytest.approx(0.5, abs=1e-6)
    assert convex.first_caustic_time == np.inf


def test_time_zero_is_the_identity():
    data = initial_data("tanh-plus")
    evaluator = QuadraticPhaseEvaluator(data, 1.0, 0.0)
    xs = np.linspace(-1.0, 1.0, 11)
    assert np.array_equal(evaluator.label(xs), xs)
    assert np.allclose(evaluator.action(xs), data.S0(xs))
    assert np.allclose(evaluator.amplitude(xs), 1.0)


def test_matches_the_characteristic_fan():
    fan = make_fan(quadratic_symbol(), "tanh-plus", t_max=0.5)
    evaluator = QuadraticPhaseEvaluator.from_symbol(
        quadratic_symbol(), initial_data("tanh-plus"), 0.5
    )
    k = fan.tgrid.size - 1
    inside = np.abs(fan.x[k]) <= 1.0
    xs = fan.x[k, inside]
    assert np.max(np.abs(evaluator.label(xs) - fan.labels[inside])) <= 1e-8
    assert np.max(np.abs(evaluator.action(xs) - fan.S[k, inside])) <= 1e-8
    assert np.max(np.abs(evaluator.gradient(xs) - fan.p[k, inside])) <= 1e-8
    assert np.max(np.abs(evaluator.jacobian(xs) - fan.J[k, inside])) <= 1e-6


def test_min_action_root_past_the_caustic():
    evaluator = QuadraticPhaseEvaluator(initial_data("tanh-minus"), 1.0, 1.0)
    # three labels reach x = 2 at t = 1; the outer two tie, the middle one loses
    labels = evaluator.label([1.9, 2.1])
    assert labels[0] < -1.5 and labels[1] > 1.5


def test_rejects_other_symbols_and_uncovered_points():
    with pytest.raises(PreconditionError):
        QuadraticPhaseEvaluator.from_symbol(
            sine_potential_symbol(0.1), initial_data("tanh-plus"), 0.5
        )
    evaluator = QuadraticPhaseEvaluator(
        initial_data("tanh-plus"), 1.0, 0.5, label_window=(-1.0, 1.0), label_points=201
    )
    with pytest.raises(RootFindingError):
        evaluator.label([5.0])
