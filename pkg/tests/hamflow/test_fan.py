import numpy as np
import pytest

from tests.fixtures.symbols import (
    initial_data,
    make_fan,
    potential_symbol,
    quadratic_symbol,
    sine_potential_symbol,
)
from tunnelkit.errors import IntegrationBlowUpError, PreconditionError
from tunnelkit.hamflow.fan import evolve_fan, flow_points, jacobian_field, TrajectoryFan
from tunnelkit.hamflow.initial import InitialData, InitialManifold, uniform_labels
from tunnelkit.models.function import ConstantFunctionConfig, PolynomialFunctionConfig
from tunnelkit.symbol.functions import ConstantFunction, PolynomialFunction


def test_convex_tanh_trajectories_are_straight_lines():
    fan = make_fan(quadratic_symbol(), "tanh-plus", x_min=-2.0, x_max=2.0, t_max=1.0)
    x0 = fan.labels
    for k in (0, 50, 100):
        t = fan.tgrid[k]
        assert np.allclose(fan.x[k], x0 + 2.0 * t * (1.0 + np.tanh(x0)), atol=1e-12)
        assert np.allclose(fan.p[k], 1.0 + np.tanh(x0), atol=1e-12)
        assert np.allclose(fan.J[k], 1.0 + 2.0 * t / np.cosh(x0) ** 2, atol=1e-10)


def test_rest_state():
    data = InitialData(ConstantFunction(0.0), ConstantFunction(1.0))
    labels = uniform_labels(-1.0, 1.0, 0.1)
    fan = evolve_fan(
        quadratic_symbol(),
        InitialManifold.from_initial_data(data, labels),
        np.linspace(0.0, 2.0, 21),
    )
    assert np.all(fan.x == labels)
    assert np.all(fan.p == 0.0)
    assert np.all(fan.S == 0.0)
    assert np.all(fan.J == 1.0)


def test_constant_force_closed_form():
    symbol = potential_symbol(PolynomialFunctionConfig(coefficients=[0.0, 1.0]))
    data = InitialData(PolynomialFunction([0.0, 0.5, 0.25]), ConstantFunction(1.0))
    labels = uniform_labels(-1.0, 1.0, 0.05)
    fan = evolve_fan(
        symbol, InitialManifold.from_initial_data(data, labels), np.linspace(0.0, 1.5, 16)
    )
    p0 = 0.5 + 0.5 * labels
    t = fan.tgrid[-1]
    assert np.allclose(fan.p[-1], p0 - t, atol=1e-12)
    assert np.allclose(fan.x[-1], labels + 2.0 * p0 * t - t**2, atol=1e-10)


def test_action_accumulates_along_characteristics():
    fan = make_fan(quadratic_symbol(), "tanh-plus", x_min=-1.0, x_max=1.0, t_max=0.5)
    p0 = 1.0 + np.tanh(fan.labels)
    S0 = initial_data("tanh-plus").S0(fan.labels)
    # for H = p^2 the action grows by p^2 t
    assert np.allclose(fan.S[-1], S0 + p0**2 * 0.5, atol=1e-12)


def test_energy_conserved_for_time_independent_symbol():
    symbol = sine_potential_symbol(0.5)
    fan = make_fan(symbol, "tanh-minus", x_min=-1.0, x_max=1.0, spacing=0.05, t_max=2.0)
    energy = symbol.eval(fan.x, fan.p)
    drift = np.abs(energy - energy[0])
    assert np.max(drift / (1.0 + np.abs(energy[0]))) <= 1e-6


def test_variational_jacobian_matches_neighbor_differences():
    symbol = sine_potential_symbol(0.1)
    fan = make_fan(symbol, "tanh-plus", x_min=-1.0, x_max=1.0, spacing=1e-3, t_max=1.0, dt_out=0.1)
    field = jacobian_field(fan)
    interior = slice(1, -1)
    J = field.variational[:, interior]
    fd = field.finite_difference[:, interior]
    assert np.max(np.abs(J - fd) / np.abs(J)) <= 1e-2
    assert np.all(field.variational[0] == 1.0)


def test_forward_backward_reversibility():
    symbol = sine_potential_symbol(0.5)
    x0 = np.linspace(-1.0, 1.0, 21)
    p0 = 1.0 + np.tanh(x0)
    S0 = np.zeros_like(x0)
    x1, p1, S1 = flow_points(symbol, x0, p0, S0, 0.0, 1.0, 1e-3)
    x2, p2, S2 = flow_points(symbol, x1, p1, S1, 1.0, 0.0, 1e-3)
    assert np.max(np.abs(x2 - x0)) <= 1e-8
    assert np.max(np.abs(p2 - p0)) <= 1e-8
    assert np.max(np.abs(S2 - S0)) <= 1e-8


def test_blow_up_names_label():
    symbol = potential_symbol(PolynomialFunctionConfig(coefficients=[0.0, 0.0, 0.0, -1.0]))
    data = InitialData(PolynomialFunction([0.0, 0.0, 2.0]), ConstantFunction(1.0))
    labels = np.array([-1.0, 0.0, 5.0])
    with pytest.raises(IntegrationBlowUpError) as error:
        evolve_fan(
            symbol, InitialManifold.from_initial_data(data, labels), np.linspace(0.0, 5.0, 6)
        )
    assert error.value.label in (-1.0, 5.0)


def test_labels_must_increase():
    data = InitialData(ConstantFunction(0.0), ConstantFunction(1.0))
    with pytest.raises(PreconditionError, match="strictly increasing"):
        InitialManifold.from_initial_data(data, np.array([0.0, 0.0, 1.0]))


def test_fan_cache_round_trip(tmp_path):
    fan = make_fan(quadratic_symbol(), "tanh-plus", x_min=-1.0, x_max=1.0, spacing=0.1, t_max=0.2, dt_out=0.1)
    path = str(tmp_path / "fan.npz")
    fan.save(path)
    loaded = TrajectoryFan.load(path)
    assert np.array_equal(loaded.x, fan.x)
    assert np.array_equal(loaded.tgrid, fan.tgrid)
    assert loaded.symbol is None
