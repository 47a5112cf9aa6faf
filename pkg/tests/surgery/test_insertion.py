import numpy as np
import pytest

from tests.fixtures.symbols import (
    initial_data,
    jump_symbol,
    quadratic_symbol,
    sine_potential_symbol,
)
from tunnelkit.errors import InsertionError, PreconditionError
from tunnelkit.models.symbol import CustomSymbolConfig
from tunnelkit.surgery.insertion import insertion_initial_data
from tunnelkit.symbol.factory import create_symbol

BETA = 0.1
TGRID = np.linspace(0.0, 1.0, 101)


def test_focusing_time_matches_closed_form(fixture_insertion):
    # H = p^2, u0 = 1 - tanh x around 0: K = 2 tanh(beta)/beta
    assert fixture_insertion.K[0] == pytest.approx(2.0 * np.tanh(BETA) / BETA, rel=1e-12)
    assert fixture_insertion.t_star == pytest.approx(
        BETA / (2.0 * np.tanh(BETA)), abs=1e-12
    )


def test_window_collapses_at_focusing_time(fixture_insertion):
    labels = np.linspace(-BETA, BETA, 51)[1:-1]
    x = fixture_insertion.position(labels, fixture_insertion.t_star)
    assert abs(fixture_insertion.jacobian(fixture_insertion.t_star)) <= 1e-12
    assert np.ptp(x) <= 1e-9


def test_quadratic_momentum_closed_form(fixture_insertion):
    labels = np.linspace(-BETA, BETA, 41)[1:-1]
    expected = 1.0 - np.tanh(BETA) * labels / BETA
    for t in (0.0, 0.3, 0.8):
        assert np.max(np.abs(fixture_insertion.momentum(labels, t) - expected)) <= 1e-12


def test_profile_matches_u0_outside_the_window(fixture_insertion):
    labels = np.linspace(-1.0, 1.0, 201)
    profile = fixture_insertion.profile(labels, 0.0)
    outside = ~fixture_insertion.contains(labels)
    u0 = initial_data("tanh-minus").p0(labels)
    assert np.array_equal(profile[outside], u0[outside])
    assert np.max(np.abs(profile - u0)) <= 1e-2


def test_linear_data_is_left_unchanged():
    tgrid = np.linspace(0.0, 1.5, 151)
    insertion = insertion_initial_data(
        lambda x: 1.0 - 0.5 * x, 0.3, BETA, quadratic_symbol(), tgrid
    )
    labels = np.linspace(0.21, 0.39, 19)
    assert np.max(np.abs(insertion.momentum(labels, 0.4) - (1.0 - 0.5 * labels))) <= 1e-12
    assert insertion.t_star == pytest.approx(1.0, abs=1e-12)


def test_jump_symbol_inverts_the_velocity():
    symbol = jump_symbol(intensity=0.5, jump_size=1.0)
    insertion = insertion_initial_data(
        initial_data("tanh-minus").p0, 0.0, BETA, symbol, TGRID
    )
    labels = np.linspace(-BETA, BETA, 31)[1:-1]
    u1 = insertion.momentum(labels, 0.2)
    residual = symbol.grad_p(0.0, u1, 0.2) - insertion.velocity(labels, 0.2)
    assert np.max(np.abs(residual)) <= 1e-9
    assert np.all(np.diff(u1) < 0)


def test_equal_endpoint_velocities_are_degenerate():
    with pytest.raises(InsertionError):
        insertion_initial_data(
            lambda x: 0.0 * x + 0.7, 0.0, BETA, quadratic_symbol(), TGRID
        )


def test_insertion_that_never_focuses():
    # diverging data: the window spreads instead of collapsing
    with pytest.raises(InsertionError):
        insertion_initial_data(np.tanh, 0.0, BETA, quadratic_symbol(), TGRID)


def test_non_convex_symbol_is_rejected():
    symbol = create_symbol(
        CustomSymbolConfig(hamiltonian=lambda x, p, t: -(p**2), time_dependent=False)
    )
    with pytest.raises(InsertionError):
        insertion_initial_data(initial_data("tanh-minus").p0, 0.0, BETA, symbol, TGRID)


def test_space_dependent_symbol_is_rejected():
    with pytest.raises(PreconditionError):
        insertion_initial_data(
            initial_data("tanh-minus").p0, 0.0, BETA, sine_potential_symbol(0.5), TGRID
        )


def test_bad_arguments():
    u0 = initial_data("tanh-minus").p0
    with pytest.raises(PreconditionError):
        insertion_initial_data(u0, 0.0, 0.0, quadratic_symbol(), TGRID)
    with pytest.raises(PreconditionError):
        insertion_initial_data(u0, 0.0, BETA, quadratic_symbol(), TGRID[::-1])
