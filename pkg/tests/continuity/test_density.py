import numpy as np
import pytest

from tests.fixtures.symbols import make_fan, potential_symbol, quadratic_symbol
from tunnelkit.continuity.density import regular_density
from tunnelkit.continuity.madelung import transport_amplitude
from tunnelkit.continuity.rules import create_coefficient_rule
from tunnelkit.errors import CrossingTrajectoriesError, StratumTubeError
from tunnelkit.models.coefficient import (
    ConstantCoefficientConfig,
    MadelungCoefficientConfig,
    ZeroCoefficientConfig,
)
from tunnelkit.models.function import (
    ConstantFunctionConfig,
    GaussianFunctionConfig,
    PolynomialFunctionConfig,
)
from tunnelkit.symbol.functions import ConstantFunction, create_function

ZERO = create_coefficient_rule(ZeroCoefficientConfig())


def rest_fan():
    return make_fan(
        quadratic_symbol(),
        ConstantFunctionConfig(value=0.0),
        x_min=-2.0,
        x_max=2.0,
        spacing=0.01,
        t_max=1.0,
        dt_out=0.1,
    )


def test_rest_field_keeps_initial_density():
    g = create_function(GaussianFunctionConfig(amplitude=2.0, width=0.5))
    xgrid = np.linspace(-1.5, 1.5, 301)
    density = regular_density(rest_fan(), g, ZERO, xgrid=xgrid)
    assert np.allclose(density.R, g(xgrid)[None, :], atol=1e-12)
    assert np.all(density.u == 0.0)


def test_constant_coefficient_decays_exponentially():
    g = create_function(GaussianFunctionConfig(amplitude=1.0, width=0.5))
    rule = create_coefficient_rule(ConstantCoefficientConfig(alpha=0.7))
    xgrid = np.linspace(-1.5, 1.5, 301)
    density = regular_density(rest_fan(), g, rule, xgrid=xgrid)
    expected = g(xgrid)[None, :] * np.exp(-0.7 * density.tgrid)[:, None]
    assert np.allclose(density.R, expected, rtol=1e-12)


def test_convex_density_is_inverse_jacobian():
    fan = make_fan(quadratic_symbol(), "tanh-plus", x_min=-3.0, x_max=3.0, t_max=1.0, dt_out=0.25)
    xgrid = np.linspace(-1.0, 1.0, 201)
    density = regular_density(fan, ConstantFunction(1.0), ZERO, xgrid=xgrid)
    for k, t in enumerate(density.tgrid):
        # invert x = x0 + 2t(1 + tanh x0) on the label grid
        x0 = np.interp(xgrid, fan.x[k], fan.labels)
        expected = 1.0 / (1.0 + 2.0 * t / np.cosh(x0) ** 2)
        assert np.max(np.abs(density.R[k] - expected)) <= 1e-4
    assert np.all(density.R > 0.0)


def test_crossing_without_strata_is_reported():
    fan = make_fan(quadratic_symbol(), "tanh-minus", x_min=-3.0, x_max=3.0, t_max=1.0)
    with pytest.raises(CrossingTrajectoriesError) as error:
        regular_density(fan, ConstantFunction(1.0), ZERO)
    assert 0.5 < error.value.time <= 0.52
    assert abs(error.value.x - 1.0) <= 0.05


def test_density_outside_tube_ignores_stratum_velocity(
    fixture_focusing_fan, fixture_compact_density, fixture_focusing_tracking
):
    strata = fixture_focusing_tracking.strata
    perturbed = [s.copy(deep=True) for s in strata]
    for stratum in perturbed:
        stratum.velocity = [v + 1.0 for v in stratum.velocity]
    xgrid = np.linspace(-2.5, 2.5, 1001)
    first = regular_density(
        fixture_focusing_fan, fixture_compact_density, ZERO, strata, xgrid=xgrid, tube_width=0.01
    )
    second = regular_density(
        fixture_focusing_fan, fixture_compact_density, ZERO, perturbed, xgrid=xgrid, tube_width=0.01
    )
    assert np.array_equal(first.R, second.R, equal_nan=True)
    assert np.any(first.tube)


def test_point_query_inside_tube(fixture_focusing_fan, fixture_compact_density, fixture_focusing_tracking):
    density = regular_density(
        fixture_focusing_fan,
        fixture_compact_density,
        ZERO,
        fixture_focusing_tracking.strata,
        xgrid=np.linspace(-2.5, 2.5, 1001),
        tube_width=0.01,
    )
    with pytest.raises(StratumTubeError):
        density.at(0.005, 1.0)
    assert density.at(0.5, 1.0) > 0.0


def test_madelung_density_is_squared_transport_amplitude():
    symbol = potential_symbol(
        PolynomialFunctionConfig(coefficients=[0.0]),
        diffusion=PolynomialFunctionConfig(coefficients=[1.0, 0.0, 0.2]),
    )
    fan = make_fan(symbol, "tanh-plus", x_min=-1.0, x_max=1.0, spacing=0.01, t_max=0.5, dt_out=0.05)
    phi0 = create_function(GaussianFunctionConfig(amplitude=1.0, width=0.7))
    rho0 = create_function(GaussianFunctionConfig(amplitude=1.0, width=0.7 / np.sqrt(2.0)))
    psi = transport_amplitude(fan, phi0)
    xgrid = np.linspace(-0.5, 1.5, 101)
    density = regular_density(
        fan, rho0, create_coefficient_rule(MadelungCoefficientConfig()), xgrid=xgrid
    )
    for k in range(fan.tgrid.size):
        covered = density.covered[k]
        assert np.any(covered)
        assert np.allclose(
            density.R[k][covered],
            np.interp(xgrid[covered], fan.x[k], psi[k] ** 2),
            rtol=1e-3,
        )
    assert not np.allclose(psi[-1] ** 2, phi0(fan.labels) ** 2 / fan.J[-1])


def test_birth_time_slice_is_not_a_crossing(
    fixture_focusing_fan, fixture_compact_density, fixture_focusing_tracking
):
    fan = fixture_focusing_fan
    k = int(np.argmin(np.abs(fan.tgrid - 0.25)))
    # J = 1 - 4t vanishes on the focal label, up to a roundoff of either sign
    density = regular_density(
        fan,
        fixture_compact_density,
        ZERO,
        fixture_focusing_tracking.strata,
        xgrid=np.linspace(-2.5, 2.5, 1001),
    )
    covered = density.covered[k]
    focal = covered & ~np.isfinite(density.R[k])
    assert np.count_nonzero(focal) <= 1
    assert np.all(np.abs(density.x[focal]) <= 1e-9)
    assert np.all(density.R[k][covered & ~focal] >= 0.0)
