import pytest

from tests.fixtures.symbols import bumps_phase, make_fan, quadratic_symbol


@pytest.fixture(scope="module")
def fixture_convex_fan():
    return make_fan(quadratic_symbol(), "tanh-plus", x_min=-3.0, x_max=3.0, t_max=1.0)


@pytest.fixture(scope="module")
def fixture_concave_fan():
    return make_fan(quadratic_symbol(), "tanh-minus", x_min=-3.0, x_max=3.0, t_max=1.0)


@pytest.fixture(scope="module")
def fixture_merge_fan():
    # two folds at t = 0.25 whose strata meet over x = 0
    return make_fan(quadratic_symbol(), bumps_phase([-1.0, 1.0]), x_min=-5.0, x_max=5.0)
