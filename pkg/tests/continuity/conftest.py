import pytest

from tests.fixtures.symbols import bumps_phase, make_fan, quadratic_symbol
from tunnelkit.continuity.rules import create_coefficient_rule
from tunnelkit.continuity.tracking import track_strata
from tunnelkit.models.coefficient import ZeroCoefficientConfig
from tunnelkit.models.function import BumpFunctionConfig
from tunnelkit.symbol.functions import create_function


@pytest.fixture(scope="module")
def fixture_focusing_fan():
    # symmetric focusing, caustic at t = 0.25 over x = 0
    return make_fan(quadratic_symbol(), bumps_phase([0.0]), x_min=-5.0, x_max=5.0, t_max=1.0)


@pytest.fixture(scope="module")
def fixture_compact_density():
    return create_function(BumpFunctionConfig(amplitude=1.0, center=0.0, half_width=3.0))


@pytest.fixture(scope="module")
def fixture_focusing_tracking(fixture_focusing_fan, fixture_compact_density):
    return track_strata(
        fixture_focusing_fan,
        fixture_compact_density,
        create_coefficient_rule(ZeroCoefficientConfig()),
    )
