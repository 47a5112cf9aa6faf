import numpy as np
import pytest

from tests.fixtures.symbols import initial_data, make_fan, quadratic_symbol
from tunnelkit.hamflow.initial import uniform_labels
from tunnelkit.models.blend import LogisticBlendConfig
from tunnelkit.surgery.blend import create_blend_profile
from tunnelkit.surgery.blended_fan import blended_fan_homogeneous
from tunnelkit.surgery.insertion import insertion_initial_data
from tunnelkit.surgery.manifold_surgery import surgery_from_fan

INSERTION_BETA = 0.1
SWEEP_EPSILONS = (1e-2, 3e-3, 1e-3)


@pytest.fixture(scope="module")
def fixture_concave_fan():
    # H = p^2 with S0 = x - ln cosh x: first caustic at t = 0.5, x = 1
    return make_fan(quadratic_symbol(), "tanh-minus", t_max=1.0)


@pytest.fixture(scope="module")
def fixture_surgered(fixture_concave_fan):
    return surgery_from_fan(fixture_concave_fan, beta=0.05)


@pytest.fixture(scope="module")
def fixture_insertion_tgrid():
    return np.linspace(0.0, 0.9, 91)


@pytest.fixture(scope="module")
def fixture_insertion(fixture_insertion_tgrid):
    return insertion_initial_data(
        initial_data("tanh-minus").p0,
        0.0,
        INSERTION_BETA,
        quadratic_symbol(),
        fixture_insertion_tgrid,
    )


@pytest.fixture(scope="module")
def fixture_insertion_labels():
    return uniform_labels(-2.0, 2.0, 4e-3)


@pytest.fixture(scope="module")
def fixture_epsilon_sweep(
    fixture_insertion, fixture_insertion_labels, fixture_insertion_tgrid
):
    results = {}
    for epsilon in SWEEP_EPSILONS:
        blend = create_blend_profile(
            LogisticBlendConfig(),
            epsilon,
            INSERTION_BETA,
            fixture_insertion.t_star,
            shift=1.0,
        )
        results[epsilon] = blended_fan_homogeneous(
            quadratic_symbol(),
            fixture_insertion,
            fixture_insertion_labels,
            blend,
            fixture_insertion_tgrid,
        )
    return results
