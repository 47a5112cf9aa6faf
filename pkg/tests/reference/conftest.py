import numpy as np
import pytest

from tests.fixtures.symbols import initial_data, quadratic_symbol
from tunnelkit.models.reference import ParabolicSchemeConfig
from tunnelkit.reference.grid import GridField
from tunnelkit.reference.heat_kernel import heat_kernel_convolve
from tunnelkit.reference.parabolic import fd_parabolic_solve, scheme_grid

EPSILON = 0.05
SIGMA = 0.3


def gaussian_field(width: float, epsilon: float = EPSILON) -> GridField:
    x = np.linspace(-3.0, 3.0, 1201)
    return GridField.from_values(x, [0.0], np.exp(-(x**2) / (2.0 * width**2)), epsilon)


def moments(field: GridField, k: int = -1):
    weights = np.full(field.xgrid.size, field.dx)
    weights[[0, -1]] *= 0.5
    u = field.values[k] * weights
    mass = u.sum()
    mean = (field.xgrid * u).sum() / mass
    variance = ((field.xgrid - mean) ** 2 * u).sum() / mass
    return mass, mean, variance


@pytest.fixture(scope="module")
def fixture_gaussian():
    return gaussian_field(SIGMA)


@pytest.fixture(scope="module")
def fixture_kernel_solution(fixture_gaussian):
    return heat_kernel_convolve(fixture_gaussian, 0.5, EPSILON)


@pytest.fixture(scope="module")
def fixture_fd_solution(fixture_gaussian):
    return fd_parabolic_solve(
        quadratic_symbol(), fixture_gaussian, EPSILON, [0.0, 0.25, 0.5]
    )


VARADHAN_EPSILONS = (0.04, 0.02)
VARADHAN_SCHEME = ParabolicSchemeConfig(exponential_fitting=True)
# by t = 1 the window x >= -1 is fed by labels down to -5
POST_CAUSTIC_SCHEME = ParabolicSchemeConfig(exponential_fitting=True, x_min=-6.0)


def solve_from_data(
    phase: str, epsilon: float, t: float, scheme: ParabolicSchemeConfig = VARADHAN_SCHEME
) -> GridField:
    xgrid = scheme_grid(scheme, epsilon)
    u0 = GridField.from_initial_data(initial_data(phase), epsilon, xgrid)
    return fd_parabolic_solve(quadratic_symbol(), u0, epsilon, [0.0, t], scheme)


@pytest.fixture(scope="module")
def fixture_convex_sweep():
    return {e: solve_from_data("tanh-plus", e, 0.4) for e in VARADHAN_EPSILONS}


@pytest.fixture(scope="module")
def fixture_post_caustic():
    return solve_from_data("tanh-minus", 0.02, 1.0, POST_CAUSTIC_SCHEME)
