import numpy as np
import pytest
from scipy.integrate import trapezoid

from tests.fixtures.symbols import initial_data
from tunnelkit.errors import NonPositiveFieldError, PreconditionError
from tunnelkit.reference.grid import GridField, check_uniform


def test_initial_data_is_stored_in_log_form():
    x = np.linspace(-2.0, 2.0, 401)
    field = GridField.from_initial_data(initial_data("tanh-plus"), 1e-3, x)
    S0 = initial_data("tanh-plus").S0(x)
    assert np.max(np.abs(field.log_u[0] + S0 / 1e-3)) <= 1e-9
    # exp(-S0 / eps) overflows for x < 0 but the log form does not
    assert np.all(np.isfinite(field.log_u))
    assert field.tgrid.tolist() == [0.0]


def test_mass_matches_trapezoid():
    x = np.linspace(-1.0, 1.0, 201)
    values = np.exp(-(x**2))
    field = GridField.from_values(x, [0.0], values, 0.1)
    assert field.mass()[0] == pytest.approx(trapezoid(values, x), rel=1e-12)


def test_slices_and_rows():
    x = np.linspace(0.0, 1.0, 5)
    values = np.vstack([np.ones(5), 2.0 * np.ones(5)])
    field = GridField.from_values(x, [0.0, 0.5], values, 0.1)
    late = field.at(0.5)
    assert late.tgrid.tolist() == [0.5]
    assert np.allclose(late.values, 2.0)
    assert field.slice(0).t == 0.0
    rows = list(field.rows())
    assert len(rows) == 10
    assert rows[-1] == (0.5, 1.0, pytest.approx(2.0))
    with pytest.raises(PreconditionError):
        field.index(0.25)


def test_rejects_bad_grids_and_values():
    with pytest.raises(PreconditionError):
        check_uniform(np.array([0.0, 0.1, 0.3]))
    with pytest.raises(PreconditionError):
        check_uniform(np.array([0.0, 1.0]))
    x = np.linspace(0.0, 1.0, 5)
    with pytest.raises(NonPositiveFieldError):
        GridField.from_values(x, [0.0], -np.ones(5), 0.1)
    with pytest.raises(PreconditionError):
        GridField.from_values(x, [0.0], np.ones(5), 0.0)
    with pytest.raises(PreconditionError):
        GridField.from_values(x, [0.0, 1.0], np.ones(5), 0.1)
