import numpy as np

from tests.fixtures.symbols import make_fan, quadratic_symbol
from tunnelkit.hamflow.caustic import detect_caustic
from tunnelkit.hamflow.fan import TrajectoryFan
from tunnelkit.models.function import PolynomialFunctionConfig


def test_tanh_minus_focuses_at_half():
    fan = make_fan(quadratic_symbol(), "tanh-minus", x_min=-2.0, x_max=2.0, t_max=1.0)
    events = detect_caustic(fan)
    assert events
    first = events[0]
    assert abs(first.t_star - 0.5) <= 1e-5
    assert abs(first.label_star) <= 2e-3
    assert abs(first.x_star - 1.0) <= 1e-4
    assert all(a.t_star <= b.t_star for a, b in zip(events, events[1:]))


def test_tanh_plus_has_no_caustic():
    fan = make_fan(quadratic_symbol(), "tanh-plus", x_min=-2.0, x_max=2.0, t_max=1.0)
    assert detect_caustic(fan) == []


def test_concave_quadratic_focuses_every_label():
    phase = PolynomialFunctionConfig(coefficients=[0.0, 0.0, -0.5])
    fan = make_fan(quadratic_symbol(), phase, x_min=-1.0, x_max=1.0, spacing=0.1, t_max=1.0)
    events = detect_caustic(fan)
    assert len(events) == fan.labels.size
    assert all(abs(event.t_star - 0.5) <= 1e-5 for event in events)
    assert all(abs(event.x_star) <= 1e-5 for event in events)


def test_interpolated_detection_without_symbol(tmp_path):
    fan = make_fan(quadratic_symbol(), "tanh-minus", x_min=-1.0, x_max=1.0, spacing=0.01, t_max=1.0)
    path = str(tmp_path / "fan.npz")
    fan.save(path)
    events = detect_caustic(TrajectoryFan.load(path))
    assert abs(events[0].t_star - 0.5) <= 1e-3
