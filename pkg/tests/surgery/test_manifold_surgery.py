import numpy as np
import pytest
from scipy.optimize import brentq

from tests.fixtures.symbols import bumps_phase, make_fan, quadratic_symbol
from tunnelkit.errors import MultipleFoldsError, NoFoldError, PreconditionError
from tunnelkit.manifold.curve import LagrangianCurve, snapshot
from tunnelkit.models.symbol import CustomSymbolConfig
from tunnelkit.surgery.manifold_surgery import (
    SOURCE_LABEL,
    manifold_surgery,
    surgery_from_fan,
)
from tunnelkit.symbol.factory import create_symbol


def entering_label(t: float) -> float:
    # labels reaching x = 2t at time t solve x0 = 2t tanh x0
    return brentq(lambda y: y - 2.0 * t * np.tanh(y), 1e-3, 3.0)


def test_surgery_times_and_cut_point(fixture_surgered):
    assert fixture_surgered.t_star == pytest.approx(0.5, abs=1e-4)
    assert fixture_surgered.x_star == pytest.approx(1.0, abs=1e-3)
    assert fixture_surgered.t1_star == pytest.approx(0.55, abs=1e-4)
    # equal action on the two outer branches exactly at x = 2t
    x1_expected = 2.0 * fixture_surgered.t1_star
    assert fixture_surgered.x1_star == pytest.approx(x1_expected, abs=1e-4)
    assert fixture_surgered.delta_S <= 1e-5
    assert not fixture_surgered.identity


def test_segment_joins_the_entering_labels(fixture_surgered):
    y = entering_label(fixture_surgered.t1_star)
    assert fixture_surgered.label_left == pytest.approx(-y, abs=1e-4)
    assert fixture_surgered.label_right == pytest.approx(y, abs=1e-4)
    assert fixture_surgered.p_left == pytest.approx(1.0 + np.tanh(y), abs=1e-4)
    assert fixture_surgered.p_right == pytest.approx(1.0 - np.tanh(y), abs=1e-4)
    segment = fixture_surgered.surgered
    on_segment = (segment.labels >= fixture_surgered.label_left) & (
        segment.labels <= fixture_surgered.label_right
    )
    assert np.all(segment.x[on_segment] == fixture_surgered.x1_star)
    assert np.all(np.diff(segment.p[on_segment]) < 0)


def test_backflow_opens_the_segment(fixture_surgered):
    s = fixture_surgered
    assert s.t1 == pytest.approx(0.025)
    assert s.t0 == pytest.approx(s.t1_star - 0.025)
    assert s.a1 < s.a2 < s.x1_star
    assert s.a1 == pytest.approx(s.x1_star - 2.0 * s.t1 * s.p_left, abs=1e-6)
    assert s.a2 == pytest.approx(s.x1_star - 2.0 * s.t1 * s.p_right, abs=1e-6)
    assert np.all(np.diff(s.backflowed.x) > 0)
    assert np.count_nonzero(s.window()) > 10


def test_backflow_leaves_the_outer_curve_alone(fixture_surgered, fixture_concave_fan):
    s = fixture_surgered
    source = s.backflowed.fields[SOURCE_LABEL]
    kept = source < s.label_left
    plain = snapshot(fixture_concave_fan, s.t0)
    idx = np.searchsorted(fixture_concave_fan.labels, source[kept])
    assert np.max(np.abs(plain.x[idx] - s.backflowed.x[kept])) <= 1e-8
    assert np.max(np.abs(plain.p[idx] - s.backflowed.p[kept])) <= 1e-8


def test_report_fields(fixture_surgered):
    report = fixture_surgered.report()
    assert set(report) == {
        "t_star",
        "x_star",
        "t1_star",
        "t1",
        "a1",
        "a2",
        "x1_star",
        "delta_S",
    }
    assert report["a1"] < report["a2"]


def test_zero_width_fold_is_the_identity():
    labels = np.linspace(-1.0, 1.0, 201)
    curve = LagrangianCurve(
        t=0.3,
        labels=labels,
        x=labels**3,
        p=-labels,
        S=np.zeros_like(labels),
        J=3.0 * labels**2,
    )
    surgered = manifold_surgery(curve, quadratic_symbol())
    assert surgered.identity
    assert surgered.t1 == 0.0
    assert surgered.a1 == surgered.a2 == surgered.x1_star
    assert abs(surgered.x1_star) <= 1e-12
    assert surgered.window().sum() == 0


def test_curve_without_fold():
    fan = make_fan(quadratic_symbol(), "tanh-plus", t_max=0.2)
    with pytest.raises(NoFoldError):
        manifold_surgery(snapshot(fan, 0.2), quadratic_symbol())
    with pytest.raises(NoFoldError):
        surgery_from_fan(fan)


def test_two_folds_are_rejected():
    fan = make_fan(
        quadratic_symbol(), bumps_phase([-2.0, 2.0]), x_min=-5.0, x_max=5.0, t_max=0.4
    )
    with pytest.raises(MultipleFoldsError):
        manifold_surgery(snapshot(fan, 0.4), quadratic_symbol())


def test_time_dependent_symbol_is_rejected(fixture_surgered):
    symbol = create_symbol(CustomSymbolConfig(hamiltonian=lambda x, p, t: p**2 + t))
    with pytest.raises(PreconditionError):
        manifold_surgery(fixture_surgered.base, symbol)
