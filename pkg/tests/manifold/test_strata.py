import numpy as np

from tests.fixtures.symbols import make_fan, quadratic_symbol
from tunnelkit.manifold.phase import Kink
from tunnelkit.manifold.strata import link_kinks, singular_support
from tunnelkit.models.function import BumpFunctionConfig, SumFunctionConfig


def bump(center):
    return BumpFunctionConfig(amplitude=0.5, center=center, half_width=1.0)


def kink_at(x, pl=1.0, pr=-1.0):
    return Kink(x=x, winner_left=0, winner_right=2, p_left=pl, p_right=pr, S=0.0)


def test_convex_fan_has_no_strata(fixture_convex_fan):
    assert singular_support(fixture_convex_fan) == []


def test_concave_fan_single_stratum(fixture_concave_fan):
    strata = singular_support(fixture_concave_fan)
    assert len(strata) == 1
    stratum = strata[0]
    assert 0.5 <= stratum.birth_time <= 0.52
    assert abs(stratum.birth_x - 1.0) <= 0.05
    assert stratum.parents == []
    assert stratum.times[-1] == 1.0


def test_kink_moves_with_rankine_hugoniot_velocity(fixture_concave_fan):
    stratum = singular_support(fixture_concave_fan)[0]
    times = np.array(stratum.times)
    velocity = np.gradient(np.array(stratum.x), times)
    predicted = np.array(stratum.p_left) + np.array(stratum.p_right)
    late = times >= 0.7
    assert np.max(np.abs(velocity - predicted)[late]) <= 1e-2


def test_separated_bumps_match_single_bump_runs():
    kwargs = dict(x_min=-4.0, x_max=4.0, spacing=4e-3, t_max=1.0, dt_out=0.02)
    both = singular_support(
        make_fan(quadratic_symbol(), SumFunctionConfig(terms=[bump(-2.0), bump(2.0)]), **kwargs)
    )
    left = singular_support(make_fan(quadratic_symbol(), bump(-2.0), **kwargs))
    right = singular_support(make_fan(quadratic_symbol(), bump(2.0), **kwargs))
    assert len(both) == 2
    assert len(left) == len(right) == 1
    for alone, together in zip(left + right, both):
        assert alone.birth_time == together.birth_time
        assert np.allclose(alone.x, together.x, atol=1e-6)
    assert abs(both[0].x[-1] + 2.0) <= 1e-5
    assert abs(both[1].x[-1] - 2.0) <= 1e-5


def test_converging_kinks_merge_into_child():
    tgrid = np.array([0.0, 0.1, 0.2, 0.3])
    per_slice = [
        [kink_at(-0.2, 1.0, 0.0), kink_at(0.2, 0.0, -1.0)],
        [kink_at(-0.1, 1.0, 0.0), kink_at(0.1, 0.0, -1.0)],
        [kink_at(0.0, 2.0, -2.0)],
        [kink_at(0.0, 2.0, -2.0)],
    ]
    strata = link_kinks(per_slice, tgrid, max_speed=2.0, dx=1e-3, symbol=quadratic_symbol())
    assert len(strata) == 3
    child = strata[2]
    assert sorted(child.parents) == [0, 1]
    assert child.birth_time == 0.2
    assert child.times == [0.2, 0.3]
    assert strata[0].death_time == 0.2


def test_vanishing_kink_ends_stratum():
    tgrid = np.array([0.0, 0.1, 0.2])
    strata = link_kinks([[kink_at(0.0)], [kink_at(0.0)], []], tgrid, max_speed=1.0, dx=1e-3)
    assert len(strata) == 1
    assert strata[0].death_time == 0.1
