import numpy as np
import pytest

from tests.fixtures.symbols import bumps_phase, make_fan, quadratic_symbol
from tunnelkit.errors import CoverageGapError
from tunnelkit.manifold.branches import branch_decompose
from tunnelkit.manifold.curve import snapshot
from tunnelkit.manifold.phase import min_action


def hopf_lax(xs, t, phase, y_min=-4.0, y_max=6.0, n=20001):
    """Brute-force min over starting points for H = p^2."""
    y = np.linspace(y_min, y_max, n)
    S0 = phase(y)
    return np.array([np.min(S0 + (x - y) ** 2 / (4.0 * t)) for x in xs])


def test_single_branch_has_no_kinks(fixture_convex_fan):
    field = branch_decompose(snapshot(fixture_convex_fan, 1.0))
    xgrid = np.linspace(-2.0, 2.0, 401)
    phase = min_action(field, xgrid)
    assert phase.kinks == []
    assert np.all(phase.winner == 0)
    assert np.allclose(phase.phi, field.branch(0).action(xgrid))


def test_post_caustic_min_matches_brute_force(fixture_concave_fan):
    field = branch_decompose(snapshot(fixture_concave_fan, 1.0))
    xgrid = np.linspace(1.3, 2.9, 161)
    phase = min_action(field, xgrid)
    oracle = hopf_lax(xgrid, 1.0, lambda y: y - np.log(np.cosh(y)))
    assert np.max(np.abs(phase.phi - oracle)) <= 1e-5
    assert len(phase.kinks) == 1
    kink = phase.kinks[0]
    assert (kink.winner_left, kink.winner_right) == (0, 2)
    assert kink.p_left > kink.p_right
    assert np.max(np.abs(np.diff(phase.phi))) <= 0.05
    assert np.all(phase.winner != 1)


def test_symmetric_focusing_kink_at_centre():
    fan = make_fan(quadratic_symbol(), bumps_phase([0.0]), x_min=-3.0, x_max=3.0, t_max=1.0)
    field = branch_decompose(snapshot(fan, 1.0))
    phase = min_action(field, np.linspace(-0.9, 0.9, 361))
    assert len(phase.kinks) == 1
    assert abs(phase.kinks[0].x) <= 1e-5
    assert abs(phase.kinks[0].p_left + phase.kinks[0].p_right) <= 1e-5


def test_adding_branches_only_lowers_phi(fixture_concave_fan):
    field = branch_decompose(snapshot(fixture_concave_fan, 1.0))
    xgrid = np.linspace(1.2, 2.9, 171)
    full = min_action(field, xgrid)
    covered = np.any([field.branch(i).covers(xgrid) for i in (0, 1)], axis=0)
    subset = min_action(field, xgrid[covered], branch_ids=[0, 1])
    assert np.all(full.phi[covered] <= subset.phi + 1e-15)
    assert np.all(full.phi <= min_action(field, xgrid, branch_ids=[2, 0]).phi + 1e-15)


def test_uncovered_points_are_reported(fixture_convex_fan):
    field = branch_decompose(snapshot(fixture_convex_fan, 1.0))
    with pytest.raises(CoverageGapError, match="not covered") as error:
        min_action(field, np.linspace(0.0, 20.0, 11))
    assert error.value.gaps[-1][1] == 20.0


def test_phase_solves_hamilton_jacobi_before_caustic(fixture_concave_fan):
    xgrid = np.linspace(-1.5, 2.5, 401)
    # fourth-order difference in t over stored output times
    h = 0.01
    phases = [
        min_action(branch_decompose(snapshot(fixture_concave_fan, 0.2 + j * h)), xgrid)
        for j in (-2, -1, 0, 1, 2)
    ]
    phi_t = (
        phases[0].phi - 8.0 * phases[1].phi + 8.0 * phases[3].phi - phases[4].phi
    ) / (12.0 * h)
    phi_x = np.gradient(phases[2].phi, xgrid)
    residual = (phi_t + phi_x**2)[5:-5]
    assert np.max(np.abs(residual)) <= 1e-3


def test_winning_momentum_is_phase_gradient(fixture_concave_fan):
    xgrid = np.arange(1.2, 2.9, 1e-3)
    phase = min_action(branch_decompose(snapshot(fixture_concave_fan, 1.0)), xgrid)
    gradient = np.gradient(phase.phi, xgrid)
    away = np.abs(xgrid - phase.kinks[0].x) >= 1e-2
    away[[0, -1]] = False
    assert np.max(np.abs(phase.p - gradient)[away]) <= 1e-2


def test_label_window_edges_are_not_kinks(fixture_merge_fan):
    # labels from x0 > 1 run past the left end of the x0 < -1 branch,
    # so the winner changes there without an equal-action point
    field = branch_decompose(snapshot(fixture_merge_fan, 0.9))
    x = field.curve.x
    phase = min_action(field, np.linspace(x.min(), x.max(), 2001))
    assert len(phase.kinks) == 1
    assert abs(phase.kinks[0].x) <= 1e-2
    assert phase.edges
    assert all(abs(edge.x) > 1.0 for edge in phase.edges)


def test_fold_hand_off_is_not_a_kink(fixture_merge_fan):
    # the leftmost covered point is a turning point shared by two branches
    for t in (0.87, 0.93, 1.0):
        field = branch_decompose(snapshot(fixture_merge_fan, t))
        x = field.curve.x
        phase = min_action(field, np.linspace(x.min(), x.max(), 2001))
        for kink in phase.kinks:
            assert abs(kink.p_left - kink.p_right) > 1e-3
