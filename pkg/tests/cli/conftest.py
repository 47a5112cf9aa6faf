import pytest


def write_scenario(path, body: str) -> str:
    path.write_text(body)
    return str(path)


SMALL_CONVEX = """\
schema: 1
name: small-convex
initial_data:
  phase: tanh-plus
grids:
  x_min: -1.0
  x_max: 1.0
  label_spacing: 0.01
  t_max: 0.2
  output_dt: 0.05
experiment:
  type: experiment_characteristics
  expect_caustic: {expect_caustic}
  phase_points: 201
"""


@pytest.fixture
def fixture_small_convex(tmp_path):
    return write_scenario(tmp_path / "small-convex.yaml", SMALL_CONVEX.format(expect_caustic="false"))


@pytest.fixture
def fixture_small_convex_expecting_caustic(tmp_path):
    return write_scenario(
        tmp_path / "small-convex-caustic.yaml", SMALL_CONVEX.format(expect_caustic="true")
    )


@pytest.fixture
def fixture_reference_with_potential(tmp_path):
    return write_scenario(
        tmp_path / "reference-potential.yaml",
        "schema: 1\n"
        "name: reference-potential\n"
        "symbol:\n"
        "  type: symbol_potential\n"
        "  potential:\n"
        "    type: function_sine\n"
        "    amplitude: 0.1\n"
        "epsilons: [0.05]\n"
        "experiment:\n"
        "  type: experiment_reference\n",
    )
