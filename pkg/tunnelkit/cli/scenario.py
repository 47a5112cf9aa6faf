import os
from typing import Dict, List

import pydantic
import yaml

from tunnelkit.errors import ScenarioValidationError
from tunnelkit.models.scenario import Scenario

BUILTIN_DIR = os.path.join(os.path.dirname(__file__), "scenarios")
SCENARIO_SUFFIX = ".yaml"


def builtin_names() -> List[str]:
    return sorted(
        name[: -len(SCENARIO_SUFFIX)]
        for name in os.listdir(BUILTIN_DIR)
        if name.endswith(SCENARIO_SUFFIX)
    )


def builtin_path(name: str) -> str:
    return os.path.join(BUILTIN_DIR, name + SCENARIO_SUFFIX)


def parse_scenario(data, source: str = "<memory>") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioValidationError(f"{source}: a scenario file must hold a mapping")
    try:
        return Scenario.parse_obj(data)
    except (pydantic.ValidationError, ValueError) as e:
        raise ScenarioValidationError(f"{source}: {e}") from e


def load_scenario(source: str) -> Scenario:
    """A scenario from a YAML path or the name of a built-in."""
    if os.path.isfile(source):
        path = source
    elif source in builtin_names():
        path = builtin_path(source)
    else:
        raise ScenarioValidationError(
            f"{source!r} is neither a scenario file nor a built-in scenario"
        )
    with open(path) as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ScenarioValidationError(f"{path}: {e}") from e
    return parse_scenario(data, path)


def builtin_descriptions() -> Dict[str, str]:
    return {name: load_scenario(name).description for name in builtin_names()}
