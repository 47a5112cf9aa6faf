import logging

from tunnelkit.utils.logger_adapter import ScenarioLoggerAdapter, wrap_logger


def test_prefixes_the_scenario_name(caplog):
    logger = logging.getLogger("tests.utils.adapter")
    adapter = wrap_logger(logger, "caustic-tanh")
    with caplog.at_level(logging.INFO, logger="tests.utils.adapter"):
        adapter.info("t* = %.3f", 0.5)
    assert caplog.records[-1].getMessage() == "[caustic-tanh] t* = 0.500"


def test_wrapping_twice_keeps_the_first_name():
    adapter = wrap_logger(logging.getLogger("tests.utils.adapter"), "a")
    assert wrap_logger(adapter, "b") is adapter
    assert isinstance(adapter, ScenarioLoggerAdapter)
