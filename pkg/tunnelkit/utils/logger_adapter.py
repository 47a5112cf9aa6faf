import logging
from typing import Union


class ScenarioLoggerAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        return "[%s] %s" % (self.extra["scenario"], msg), kwargs


def wrap_logger(
    logger: Union[logging.Logger, logging.LoggerAdapter], scenario_name: str
) -> logging.LoggerAdapter:
    if isinstance(logger, ScenarioLoggerAdapter):
        return logger
    return ScenarioLoggerAdapter(logger, {"scenario": scenario_name})
