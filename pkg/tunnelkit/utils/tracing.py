import logging
from collections import defaultdict
from threading import Lock
from typing import Dict, List, Optional, Sequence

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import ReadableSpan, TracerProvider
from opentelemetry.sdk.trace.export import (
    SimpleSpanProcessor,
    SpanExporter,
    SpanExportResult,
)

NANOSECONDS_PER_SECOND = 1e9


class DurationSpanExporter(SpanExporter):
    """Collects finished span durations (seconds) per span name."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        super().__init__()
        self.logger = logger or logging.getLogger(__name__)
        self.spans: Dict[str, List[float]] = defaultdict(list)
        self._lock = Lock()

    def export(self, spans: Sequence[ReadableSpan]) -> SpanExportResult:
        with self._lock:
            for span in spans:
                if span.end_time is None or span.start_time is None:
                    continue
                duration_ns = span.end_time - span.start_time
                self.spans[span.name].append(duration_ns / NANOSECONDS_PER_SECOND)
        return SpanExportResult.SUCCESS

    def mean_durations(self) -> Dict[str, float]:
        with self._lock:
            return {
                name: sum(durations) / len(durations)
                for name, durations in self.spans.items()
                if durations
            }

    def shutdown(self) -> None:
        for name, mean in sorted(self.mean_durations().items()):
            self.logger.info("%s: %.6f s (mean of %d)", name, mean, len(self.spans[name]))


def setup_tracing(
    logger: Optional[logging.Logger] = None,
) -> DurationSpanExporter:
    provider = TracerProvider(resource=Resource.create({}))
    span_exporter = DurationSpanExporter(logger=logger)
    provider.add_span_processor(SimpleSpanProcessor(span_exporter))
    trace.set_tracer_provider(provider)
    return span_exporter
