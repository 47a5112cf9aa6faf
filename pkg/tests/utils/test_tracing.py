from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor

from tunnelkit.utils.tracing import DurationSpanExporter


def test_collects_durations_per_span_name():
    exporter = DurationSpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    tracer = provider.get_tracer(__name__)
    for _ in range(3):
        with tracer.start_as_current_span("hamflow.evolve_fan"):
            pass
    with tracer.start_as_current_span("reference.heat_kernel_convolve"):
        pass
    assert len(exporter.spans["hamflow.evolve_fan"]) == 3
    means = exporter.mean_durations()
    assert set(means) == {"hamflow.evolve_fan", "reference.heat_kernel_convolve"}
    assert all(value >= 0.0 for value in means.values())
