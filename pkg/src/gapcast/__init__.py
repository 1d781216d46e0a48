"""gapcast: harness for benchmarking model predictions of second-order
public-opinion beliefs about climate action from country-level inputs."""

__version__ = "0.1.0"
