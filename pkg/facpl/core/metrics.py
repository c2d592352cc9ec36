"""
Prometheus-style metrics collection for observability
"""
from prometheus_client import Counter, Histogram, Gauge, REGISTRY, generate_latest, write_to_textfile
from typing import Optional
import time

# Evaluation metrics
decisions_total = Counter(
    "facpl_decisions_total",
    "Authorisation decisions returned by the eval command",
    ["decision"]
)

# Analysis metrics
checks_total = Counter(
    "facpl_checks_total",
    "Property checks completed",
    ["property", "verdict"]
)

check_duration_seconds = Histogram(
    "facpl_check_duration_seconds",
    "Property check duration in seconds",
    ["property"],
    buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0]
)

requests_enumerated_total = Counter(
    "facpl_requests_enumerated_total",
    "Requests examined by exhaustive checks"
)

# Solver metrics
solver_calls_total = Counter(
    "facpl_solver_calls_total",
    "External SMT solver invocations",
    ["verdict"]
)

solver_duration_seconds = Histogram(
    "facpl_solver_duration_seconds",
    "External SMT solver wall time",
    buckets=[0.01, 0.1, 0.5, 1.0, 5.0, 30.0]
)

active_checks = Gauge(
    "facpl_active_checks",
    "Number of property checks in progress"
)

# Error metrics
errors_total = Counter(
    "facpl_errors_total",
    "Total errors encountered",
    ["error_type", "component"]
)


class MetricsCollector:
    """Static facade over the engine's metrics"""

    @staticmethod
    def record_decision(decision: str):
        decisions_total.labels(decision=decision).inc()

    @staticmethod
    def record_check(property_name: str, holds: bool, requests: int, duration: float):
        """Record a finished property check"""
        verdict = "holds" if holds else "violated"
        checks_total.labels(property=property_name, verdict=verdict).inc()
        check_duration_seconds.labels(property=property_name).observe(duration)
        requests_enumerated_total.inc(requests)

    @staticmethod
    def record_solver_call(verdict: str, duration: float):
        solver_calls_total.labels(verdict=verdict).inc()
        solver_duration_seconds.observe(duration)

    @staticmethod
    def record_error(error_type: str, component: str):
        """Record error occurrence"""
        errors_total.labels(error_type=error_type, component=component).inc()

    @staticmethod
    def get_metrics() -> bytes:
        """Get Prometheus metrics in text format"""
        return generate_latest()

    @staticmethod
    def write_textfile(path: str):
        """Write the text exposition to a file (node-exporter textfile style)"""
        write_to_textfile(path, REGISTRY)


class CheckTimer:
    """Context manager timing one property check"""

    def __init__(self, property_name: Optional[str] = None):
        self.property_name = property_name
        self.start_time: Optional[float] = None
        self.elapsed: float = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        active_checks.inc()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            self.elapsed = time.perf_counter() - self.start_time
            if exc_type and self.property_name:
                MetricsCollector.record_error(exc_type.__name__, f"check:{self.property_name}")
        active_checks.dec()
