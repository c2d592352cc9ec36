"""
Test suite for structured logging and metrics
"""
import json
import logging

from prometheus_client import REGISTRY

from facpl.analysis import check_completeness
from facpl.core.logger import JSONFormatter, setup_logging
from facpl.core.metrics import CheckTimer, MetricsCollector, active_checks


def sample(name: str, **labels) -> float:
    return REGISTRY.get_sample_value(name, labels) or 0.0


def test_json_formatter_copies_context_fields():
    record = logging.LogRecord("facpl.analysis", logging.INFO, __file__, 12, "Check finished", None, None)
    record.component = "analysis"
    record.property = "completeness"
    record.requests = 11520
    payload = json.loads(JSONFormatter().format(record))
    assert payload["level"] == "INFO"
    assert payload["message"] == "Check finished"
    assert payload["component"] == "analysis"
    assert payload["property"] == "completeness"
    assert payload["requests"] == 11520
    assert "verdict" not in payload


def test_setup_logging_does_not_stack_handlers():
    root = logging.getLogger()
    try:
        setup_logging("INFO")
        setup_logging("DEBUG", json_format=False)
        ours = [h for h in root.handlers if getattr(h, "_facpl", False)]
        assert len(ours) == 1
        assert root.level == logging.DEBUG
    finally:
        for handler in [h for h in root.handlers if getattr(h, "_facpl", False)]:
            root.removeHandler(handler)


def test_checks_are_counted(policy, banking_domain, banking_config):
    checks = sample("facpl_checks_total", property="completeness", verdict="holds")
    examined = sample("facpl_requests_enumerated_total")
    check_completeness(policy("policyC.facpl"), banking_domain, banking_config)
    assert sample("facpl_checks_total", property="completeness", verdict="holds") == checks + 1
    assert sample("facpl_requests_enumerated_total") == examined + banking_domain.request_count()


def test_check_timer_records_errors():
    before = active_checks._value.get()
    errors = sample("facpl_errors_total", error_type="ValueError", component="check:redundancy")
    try:
        with CheckTimer("redundancy") as timer:
            assert active_checks._value.get() == before + 1
            raise ValueError("boom")
    except ValueError:
        pass
    assert active_checks._value.get() == before
    assert timer.elapsed >= 0
    assert sample("facpl_errors_total", error_type="ValueError", component="check:redundancy") == errors + 1


def test_metrics_textfile(tmp_path):
    MetricsCollector.record_decision("permit")
    path = tmp_path / "facpl.prom"
    MetricsCollector.write_textfile(str(path))
    text = path.read_text()
    assert "facpl_decisions_total" in text
    assert sample("facpl_decisions_total", decision="permit") >= 1
