import logging
import json
import sys
from datetime import datetime, timezone
from typing import Any, Dict

# Context fields copied from `extra={...}` into the JSON record
EXTRA_FIELDS = ("component", "property", "verdict", "requests", "duration_ms", "error_type", "path", "decision")


class JSONFormatter(logging.Formatter):
    """Structured JSON logging formatter"""

    def format(self, record: logging.LogRecord) -> str:
        log_data: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        for field in EXTRA_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)
        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def setup_logging(level: str = "WARNING", json_format: bool = True) -> None:
    """Setup structured logging on standard error (standard output carries results)"""
    log_level = getattr(logging, level.upper(), logging.WARNING)

    handler = logging.StreamHandler(sys.stderr)

    if json_format:
        handler.setFormatter(JSONFormatter())
    else:
        handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    # Repeated CLI invocations in one process (tests) must not stack handlers
    for existing in list(root_logger.handlers):
        if getattr(existing, "_facpl", False):
            root_logger.removeHandler(existing)
    handler._facpl = True  # type: ignore[attr-defined]
    root_logger.addHandler(handler)

    logging.debug("✅ Structured logging initialized", extra={"component": "logger"})
