"""
Structured Logging Configuration for random-cc

Provides structured logging with JSON output, log levels, and run/tree context
so that per-tree work can be traced inside a sampling run.
"""

import json
import logging
import sys
import threading
import time
import uuid
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler

# Context variables carried into every structured record
run_id: ContextVar[str] = ContextVar("run_id", default="")
tree_index: ContextVar[int] = ContextVar("tree_index", default=-1)

_RESERVED_ATTRS = {
    "name", "msg", "args", "created", "filename", "funcName",
    "levelname", "levelno", "lineno", "module", "msecs",
    "pathname", "process", "processName", "relativeCreated",
    "stack_info", "exc_info", "exc_text", "thread", "threadName",
    "message", "taskName",
}


class StructuredFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "run_id": run_id.get(""),
            "tree_index": tree_index.get(-1),
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        extra_fields = {}
        for key, value in record.__dict__.items():
            if key not in _RESERVED_ATTRS:
                try:
                    json.dumps(value)  # Check if serializable
                    extra_fields[key] = value
                except (TypeError, ValueError):
                    extra_fields[key] = str(value)

        if extra_fields:
            log_data["extra"] = extra_fields

        return json.dumps(log_data)


class SamplingMetrics:
    """Thread-safe counters, gauges, histograms and timers for sampling runs"""

    def __init__(self):
        self._lock = threading.Lock()
        self._metrics: Dict[str, Any] = {
            "counters": {},
            "gauges": {},
            "histograms": {},
        }
        self._start_times: Dict[str, float] = {}

    def increment(self, name: str, value: int = 1, labels: Optional[Dict] = None):
        """Increment a counter metric"""
        key = self._make_key(name, labels)
        with self._lock:
            self._metrics["counters"][key] = (
                self._metrics["counters"].get(key, 0) + value
            )

    def gauge(self, name: str, value: float, labels: Optional[Dict] = None):
        key = self._make_key(name, labels)
        with self._lock:
            self._metrics["gauges"][key] = value

    def histogram(self, name: str, value: float, labels: Optional[Dict] = None):
        key = self._make_key(name, labels)
        with self._lock:
            self._metrics["histograms"].setdefault(key, []).append(value)

    def counter(self, name: str, labels: Optional[Dict] = None) -> int:
        with self._lock:
            return self._metrics["counters"].get(self._make_key(name, labels), 0)

    def start_timer(self, name: str):
        with self._lock:
            self._start_times[name] = time.perf_counter()

    def stop_timer(self, name: str, labels: Optional[Dict] = None) -> float:
        """Stop a timer and record the duration"""
        with self._lock:
            started = self._start_times.pop(name, None)
        if started is None:
            return 0.0
        duration = time.perf_counter() - started
        self.histogram(f"{name}_duration_seconds", duration, labels)
        return duration

    def _make_key(self, name: str, labels: Optional[Dict]) -> str:
        if not labels:
            return name
        label_str = ",".join(f"{k}={v}" for k, v in sorted(labels.items()))
        return f"{name}{{{label_str}}}"

    def get_summary(self) -> Dict[str, Any]:
        """Get a summary of all metrics"""
        with self._lock:
            summary = {
                "counters": dict(self._metrics["counters"]),
                "gauges": dict(self._metrics["gauges"]),
                "histograms": {},
            }
            histograms = {k: list(v) for k, v in self._metrics["histograms"].items()}

        for key, values in histograms.items():
            if values:
                sorted_values = sorted(values)
                n = len(sorted_values)
                summary["histograms"][key] = {
                    "count": n,
                    "min": sorted_values[0],
                    "max": sorted_values[-1],
                    "mean": sum(sorted_values) / n,
                    "p50": sorted_values[n // 2],
                }

        return summary

    def reset(self):
        with self._lock:
            self._metrics = {"counters": {}, "gauges": {}, "histograms": {}}
            self._start_times = {}


# Global metrics instance
metrics = SamplingMetrics()


def setup_logging(
    level: str = "INFO",
    structured: bool = False,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Set up logging for a CLI run.

    stdout carries primary outputs only, so every handler writes to stderr or a file.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        structured: Use JSON structured logging instead of the rich console handler
        log_file: Optional file path for log output

    Returns:
        Root logger instance
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level.upper()))
    root_logger.handlers = []

    if structured:
        formatter: logging.Formatter = StructuredFormatter()
        console_handler: logging.Handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
    else:
        formatter = logging.Formatter(
            "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
        )
        console_handler = RichHandler(
            console=Console(stderr=True), rich_tracebacks=True, show_path=False
        )
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(
            StructuredFormatter() if structured else formatter
        )
        root_logger.addHandler(file_handler)

    return root_logger


def set_run_id(rid: Optional[str] = None) -> str:
    """Set the run correlation ID for the current context"""
    value = rid or str(uuid.uuid4())[:8]
    run_id.set(value)
    return value


def set_tree_index(index: int):
    tree_index.set(index)


class LoggedOperation:
    """Context manager for logging operation timing and success/failure"""

    def __init__(
        self,
        operation_name: str,
        logger: Optional[logging.Logger] = None,
        log_level: int = logging.INFO,
        **extra_context,
    ):
        self.operation_name = operation_name
        self.logger = logger or logging.getLogger(__name__)
        self.log_level = log_level
        self.extra_context = extra_context
        self.duration = 0.0
        self._timer_key = f"{operation_name}#{uuid.uuid4().hex[:8]}"

    def __enter__(self):
        self.logger.log(
            self.log_level,
            f"Starting {self.operation_name}",
            extra={"operation": self.operation_name, "status": "started", **self.extra_context},
        )
        metrics.start_timer(self._timer_key)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = metrics.stop_timer(self._timer_key)
        if exc_type is None:
            self.logger.log(
                self.log_level,
                f"Completed {self.operation_name} in {self.duration:.3f}s",
                extra={
                    "operation": self.operation_name,
                    "status": "success",
                    "duration_seconds": self.duration,
                    **self.extra_context,
                },
            )
            metrics.increment(f"{self.operation_name}_success")
        else:
            self.logger.error(
                f"Failed {self.operation_name} after {self.duration:.3f}s: {exc_val}",
                extra={
                    "operation": self.operation_name,
                    "status": "failed",
                    "duration_seconds": self.duration,
                    "error_type": exc_type.__name__,
                    **self.extra_context,
                },
            )
            metrics.increment(f"{self.operation_name}_failure")
        return False  # Don't suppress exceptions
