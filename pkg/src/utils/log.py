import logging
import sys

import structlog

_HANDLER_NAME = "tspe-kv"


def _merge_fields(_, __, event_dict: dict) -> dict:
    # structured fields arrive through extra={"fields": {...}}; see log_event
    record = event_dict.get("_record")
    event_dict.update(getattr(record, "fields", None) or {})
    return event_dict


def key_value_formatter() -> structlog.stdlib.ProcessorFormatter:
    """Renders stdlib records as ``timestamp=... level=... logger=... event=... key=value``."""
    return structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=[
            structlog.processors.TimeStamper(fmt="%Y-%m-%dT%H:%M:%S"),
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            _merge_fields,
        ],
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            structlog.processors.KeyValueRenderer(
                key_order=["timestamp", "level", "logger", "event"], drop_missing=True
            ),
        ],
    )


def log_event(logger: logging.Logger, event: str, level: int = logging.INFO, **fields) -> None:
    """Emit one structured log line."""
    logger.log(level, event, extra={"fields": fields})


def configure_logging(verbose: bool = False) -> None:
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    for handler in root.handlers:
        if handler.get_name() == _HANDLER_NAME:
            handler.setLevel(root.level)
            return
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(key_value_formatter())
    handler.setLevel(root.level)
    root.addHandler(handler)
    # third-party clients are chatty at INFO
    for noisy in ("httpx", "openai", "numba", "urllib3"):
        logging.getLogger(noisy).setLevel(logging.WARNING)
