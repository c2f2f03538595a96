import logging

from src.utils.log import configure_logging, key_value_formatter, log_event


def _record(**fields):
    return logging.makeLogRecord({
        "name": "src.datasets.base",
        "levelno": logging.WARNING,
        "levelname": "WARNING",
        "msg": "adapter_skipped_labels",
        "fields": fields,
    })


def test_formatter_renders_event_and_fields():
    line = key_value_formatter().format(_record(labels="unicorn", count=2))
    assert line.startswith("timestamp=")
    assert "level='warning'" in line
    assert "logger='src.datasets.base'" in line
    assert "event='adapter_skipped_labels'" in line
    assert "labels='unicorn'" in line
    assert "count=2" in line


def test_formatter_without_fields():
    record = logging.makeLogRecord({"name": "src.x", "levelno": logging.INFO, "levelname": "INFO", "msg": "started"})
    assert "event='started'" in key_value_formatter().format(record)


def test_log_event_carries_fields(caplog):
    logger = logging.getLogger("src.test")
    with caplog.at_level(logging.INFO, logger="src.test"):
        log_event(logger, "embedded", requested=3, computed=1)
    assert caplog.records[-1].fields == {"requested": 3, "computed": 1}


def test_configure_logging_installs_one_handler():
    root = logging.getLogger()
    level = root.level
    configure_logging()
    configure_logging(verbose=True)
    handlers = [h for h in root.handlers if h.get_name() == "tspe-kv"]
    try:
        assert len(handlers) == 1
        assert handlers[0].level == logging.DEBUG
        assert isinstance(handlers[0].formatter, type(key_value_formatter()))
    finally:
        for handler in handlers:
            root.removeHandler(handler)
        root.setLevel(level)
