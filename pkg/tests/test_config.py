import logging

import pytest

from wacert.config import Config
from wacert.logger import Logger, logger


def test_defaults_are_valid():
    assert Config.validate_config()
    assert Config.HENSEL_PRECISION >= 1
    assert Config.CERT_SCHEMA == "wa-cert/1"


@pytest.mark.parametrize("name, value", [
    ("HENSEL_PRECISION", 0),
    ("SEARCH_RADIUS", 0),
    ("SEARCH_BATCH", 0),
    ("SEARCH_WORKERS", 0),
    ("LOG_LEVEL", "LOUD"),
])
def test_invalid_settings(monkeypatch, name, value):
    monkeypatch.setattr(Config, name, value)
    with pytest.raises(ValueError):
        Config.validate_config()


def test_negative_positivity_bound(monkeypatch):
    from fractions import Fraction
    monkeypatch.setattr(Config, "POSITIVITY_BOUND", Fraction(-1))
    with pytest.raises(ValueError):
        Config.validate_config()


def test_logger_is_a_singleton():
    assert Logger() is logger
    assert logger.logger.name == "WACert"


def test_check_outcomes_are_logged(caplog):
    with caplog.at_level(logging.DEBUG, logger="WACert"):
        logger.log_check("condition_1", True, "17 = 1 mod 8")
        logger.log_check("condition_2", False)
        logger.log_search("a", 3)
    messages = [r.getMessage() for r in caplog.records]
    assert any("CHECK PASSED | condition_1" in m for m in messages)
    assert any("CHECK FAILED | condition_2" in m for m in messages)
    assert any("SEARCH EXHAUSTED | stage=a | tested=3" in m for m in messages)
