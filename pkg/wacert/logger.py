"""
Logging module for the weak-approximation certifier
Structured logging with file and console output; console goes to stderr
so that stdout only carries JSON reports.
"""

import logging
import sys
from pathlib import Path

from wacert.config import Config


class Logger:
    """Process-wide logger for certification runs"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self._initialized = True
        self.logger = logging.getLogger('WACert')
        self.logger.setLevel(getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO))

        if Config.LOG_FILE:
            log_dir = Path(Config.LOG_FILE).parent
            log_dir.mkdir(parents=True, exist_ok=True)

            file_handler = logging.FileHandler(Config.LOG_FILE)
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s | %(levelname)s | %(funcName)s | %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            ))
            self.logger.addHandler(file_handler)

        if Config.LOG_TO_CONSOLE:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(logging.INFO)
            console_handler.setFormatter(logging.Formatter(
                '%(asctime)s | %(levelname)s | %(message)s',
                datefmt='%H:%M:%S'
            ))
            self.logger.addHandler(console_handler)

    def info(self, message: str):
        self.logger.info(message)

    def debug(self, message: str):
        self.logger.debug(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str):
        self.logger.error(message)

    def critical(self, message: str):
        self.logger.critical(message)

    def log_stage(self, stage: str, detail: str = ''):
        """Log the start of a pipeline stage"""
        suffix = f" | {detail}" if detail else ''
        self.info(f"▶ STAGE {stage}{suffix}")

    def log_check(self, name: str, passed: bool, detail: str = ''):
        """Log the outcome of a single mathematical check"""
        if passed:
            self.debug(f"✅ CHECK PASSED | {name} | {detail}")
        else:
            self.warning(f"❌ CHECK FAILED | {name} | {detail}")

    def log_witness(self, place: str, kind: str):
        self.debug(f"🔎 WITNESS | place={place} | kind={kind}")

    def log_search(self, stage: str, tested: int, found: str = None):
        if found is None:
            self.warning(f"🚨 SEARCH EXHAUSTED | stage={stage} | tested={tested}")
        else:
            self.info(f"💡 SEARCH HIT | stage={stage} | tested={tested} | element={found}")


# Create singleton instance
logger = Logger()
