"""
Runtime configuration for earring-kit
Values come from the environment; CLI flags and request fields override them.
"""

import logging
import os

DEFAULT_DEPTH = int(os.getenv('HEG_DEPTH', '8'))
DEFAULT_UNIVERSE = os.getenv('HEG_UNIVERSE', 'L=3,len=6')
SIGMA_BUDGET = int(os.getenv('HEG_SIGMA_BUDGET', '20000'))
LOG_LEVEL = os.getenv('HEG_LOG_LEVEL', 'WARNING')
REPORT_DIR = os.getenv('HEG_REPORT_DIR', 'reports')
PORT = int(os.getenv('PORT', '5000'))

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(level: str = None) -> None:
    """Install one stream handler on the root logger (idempotent)"""
    root = logging.getLogger()
    root.setLevel((level or LOG_LEVEL).upper())
    if not any(getattr(h, '_heg', False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._heg = True
        root.addHandler(handler)
