import logging
import sys
from typing import Union

def configure_console_logger(level: Union[int, str] = logging.INFO):
    """Root logger to stderr, since stdout carries the reports. Calling it again swaps the handler."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logger = logging.getLogger()
    logger.setLevel(level)

    for handler in [h for h in logger.handlers if getattr(h, "_console_logger", False)]:
        logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler._console_logger = True
    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(name)s - %(message)s')
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
