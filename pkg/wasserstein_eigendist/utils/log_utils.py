"""
Logging setup for the command-line front end.

Library modules only create named loggers; handlers are installed here, once, by the CLI.
"""

import logging

PACKAGE_LOGGER = "wasserstein_eigendist"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(verbosity: int = 0) -> logging.Logger:
    """
    Attach a stderr handler to the package logger.

    Args:
        verbosity: -1 for WARNING, 0 for INFO, 1 or more for DEBUG

    Returns:
        The configured package logger
    """
    if verbosity < 0:
        level = logging.WARNING
    elif verbosity == 0:
        level = logging.INFO
    else:
        level = logging.DEBUG

    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(level)
    for handler in list(logger.handlers):
        if getattr(handler, '_eigendist_handler', False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._eigendist_handler = True
    logger.addHandler(handler)
    return logger
