import logging
from pathlib import Path
import sys

APP_LOGGER_NAME = "gamma"
LOG_FORMAT = "%(asctime)s [%(levelname)s] - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_custom_logging(
        log_file_path: str | Path | None,
        logger_name: str = APP_LOGGER_NAME,
        level: int = logging.INFO,
) -> logging.Logger:
    """
    Sets up application-specific logging.
    :param log_file_path: Folder in which the log file is written. None logs to stdout only.
    :param logger_name: the custom logger name, also used as the log file name.
    :param level: logging level of the logger.
    :return: Configured custom_logger object.
    """
    logger = logging.getLogger(name=logger_name)
    logger.setLevel(level)
    logger.propagate = False  # VERY IMPORTANT: prevents double logs if root logger is also logging

    # Avoid adding handlers multiple times if setup is called more than once
    if not logger.handlers:
        formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)

        if log_file_path is not None:
            log_folder = Path(log_file_path)
            log_folder.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_folder / f"{logger_name}.log")
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        stream_handler = logging.StreamHandler(sys.stdout)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    return logger


def get_logger(module_name: str) -> logging.Logger:
    """
    Child logger of the application logger for a library module.
    Library modules never attach handlers; the CLI does it once through setup_custom_logging.
    :param module_name: usually __name__ of the calling module.
    :return: the child logger.
    """
    suffix = module_name.removeprefix("src.")
    return logging.getLogger(f"{APP_LOGGER_NAME}.{suffix}")
