import logging
from pathlib import Path

import pytest

from src.configmodels.harness_config import CONFIG_DIR
from src.construction import ConstructionConfig, StageRecord, build_prefix
from src.numeric import SetPrefix
from src.utils.log_services import APP_LOGGER_NAME

CONSTRUCTION_DIR = CONFIG_DIR / "construction_configs"
HARNESS_DIR = CONFIG_DIR / "harness_configs"


@pytest.fixture(autouse=True)
def detach_log_handlers():
    """The CLI attaches stdout handlers to the app logger; drop them so each test starts clean."""
    yield
    logger = logging.getLogger(APP_LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture(scope="session")
def construction_dir() -> Path:
    return CONSTRUCTION_DIR


@pytest.fixture(scope="session")
def harness_dir() -> Path:
    return HARNESS_DIR


@pytest.fixture(scope="session")
def reference_config() -> ConstructionConfig:
    return ConstructionConfig.from_yaml(CONSTRUCTION_DIR / "reference_p1_4.yaml")


@pytest.fixture(scope="session")
def reference_run(reference_config: ConstructionConfig) -> tuple[SetPrefix, list[StageRecord]]:
    return build_prefix(reference_config)
