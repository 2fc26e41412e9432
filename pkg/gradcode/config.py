import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from gradcode.errors import ConfigError


load_dotenv()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_OUTPUT_DIR = "runs"


def get_seed(seed: Optional[int] = None) -> int:
    """
    Resolve the default random seed.

    An explicit seed wins; otherwise GRADCODE_SEED is read from the
    environment (or a .env file), falling back to 0.
    """
    if seed is not None:
        return int(seed)
    raw = os.getenv("GRADCODE_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"GRADCODE_SEED must be an integer, got {raw!r}") from exc


def get_output_dir(path: Optional[str] = None) -> Path:
    return Path(path or os.getenv("GRADCODE_OUTPUT_DIR") or DEFAULT_OUTPUT_DIR)


def get_log_level(level: Optional[str] = None) -> int:
    name = (level or os.getenv("GRADCODE_LOG_LEVEL") or "INFO").upper()
    value = logging.getLevelName(name)
    if not isinstance(value, int):
        raise ConfigError(f"Unknown log level: {name}")
    return value


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(level=get_log_level(level), format=LOG_FORMAT)
