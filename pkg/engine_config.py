from dataclasses import dataclass
import logging
import os

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


@dataclass(frozen=True)
class EngineSettings:
    question_fuel: int = 64
    step_fuel: int = 256
    seed: int = 42
    cases: int = 200
    log_level: str = "WARNING"


def _int_setting(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}")
    if value < 0:
        raise ValueError(f"Environment variable {name} must be non-negative, got {value}")
    return value


def load_settings():
    """
    Reads the engine defaults from the environment (and .env).
    Returns:
        - EngineSettings; command line flags override each field.
    """
    level = os.getenv("ORACLE_ENGINE_LOG_LEVEL", "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ValueError(f"Environment variable ORACLE_ENGINE_LOG_LEVEL is not a log level: {level!r}")
    return EngineSettings(
        question_fuel=_int_setting("ORACLE_ENGINE_QFUEL", 64),
        step_fuel=_int_setting("ORACLE_ENGINE_SFUEL", 256),
        seed=_int_setting("ORACLE_ENGINE_SEED", 42),
        cases=_int_setting("ORACLE_ENGINE_CASES", 200),
        log_level=level,
    )
