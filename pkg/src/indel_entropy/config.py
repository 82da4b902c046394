"""Configuration file management for Indel Entropy."""

import os
from pathlib import Path
from typing import Any

import yaml

CONFIG_DIR = Path.home() / ".indel-entropy"
CONFIG_FILE = CONFIG_DIR / "config.yaml"

BUDGET_ENV = "INDEL_ENTROPY_BUDGET"
MATRIX_BUDGET_ENV = "INDEL_ENTROPY_MATRIX_BUDGET"

DEFAULT_BUDGET = 20_000_000
DEFAULT_MATRIX_BUDGET = 2**26
DEFAULT_TOLERANCE = 1e-9


class BudgetExceededError(ValueError):
    """A computation would exceed its configured size budget."""


def _ensure_config_dir():
    """Ensure the config directory exists."""
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)


def load_config() -> dict[str, Any]:
    """
    Load configuration from file.

    Returns:
        Dictionary of configuration values, empty dict if file doesn't exist
    """
    if not CONFIG_FILE.exists():
        return {}

    with open(CONFIG_FILE) as f:
        return yaml.safe_load(f) or {}


def save_config(config: dict[str, Any]):
    """
    Save configuration to file.

    Args:
        config: Dictionary of configuration values to save
    """
    _ensure_config_dir()

    with open(CONFIG_FILE, "w") as f:
        yaml.dump(config, f, default_flow_style=False)


def get_config_value(key: str) -> Any:
    """
    Get a configuration value by key.

    Args:
        key: Configuration key to retrieve (supports both hyphen and underscore)

    Returns:
        Configuration value or None if not found
    """
    config = load_config()
    value = config.get(key)
    if value is None:
        alt_key = key.replace("-", "_") if "-" in key else key.replace("_", "-")
        value = config.get(alt_key)
    return value


def set_config_value(key: str, value: Any):
    """
    Set a configuration value.

    Args:
        key: Configuration key to set (will be normalized to hyphen format)
        value: Value to set
    """
    config = load_config()

    normalized_key = key.replace("_", "-")
    config[normalized_key] = value

    if key != normalized_key and key in config:
        del config[key]

    save_config(config)


def _positive_int(raw: Any, source: str) -> int:
    try:
        value = int(float(raw))
    except (TypeError, ValueError):
        raise ValueError(f"{source} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{source} must be positive, got {value}")
    return value


def _int_setting(env_var: str | None, key: str, default: int) -> int:
    if env_var and (raw := os.environ.get(env_var)):
        return _positive_int(raw, env_var)
    if (raw := get_config_value(key)) is not None:
        return _positive_int(raw, f"config key '{key}'")
    return default


def get_budget() -> int:
    """
    Get the word budget for exhaustive scans.

    Returns:
        INDEL_ENTROPY_BUDGET env var, or config 'budget', or 2·10^7
    """
    return _int_setting(BUDGET_ENV, "budget", DEFAULT_BUDGET)


def get_matrix_budget() -> int:
    """
    Get the cell budget for dense transition matrices.

    Returns:
        INDEL_ENTROPY_MATRIX_BUDGET env var, or config 'matrix-budget', or 2^26
    """
    return _int_setting(MATRIX_BUDGET_ENV, "matrix-budget", DEFAULT_MATRIX_BUDGET)


def get_default_jobs() -> int:
    """Get the default worker count from config, defaults to 1."""
    return _int_setting(None, "jobs", 1)


def get_tolerance() -> float:
    """Get the comparison tolerance in bits from config, defaults to 1e-9."""
    raw = get_config_value("tolerance")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ValueError(f"config key 'tolerance' must be a number, got {raw!r}") from None


def get_default_format() -> str:
    """
    Get default output format from config.

    Returns:
        Output format ('csv', 'json', or 'pretty'), defaults to 'pretty'
    """
    return get_config_value("default_format") or "pretty"


def check_budget(
    size: int,
    limit: int,
    *,
    what: str,
    flag: str = "--budget",
    env_var: str = BUDGET_ENV,
):
    """
    Raise when a computation of the given size exceeds its budget.

    Args:
        size: Number of words (or matrix cells) the computation needs
        limit: Allowed maximum
        what: Short description used in the message
        flag: CLI flag that raises the limit
        env_var: Environment variable that raises the limit

    Raises:
        BudgetExceededError: If size > limit
    """
    if size > limit:
        raise BudgetExceededError(
            f"{what} needs {size} but the budget is {limit}; "
            f"raise it with {flag} or {env_var}"
        )


KNOWN_KEYS = ("budget", "matrix-budget", "jobs", "tolerance", "default-format")


def coerce_value(key: str, raw: str) -> Any:
    """
    Convert a command-line string to the type stored for a config key.

    Args:
        key: Hyphenated config key
        raw: Value as typed by the user

    Returns:
        int for budgets and jobs, float for tolerance, str otherwise

    Raises:
        ValueError: If the value does not fit the key
    """
    if key in ("budget", "matrix-budget", "jobs"):
        return _positive_int(raw, key)
    if key == "tolerance":
        try:
            value = float(raw)
        except ValueError:
            raise ValueError(f"tolerance must be a number, got {raw!r}") from None
        if value < 0:
            raise ValueError(f"tolerance must be nonnegative, got {value}")
        return value
    if key == "default-format" and raw not in ("csv", "json", "pretty"):
        raise ValueError(f"default-format must be csv, json or pretty, got {raw!r}")
    return raw
