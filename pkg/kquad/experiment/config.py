"""
Study configuration.

A study config is an ml_collections ConfigDict. On disk it is a flat text file of `key = value` lines, where list
values are comma separated and `#` starts a comment, e.g.

    # configs/quick.cfg
    n_grid = 16, 32, 64
    orders_r = 1, 2
    designs = uniform

Command line overrides (`--set key=value`) are applied after the file.
"""

from typing import Any, Iterable, Tuple

from ml_collections import ConfigDict

from kquad.designs import DesignLabel
from kquad.errors import ConfigError
from kquad.kernels import SUPPORTED_ORDERS

# Roughly sqrt(2)-geometric over about 1.8 decades of n.
DEFAULT_N_GRID = (16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512, 724, 1024)
STUDY_DESIGNS = (DesignLabel.UNIFORM.value, DesignLabel.NONUNIFORM.value)
MIN_N = 8

_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


def get_config() -> ConfigDict:
    return ConfigDict(
        dict(
            n_grid=list(DEFAULT_N_GRID),
            orders_r=list(SUPPORTED_ORDERS),
            orders_s=list(SUPPORTED_ORDERS),
            designs=list(STUDY_DESIGNS),
            scale=0.1,
            wce_floor=1e-11,
            # Diagonal jitter for the BQ solve. Must stay 0 for reproduction runs.
            jitter=0.0,
            # Skip cells whose extrapolated worst case error is already below wce_floor.
            extrapolate_floor=True,
            # Condition proxy above which BQ weights are not trusted. A series stops at the first n that
            # reaches it, measured or extrapolated from the previous cells.
            max_condition=1e10,
        )
    )


def parse_var(s: str) -> Tuple[str, str]:
    """Parse a key, value pair separated by the first '='."""
    key, sep, value = s.partition("=")
    if not sep:
        raise ValueError(f"expected key=value, got {s!r}")
    return key.strip(), value.strip()


def _parse_scalar(raw: str, like: Any) -> Any:
    if isinstance(like, bool):
        lowered = raw.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if isinstance(like, int):
        return int(raw)
    if isinstance(like, float):
        return float(raw)
    return raw


def parse_value(raw: str, default: Any) -> Any:
    """Parse raw text into the type of the default value."""
    if isinstance(default, (list, tuple)):
        like = default[0] if len(default) > 0 else ""
        return [_parse_scalar(item.strip(), like) for item in raw.split(",") if item.strip()]
    return _parse_scalar(raw, default)


def _apply(config: ConfigDict, assignment: str, context: str) -> None:
    try:
        key, raw = parse_var(assignment)
    except ValueError as e:
        raise ConfigError(f"{context}: {e}") from e
    if key not in config:
        raise ConfigError(f"{context}: unknown key {key!r}, expected one of {sorted(config.keys())}")
    try:
        config[key] = parse_value(raw, get_config()[key])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{context}: invalid value for {key!r}: {e}") from e


def validate_config(config: ConfigDict) -> None:
    n_grid = list(config.n_grid)
    if len(n_grid) == 0:
        raise ConfigError("n_grid must not be empty.")
    if any(b <= a for a, b in zip(n_grid[:-1], n_grid[1:], strict=True)):
        raise ConfigError(f"n_grid must be strictly increasing, got {n_grid}.")
    if n_grid[0] < MIN_N:
        raise ConfigError(f"n_grid values must be at least {MIN_N}, got {n_grid[0]}.")
    for key in ("orders_r", "orders_s"):
        orders = list(config[key])
        if len(orders) == 0 or any(order not in SUPPORTED_ORDERS for order in orders):
            raise ConfigError(f"{key} must be a non-empty subset of {SUPPORTED_ORDERS}, got {orders}.")
    designs = list(config.designs)
    if len(designs) == 0 or any(design not in STUDY_DESIGNS for design in designs):
        raise ConfigError(f"designs must be a non-empty subset of {STUDY_DESIGNS}, got {designs}.")
    if not 0 < config.scale <= 0.5:
        raise ConfigError(f"scale must lie in (0, 0.5], got {config.scale}.")
    if config.wce_floor < 0:
        raise ConfigError(f"wce_floor must be nonnegative, got {config.wce_floor}.")
    if config.jitter < 0:
        raise ConfigError(f"jitter must be nonnegative, got {config.jitter}.")
    if not config.max_condition >= 1:
        raise ConfigError(f"max_condition must be at least 1, got {config.max_condition}.")


def load_config(path: str | None = None, overrides: Iterable[str] = ()) -> ConfigDict:
    config = get_config()
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as f:
                lines = f.readlines()
        except OSError as e:
            raise ConfigError(f"Could not read config file {path}: {e}") from e
        for lineno, line in enumerate(lines, start=1):
            line = line.split("#", 1)[0].strip()
            if line:
                _apply(config, line, context=f"{path}:{lineno}")
    for override in overrides:
        _apply(config, override, context=f"--set {override}")
    validate_config(config)
    config.lock()
    return config
