"""YAML utilities"""

from __future__ import annotations

import typing
import warnings
from pathlib import Path

import yaml
from packaging.version import InvalidVersion, Version

from .exceptions import ConfigError
from .utils import version_string


def dict_to_yaml(dic: dict, yaml_dump_kwargs: typing.Any | None = None) -> str:
    """Serializes a dictionary to YAML."""
    yaml_dump_kwargs = yaml_dump_kwargs or {}

    # By default, don't sort alphabetically to respect schema field ordering
    yaml_dump_kwargs.setdefault("sort_keys", False)
    return yaml.dump(dic, **yaml_dump_kwargs)


def check_sidecar_version(version: typing.Any) -> Version:
    """Parse the version recorded in a sidecar and warn when its major
    version differs from the running one."""
    try:
        recorded = Version(str(version))
    except InvalidVersion as err:
        raise ConfigError(f"Not a valid momentlab version in sidecar: {version!r}") from err
    current = Version(version_string())
    if recorded.major != current.major:
        warnings.warn(
            f"Sidecar was written by momentlab {recorded}, running {current}; "
            "results may differ.",
            UserWarning,
            stacklevel=2,
        )
    return recorded


def load_config_file(path: str | Path) -> dict[str, typing.Any]:
    """Load configuration values from a YAML file or from the JSON sidecar
    of a previous run.

    A sidecar is recognised by its ``version`` and ``config`` keys; its
    ``config`` mapping is returned.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as err:
        raise ConfigError(f"Cannot parse configuration file {path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"Configuration file {path} must hold a mapping.")
    if "version" in data and "config" in data:
        check_sidecar_version(data["version"])
        data = data["config"]
        if not isinstance(data, dict):
            raise ConfigError(f"Sidecar {path} has no configuration mapping.")
    # Dashed keys as in the command-line flags are accepted too
    return {str(key).replace("-", "_"): value for key, value in data.items()}
