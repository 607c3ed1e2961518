# -*- coding: utf-8 -*-
"""Package defaults, read from a TOML file."""

import pathlib
from copy import deepcopy
from typing import Optional, Union

import tomli as toml_r

from pyanthropic.errors import ConfigurationError

try:
    wd = pathlib.Path(__file__).parent
except NameError:
    wd = pathlib.Path.cwd()
assert wd.is_dir(), "faild to obtain working directory"


# CONSTANTS -------------------------------------------------------------------

PATH_DEFAULTS_CFG = wd / "config/defaults.toml"


###############################################################################


def _read_toml(path: pathlib.Path) -> dict:
    if not path.is_file():
        raise ConfigurationError(f"settings file not found: {path}")
    with open(path, "rb") as fp:
        try:
            return toml_r.load(fp)
        except toml_r.TOMLDecodeError as e:
            raise ConfigurationError(f"{path.name}: {e}") from e


def load_defaults(path: Optional[Union[str, pathlib.Path]] = None) -> dict:
    """
    Load settings, overlaying an optional user file on the packaged defaults.

    Parameters
    ----------
    path : str or pathlib.Path, optional
        TOML file with a subset of the sections/keys found in the packaged
        defaults. The default is None (packaged values only).

    Raises
    ------
    ConfigurationError
        Unknown section or key, or a value whose type differs from the default.

    Returns
    -------
    dict
        section -> key -> value.
    """
    cfg = _read_toml(PATH_DEFAULTS_CFG)
    if path is None:
        return cfg

    user = _read_toml(pathlib.Path(path))
    merged = deepcopy(cfg)
    for section, values in user.items():
        if section not in cfg:
            raise ConfigurationError(f"unknown section [{section}]")
        if not isinstance(values, dict):
            raise ConfigurationError(f"[{section}] must be a table")
        for key, v in values.items():
            if key not in cfg[section]:
                raise ConfigurationError(f"unknown key '{key}' in [{section}]")
            default = cfg[section][key]
            if isinstance(default, (int, float)) and not isinstance(default, bool):
                if not isinstance(v, (int, float)) or isinstance(v, bool):
                    raise ConfigurationError(f"[{section}] {key} must be a number")
            elif not isinstance(v, type(default)):
                raise ConfigurationError(f"[{section}] {key} must be {type(default).__name__}")
            merged[section][key] = v
    return merged


DEFAULTS = load_defaults()


def use_settings(path: Optional[Union[str, pathlib.Path]] = None) -> dict:
    """
    Make the packaged defaults, overlaid with an optional user file, the
    active settings.

    DEFAULTS is updated in place, so every module that imported it sees the
    change at its next call. Defaults bound at import time (the default
    field values of fermi.FermiPrior and fermi.FactorSpec) are not affected;
    use their from_settings constructors instead.
    """
    cfg = load_defaults(path)
    DEFAULTS.clear()
    DEFAULTS.update(cfg)
    return DEFAULTS
