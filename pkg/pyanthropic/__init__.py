from importlib import metadata

from pyanthropic import (
    catalog,
    cli,
    errors,
    fermi,
    inference,
    numerics,
    scenario_io,
    settings,
)

__version__ = metadata.version("pyanthropic")

__all__ = (
    "catalog",
    "cli",
    "errors",
    "fermi",
    "inference",
    "numerics",
    "scenario_io",
    "settings",
)
