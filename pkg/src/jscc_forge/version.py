"""
Version module for jscc-forge.

pyproject.toml is the single source of truth. A source checkout reads it
directly; an installed package asks importlib.metadata.
"""

from pathlib import Path
from typing import Optional

DISTRIBUTION_NAME = "jscc-forge"


def _pyproject_path() -> Optional[Path]:
    """Return the pyproject.toml of a source checkout, if running from one."""
    candidate = Path(__file__).resolve().parent.parent.parent / "pyproject.toml"
    if candidate.exists() and candidate.parent in Path(__file__).resolve().parents:
        return candidate
    return None


def _read_pyproject_version(path: Path) -> str:
    """Read [project].version from a pyproject.toml file."""
    try:
        try:
            import tomllib
        except ImportError:
            # Python 3.9-3.10
            import tomli as tomllib

        with open(path, "rb") as f:
            data = tomllib.load(f)
        return str(data["project"]["version"])
    except Exception:
        return "unknown"


def _resolve_version() -> str:
    pyproject = _pyproject_path()
    if pyproject is not None:
        return _read_pyproject_version(pyproject)

    from importlib.metadata import PackageNotFoundError, version

    try:
        return version(DISTRIBUTION_NAME)
    except PackageNotFoundError:
        return "unknown"


__version__ = _resolve_version()


def get_version() -> str:
    """Get the current version string."""
    return __version__
