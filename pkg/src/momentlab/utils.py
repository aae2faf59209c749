"""Various utilities shared by the numerical modules and the experiment runner."""

from __future__ import annotations

import importlib.metadata
import re
import subprocess
import typing
from pathlib import Path

import numpy as np
import numpy.typing as npt
from packaging.version import InvalidVersion, Version

from .exceptions import DomainError

# Canonical moments in [INTERIOR_TOL, 1 - INTERIOR_TOL] count as interior.
INTERIOR_TOL = 1e-10

FloatArray = npt.NDArray[np.float64]


def as_vector(values: typing.Any, name: str = "values", *, allow_empty: bool = False) -> FloatArray:
    """Return ``values`` as a 1-D float64 array.

    :param values: Sequence of real numbers
    :param str name: Name used in error messages
    :param bool allow_empty: Accept a zero-length input
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}.")
    if not allow_empty and arr.size == 0:
        raise DomainError(f"{name} must not be empty.")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must contain finite numbers only.")
    return arr


def check_unit_interval(x: typing.Any, name: str = "x") -> FloatArray:
    """Return ``x`` as a float array after checking it lies in [0, 1]."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1].")
    return arr


def _git_describe(path: Path) -> str | None:
    try:
        completed = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=path,
            capture_output=True,
            text=True,
            check=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    return completed.stdout.strip() or None


def version_string() -> str:
    """Return the installed momentlab version, with a local label naming the
    git revision when running from a checkout.

    The result always parses as a PEP 440 version.
    """
    try:
        base = importlib.metadata.version("momentlab")
    except importlib.metadata.PackageNotFoundError:
        base = "0"
    describe = _git_describe(Path(__file__).resolve().parent)
    if describe is None:
        return str(Version(base))
    # PEP 440 local labels only allow alphanumerics and dots
    local = re.sub(r"[^0-9A-Za-z]+", ".", describe).strip(".")
    try:
        return str(Version(f"{Version(base).public}+{local}"))
    except InvalidVersion:
        return str(Version(base))


def chunk_size(total: int, jobs: int) -> int:
    """Chunk size handed to a process pool so each worker gets ~8 batches."""
    return max(1, total // (jobs * 8))
