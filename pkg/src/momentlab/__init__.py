"""Random moment sequences, random orthogonal polynomials and the limit
laws of their roots. Contains the main momentlab classes: `Lab` and
`BaseExperiment`"""

import typing

from .core import CheckResult, Lab, Report
from .experiment import BaseExperiment

__all__ = ["BaseExperiment", "CheckResult", "Lab", "Report"]


def __getattr__(name: str) -> typing.Any:
    if name == "__version__":
        from .utils import version_string

        return version_string()

    raise AttributeError(name)
