"""Base class for experiment classes."""

from __future__ import annotations

import typing

from .exceptions import ExperimentMethodNotImplementedError

if typing.TYPE_CHECKING:
    import marshmallow

    from .core import CheckResult, Lab
    from .schemas import ExperimentConfig


class BaseExperiment:
    """Base class for momentlab experiments.

    An experiment is registered on a :class:`Lab <momentlab.core.Lab>` under
    its ``name``. The lab calls :meth:`replicate_row` once per (n, replicate)
    pair, possibly in worker processes, then :meth:`summary` once per n and
    :meth:`checks` once at the end. Hooks an experiment does not need may be
    left unimplemented.
    """

    name: str = ""
    #: Schema of the per-replicate rows, used to serialize them and to
    #: describe the columns in the sidecar.
    row_schema: type[marshmallow.Schema] | None = None

    def init_lab(self, lab: Lab) -> None:
        """Initialize experiment with the Lab it is registered on

        :param Lab lab: Lab this experiment instance is attached to
        """

    def get_row_schema(self, config: ExperimentConfig) -> type[marshmallow.Schema] | None:
        """Row schema for ``config``; defaults to :attr:`row_schema`."""
        return self.row_schema

    def n_values(self, config: ExperimentConfig) -> list[int]:
        """Ensemble orders to run; defaults to ``config.n_list``."""
        return list(config.n_list)

    def replicate_row(
        self, config: ExperimentConfig, n: int, replicate: int
    ) -> dict[str, typing.Any]:
        """Return one output row for replicate ``replicate`` at order ``n``.

        Must be a pure function of its arguments: it runs in worker processes
        and the output has to be independent of scheduling.
        """
        raise ExperimentMethodNotImplementedError

    def summary(
        self, config: ExperimentConfig, n: int, rows: list[dict[str, typing.Any]]
    ) -> dict[str, typing.Any]:
        """Return JSON-serializable summary statistics for order ``n``.

        :param list rows: The rows of every replicate at ``n``, in replicate order
        """
        raise ExperimentMethodNotImplementedError

    def report_rows(
        self,
        config: ExperimentConfig,
        rows: list[dict[str, typing.Any]],
        checks: list[CheckResult],
    ) -> list[dict[str, typing.Any]]:
        """Rows written to the report; defaults to the replicate rows."""
        return rows

    def checks(
        self, config: ExperimentConfig, summaries: list[dict[str, typing.Any]]
    ) -> list[CheckResult]:
        """Return the outcome of the acceptance checks of this experiment."""
        raise ExperimentMethodNotImplementedError
