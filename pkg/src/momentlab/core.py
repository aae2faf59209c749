"""Core momentlab classes: the experiment registry and the reports it produces."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import typing
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .exceptions import (
    CheckFailedError,
    ConfigError,
    DuplicateExperimentNameError,
    ExperimentMethodNotImplementedError,
)
from .schemas import ExperimentConfig, column_table, dump_config
from .utils import chunk_size, version_string

if typing.TYPE_CHECKING:
    from .experiment import BaseExperiment

logger = logging.getLogger(__name__)

Row = dict[str, typing.Any]


@dataclasses.dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, typing.Any]:
        return dataclasses.asdict(self)


def _replicate_task(task: tuple[BaseExperiment, ExperimentConfig, int, int]) -> Row:
    experiment, config, n, replicate = task
    return experiment.replicate_row(config, n, replicate)


class Report:
    """Rows, per-n summaries and check outcomes of one experiment run.

    :param ExperimentConfig config: Configuration the run used
    :param BaseExperiment experiment: Experiment that produced the data
    """

    def __init__(
        self,
        config: ExperimentConfig,
        experiment: BaseExperiment,
        rows: list[Row],
        summaries: list[dict[str, typing.Any]],
        checks: list[CheckResult],
    ) -> None:
        self.config = config
        self.experiment = experiment
        self.rows = rows
        self.summaries = summaries
        self.checks = checks

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def raise_on_failure(self) -> None:
        """Raise :exc:`CheckFailedError` naming every failed check."""
        failed = [check.name for check in self.checks if not check.passed]
        if failed:
            raise CheckFailedError(f"{self.experiment.name}: failed checks: {', '.join(failed)}")

    def _row_schema(self) -> typing.Any:
        schema = self.experiment.get_row_schema(self.config)
        return schema() if schema is not None else None

    def columns(self) -> list[dict[str, typing.Any]]:
        schema = self._row_schema()
        return column_table(schema) if schema is not None else []

    def serialized_rows(self) -> list[Row]:
        schema = self._row_schema()
        if schema is None:
            return list(self.rows)
        return schema.dump(self.rows, many=True)

    def sidecar(self) -> dict[str, typing.Any]:
        """Everything needed to reproduce the run, plus its summaries."""
        return {
            "command": self.experiment.name,
            "version": version_string(),
            "config": dump_config(self.config),
            "summaries": self.summaries,
            "checks": [check.to_dict() for check in self.checks],
            "columns": self.columns(),
        }

    def to_csv(self) -> str:
        rows = self.serialized_rows()
        names = [column["name"] for column in self.columns()]
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=names, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def to_json(self) -> str:
        document = {**self.sidecar(), "rows": self.serialized_rows()}
        return json.dumps(document, indent=2) + "\n"

    def write(self, out: str | Path | None = None, fmt: str = "csv") -> list[Path]:
        """Write the report and return the files written.

        CSV output is followed by a ``<out>.json`` sidecar. Nothing is written
        without ``out``; use :meth:`render` for stdout.
        """
        if out is None:
            return []
        path = Path(out)
        if fmt == "json":
            path.write_text(self.to_json(), encoding="utf-8")
            return [path]
        path.write_text(self.to_csv(), encoding="utf-8")
        sidecar = path.with_name(path.name + ".json")
        sidecar.write_text(json.dumps(self.sidecar(), indent=2) + "\n", encoding="utf-8")
        return [path, sidecar]

    def render(self, fmt: str = "csv") -> str:
        if fmt == "json":
            return self.to_json()
        return self.to_csv()


class Lab:
    """Registry of experiments and the runner that executes them.

    :param list|tuple experiments: Experiment instances
    """

    def __init__(self, experiments: Sequence[BaseExperiment] = ()) -> None:
        self.experiments: dict[str, BaseExperiment] = {}
        for experiment in experiments:
            self.experiment(experiment)

    def experiment(self, experiment: BaseExperiment) -> Lab:
        """Register an experiment under its name."""
        if experiment.name in self.experiments:
            raise DuplicateExperimentNameError(
                f'Another experiment with name "{experiment.name}" is already registered.'
            )
        self.experiments[experiment.name] = experiment
        experiment.init_lab(self)
        return self

    def replicates(
        self, experiment: BaseExperiment, config: ExperimentConfig, n: int
    ) -> list[Row]:
        """Run every replicate at order ``n`` and return rows in replicate order."""
        tasks = [(experiment, config, n, r) for r in range(config.replicates)]
        if config.jobs == 1:
            return [_replicate_task(task) for task in tasks]
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            return list(
                pool.map(
                    _replicate_task,
                    tasks,
                    chunksize=chunk_size(len(tasks), config.jobs),
                )
            )

    def run(self, config: ExperimentConfig) -> Report:
        try:
            experiment = self.experiments[config.command]
        except KeyError as err:
            raise ConfigError(f"Unknown command: {config.command!r}") from err
        rows: list[Row] = []
        summaries: list[dict[str, typing.Any]] = []
        for n in experiment.n_values(config):
            logger.info(
                "%s: n=%d, %d replicates, %d job(s)",
                experiment.name,
                n,
                config.replicates,
                config.jobs,
            )
            try:
                batch = self.replicates(experiment, config, n)
            except ExperimentMethodNotImplementedError:
                batch = []
            rows.extend(batch)
            try:
                summary = experiment.summary(config, n, batch)
            except ExperimentMethodNotImplementedError:
                continue
            logger.debug("%s: n=%d summary %s", experiment.name, n, summary)
            summaries.append({"n": n, **summary})
        try:
            checks = experiment.checks(config, summaries)
        except ExperimentMethodNotImplementedError:
            checks = []
        for check in checks:
            log = logger.info if check.passed else logger.warning
            log("%s %s: %s", "PASS" if check.passed else "FAIL", check.name, check.detail)
        rows = experiment.report_rows(config, rows, checks)
        return Report(config, experiment, rows, summaries, checks)
