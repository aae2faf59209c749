import csv
import io
import json

import marshmallow
import numpy as np
import pytest
from marshmallow import fields

from momentlab import BaseExperiment, CheckResult, Lab
from momentlab.exceptions import CheckFailedError, ConfigError, DuplicateExperimentNameError
from momentlab.schemas import ExperimentConfig

from .utils import read_json

ToyRowSchema = marshmallow.Schema.from_dict(
    {
        "n": fields.Integer(metadata={"description": "Order"}),
        "replicate": fields.Integer(metadata={"description": "Replicate"}),
        "value": fields.Float(metadata={"description": "Uniform draw"}),
    },
    name="ToyRowSchema",
)


class ToyExperiment(BaseExperiment):
    """Module-level so that worker processes can unpickle it."""

    name = "esd"
    row_schema = ToyRowSchema

    def replicate_row(self, config, n, replicate):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=(n, replicate)))
        )
        return {"n": n, "replicate": replicate, "value": float(rng.random())}

    def summary(self, config, n, rows):
        return {"mean": float(np.mean([row["value"] for row in rows]))}

    def checks(self, config, summaries):
        return [CheckResult("all-in-unit-interval", all(0 <= s["mean"] <= 1 for s in summaries))]


class ChecksOnlyExperiment(BaseExperiment):
    name = "selftest"

    def __init__(self, passed=True):
        self.passed = passed
        self.lab = None

    def init_lab(self, lab):
        self.lab = lab

    def checks(self, config, summaries):
        return [CheckResult("only", self.passed, "detail")]


def toy_config(command="esd", **kwargs):
    kwargs.setdefault("n_list", [3, 5])
    kwargs.setdefault("replicates", 4)
    return ExperimentConfig(command=command, seed=123, **kwargs)


class TestLab:
    def test_experiment_registration(self):
        experiment = ChecksOnlyExperiment()
        lab = Lab([experiment])
        assert lab.experiments == {"selftest": experiment}
        assert experiment.lab is lab

    def test_duplicate_experiment_name(self):
        lab = Lab([ToyExperiment()])
        with pytest.raises(DuplicateExperimentNameError, match='"esd"'):
            lab.experiment(ToyExperiment())

    def test_unknown_command(self):
        with pytest.raises(ConfigError, match="Unknown command"):
            Lab([ToyExperiment()]).run(toy_config("clt-roots"))

    def test_run(self):
        report = Lab([ToyExperiment()]).run(toy_config())
        assert [(row["n"], row["replicate"]) for row in report.rows] == [
            (n, r) for n in (3, 5) for r in range(4)
        ]
        assert [s["n"] for s in report.summaries] == [3, 5]
        assert report.passed
        assert report.checks == [CheckResult("all-in-unit-interval", True)]

    def test_unimplemented_hooks_are_skipped(self):
        report = Lab([ChecksOnlyExperiment()]).run(toy_config("selftest"))
        assert report.rows == []
        assert report.summaries == []
        assert [c.name for c in report.checks] == ["only"]

    def test_failed_check(self):
        report = Lab([ChecksOnlyExperiment(passed=False)]).run(toy_config("selftest"))
        assert not report.passed
        with pytest.raises(CheckFailedError, match="failed checks: only"):
            report.raise_on_failure()

    def test_passing_report_does_not_raise(self):
        Lab([ChecksOnlyExperiment()]).run(toy_config("selftest")).raise_on_failure()

    def test_parallel_run_matches_serial(self):
        lab = Lab([ToyExperiment()])
        serial = lab.run(toy_config(jobs=1))
        parallel = lab.run(toy_config(jobs=2))
        assert parallel.rows == serial.rows
        assert parallel.summaries == serial.summaries


class TestReport:
    @pytest.fixture
    def report(self):
        return Lab([ToyExperiment()]).run(toy_config())

    def test_columns(self, report):
        assert report.columns() == [
            {"name": "n", "type": "integer", "description": "Order"},
            {"name": "replicate", "type": "integer", "description": "Replicate"},
            {"name": "value", "type": "number", "description": "Uniform draw"},
        ]

    def test_to_csv(self, report):
        rows = list(csv.DictReader(io.StringIO(report.to_csv())))
        assert len(rows) == 8
        assert list(rows[0]) == ["n", "replicate", "value"]
        assert float(rows[0]["value"]) == report.rows[0]["value"]

    def test_to_json(self, report):
        document = json.loads(report.render("json"))
        assert document["command"] == "esd"
        assert document["config"]["seed"] == 123
        assert len(document["rows"]) == 8
        assert document["checks"] == [
            {"name": "all-in-unit-interval", "passed": True, "detail": ""}
        ]

    def test_write_csv_with_sidecar(self, report, tmp_path):
        out = tmp_path / "toy.csv"
        paths = report.write(out, "csv")
        assert paths == [out, tmp_path / "toy.csv.json"]
        sidecar = read_json(paths[1])
        assert set(sidecar) == {"command", "version", "config", "summaries", "checks", "columns"}
        assert [s["n"] for s in sidecar["summaries"]] == [3, 5]
        assert out.read_text().splitlines()[0] == "n,replicate,value"

    def test_write_json(self, report, tmp_path):
        out = tmp_path / "toy.json"
        assert report.write(out, "json") == [out]
        assert len(read_json(out)["rows"]) == 8

    def test_write_without_destination(self, report):
        assert report.write(None) == []

    def test_report_without_row_schema(self):
        report = Lab([ChecksOnlyExperiment()]).run(toy_config("selftest"))
        assert report.columns() == []
        assert report.to_csv() == "\n"
