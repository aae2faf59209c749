"""marshmallow schemas for experiment configuration and output rows."""

from __future__ import annotations

import dataclasses
import functools
import typing

import marshmallow
from marshmallow import ValidationError, fields, post_load, validate, validates_schema

from .exceptions import ConfigError
from .stats import PREFACTOR_MODES

DEFAULT_SEED = 0x5EEDCA70

COMMANDS = ("esd", "clt-roots", "clt-moments", "density-check", "selftest")
FORMATS = ("csv", "json")

# Largest moment count of the clt-moments experiment.
MAX_CLT_MOMENTS = 5

# Commands whose summaries need a sample variance
MIN_REPLICATES = {"clt-roots": 2, "clt-moments": 2, "density-check": 2}

# Per-command defaults, applied below configuration files and flags.
COMMAND_DEFAULTS: dict[str, dict[str, typing.Any]] = {
    "esd": {"n_list": [50, 200, 800], "replicates": 50},
    "clt-roots": {"n_list": [10_000], "m": 1, "replicates": 100_000},
    "clt-moments": {"n_list": [10_000], "k": 2, "replicates": 100_000},
    "density-check": {"n_list": [2], "replicates": 200_000},
    "selftest": {"n_list": [], "replicates": 1},
}

# marshmallow field => JSON type written to the sidecar column table
DEFAULT_FIELD_MAPPING: dict[type, str] = {
    fields.Integer: "integer",
    fields.Float: "number",
    fields.String: "string",
    fields.Boolean: "boolean",
    fields.List: "array",
}


@dataclasses.dataclass
class ExperimentConfig:
    command: str
    n_list: list[int] = dataclasses.field(default_factory=list)
    m: int = 1
    k: int = 1
    replicates: int = 1
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "csv"
    jobs: int = 1
    prefactor_mode: str = "derived"


class ExperimentConfigSchema(marshmallow.Schema):
    command = fields.String(required=True, validate=validate.OneOf(COMMANDS))
    n_list = fields.List(
        fields.Integer(validate=validate.Range(min=1)),
        load_default=list,
        metadata={"description": "Ensemble orders n"},
    )
    m = fields.Integer(load_default=1, validate=validate.Range(min=1))
    k = fields.Integer(load_default=1, validate=validate.Range(min=1))
    replicates = fields.Integer(load_default=1, validate=validate.Range(min=1))
    seed = fields.Integer(
        load_default=DEFAULT_SEED, validate=validate.Range(min=0, max=2**64 - 1)
    )
    out = fields.String(load_default=None, allow_none=True)
    format = fields.String(load_default="csv", validate=validate.OneOf(FORMATS))
    jobs = fields.Integer(load_default=1, validate=validate.Range(min=1))
    prefactor_mode = fields.String(
        load_default="derived", validate=validate.OneOf(PREFACTOR_MODES)
    )

    @validates_schema
    def validate_orders(self, data: dict[str, typing.Any], **kwargs: typing.Any) -> None:
        n_list = data.get("n_list") or []
        command = data.get("command")
        if n_list and data.get("m", 1) > min(n_list):
            raise ValidationError(
                f"m = {data['m']} exceeds the smallest n = {min(n_list)}.", "m"
            )
        if command == "clt-moments":
            k = data.get("k", 1)
            if k > MAX_CLT_MOMENTS:
                raise ValidationError(
                    f"clt-moments supports k <= {MAX_CLT_MOMENTS}, got {k}.", "k"
                )
            if n_list and k > 2 * min(n_list) - 1:
                raise ValidationError(
                    f"k = {k} needs n >= {(k + 1) // 2}.", "k"
                )
        least = MIN_REPLICATES.get(str(command), 1)
        if data.get("replicates", 1) < least:
            raise ValidationError(
                f"{command} needs at least {least} replicates, got {data['replicates']}.",
                "replicates",
            )
        if command == "density-check" and list(n_list) != [2]:
            raise ValidationError("density-check runs at n = 2 only.", "n_list")
        if command in ("esd", "clt-roots", "clt-moments") and not n_list:
            raise ValidationError(f"{command} needs at least one n.", "n_list")

    @post_load
    def make_config(self, data: dict[str, typing.Any], **kwargs: typing.Any) -> ExperimentConfig:
        return ExperimentConfig(**data)


def load_config(data: typing.Mapping[str, typing.Any]) -> ExperimentConfig:
    """Validate ``data`` (with per-command defaults filled in) into an
    :class:`ExperimentConfig`.

    :raises ConfigError: listing every invalid field
    """
    merged = dict(COMMAND_DEFAULTS.get(str(data.get("command")), {}))
    merged.update({key: value for key, value in data.items() if value is not None})
    try:
        return ExperimentConfigSchema().load(merged)
    except ValidationError as err:
        raise ConfigError(f"Invalid configuration: {err.messages}") from err


def dump_config(config: ExperimentConfig) -> dict[str, typing.Any]:
    return ExperimentConfigSchema().dump(config)


def _column(description: str, kind: type[fields.Field] = fields.Float) -> fields.Field:
    return kind(required=True, metadata={"description": description})


EsdRowSchema = marshmallow.Schema.from_dict(
    {
        "n": _column("Ensemble order", fields.Integer),
        "replicate": _column("Replicate index", fields.Integer),
        "ks": _column("Kolmogorov-Smirnov distance of the root distribution to the arcsine law"),
        "levy": _column("Levy distance of the root distribution to the arcsine law"),
        "levy_chebyshev": _column(
            "Levy distance between the root distribution and the Chebyshev root distribution"
        ),
        "levy_bound": _column("(1/n) tr((J - D)^2)"),
        "dispersion_even": _column("(1/n) sum of (P_2i - 1/2)^2 over i < n"),
        "dispersion_odd": _column("(1/n) sum of (P_2i-1 - 1/2)^2 over i <= n"),
        "seed": _column("Base seed", fields.Integer),
    },
    name="EsdRowSchema",
)


def _root_columns(m: int) -> dict[str, fields.Field]:
    return {
        f"z{i}": _column(f"4 sqrt(n) (X_{i} - x_{i},m) for the {i}-th largest root")
        for i in range(1, m + 1)
    }


def _moment_columns(k: int) -> dict[str, fields.Field]:
    return {
        f"y{i}": _column(f"sqrt(n) (C_{i} - c0_{i})") for i in range(1, k + 1)
    }


def _replicate_columns() -> dict[str, fields.Field]:
    return {
        "n": _column("Ensemble order", fields.Integer),
        "replicate": _column("Replicate index", fields.Integer),
    }


@functools.lru_cache
def clt_roots_row_schema(m: int) -> type[marshmallow.Schema]:
    return marshmallow.Schema.from_dict(
        {**_replicate_columns(), **_root_columns(m)}, name="CltRootsRowSchema"
    )


@functools.lru_cache
def clt_moments_row_schema(k: int) -> type[marshmallow.Schema]:
    return marshmallow.Schema.from_dict(
        {**_replicate_columns(), **_moment_columns(k)}, name="CltMomentsRowSchema"
    )


DensityRowSchema = marshmallow.Schema.from_dict(
    {
        **_replicate_columns(),
        "x_max": _column("Larger root"),
        "x_min": _column("Smaller root"),
    },
    name="DensityRowSchema",
)


CheckRowSchema = marshmallow.Schema.from_dict(
    {
        "name": _column("Check name", fields.String),
        "passed": _column("Whether the check passed", fields.Boolean),
        "detail": _column("Measured quantity and threshold", fields.String),
    },
    name="CheckRowSchema",
)


def field2type(field: fields.Field) -> str | None:
    """Return the JSON type of a marshmallow field, following the class
    hierarchy so subclasses map like their parents."""
    for cls in type(field).__mro__:
        if cls in DEFAULT_FIELD_MAPPING:
            return DEFAULT_FIELD_MAPPING[cls]
    return None


def column_table(schema: marshmallow.Schema | type[marshmallow.Schema]) -> list[dict[str, typing.Any]]:
    """Describe the columns of a row schema as (name, JSON type, description)."""
    instance = schema() if isinstance(schema, type) else schema
    return [
        {
            "name": name,
            "type": field2type(field),
            "description": field.metadata.get("description", ""),
        }
        for name, field in instance.fields.items()
    ]
