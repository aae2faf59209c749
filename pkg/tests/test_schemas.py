import pytest
from marshmallow import fields

from momentlab import schemas
from momentlab.exceptions import ConfigError


class TestLoadConfig:
    @pytest.mark.parametrize("command", schemas.COMMANDS)
    def test_command_defaults(self, command):
        config = schemas.load_config({"command": command})
        defaults = schemas.COMMAND_DEFAULTS[command]
        assert config.n_list == defaults["n_list"]
        assert config.replicates == defaults["replicates"]
        assert config.seed == schemas.DEFAULT_SEED
        assert config.format == "csv"
        assert config.jobs == 1
        assert config.prefactor_mode == "derived"
        assert config.out is None

    def test_values_override_defaults(self):
        config = schemas.load_config(
            {"command": "clt-roots", "n_list": [500], "m": 3, "replicates": 10, "seed": 5}
        )
        assert (config.n_list, config.m, config.replicates, config.seed) == ([500], 3, 10, 5)

    def test_none_values_are_ignored(self):
        config = schemas.load_config({"command": "esd", "replicates": None})
        assert config.replicates == 50

    @pytest.mark.parametrize(
        ("data", "field"),
        [
            ({"command": "nope"}, "command"),
            ({"command": "esd", "replicates": 0}, "replicates"),
            ({"command": "esd", "n_list": [0]}, "n_list"),
            ({"command": "esd", "format": "xml"}, "format"),
            ({"command": "esd", "jobs": 0}, "jobs"),
            ({"command": "esd", "seed": -1}, "seed"),
            ({"command": "esd", "prefactor_mode": "other"}, "prefactor_mode"),
            ({"command": "esd", "colour": "red"}, "colour"),
        ],
    )
    def test_invalid_field(self, data, field):
        with pytest.raises(ConfigError, match=field):
            schemas.load_config(data)

    def test_m_cannot_exceed_smallest_order(self):
        with pytest.raises(ConfigError, match="exceeds the smallest n"):
            schemas.load_config({"command": "clt-roots", "n_list": [2, 10], "m": 3})

    def test_moment_count_is_capped(self):
        with pytest.raises(ConfigError, match="k <= 5"):
            schemas.load_config({"command": "clt-moments", "k": 6})

    def test_moment_count_needs_large_enough_order(self):
        with pytest.raises(ConfigError, match="needs n >= 3"):
            schemas.load_config({"command": "clt-moments", "k": 5, "n_list": [2]})

    def test_density_check_runs_at_order_two(self):
        with pytest.raises(ConfigError, match="n = 2 only"):
            schemas.load_config({"command": "density-check", "n_list": [3]})

    @pytest.mark.parametrize("command", ["clt-roots", "clt-moments", "density-check"])
    def test_variance_summaries_need_two_replicates(self, command):
        with pytest.raises(ConfigError, match="at least 2 replicates"):
            schemas.load_config({"command": command, "n_list": [2], "replicates": 1})

    def test_esd_accepts_a_single_replicate(self):
        assert schemas.load_config({"command": "esd", "replicates": 1}).replicates == 1

    def test_orders_are_required(self):
        with pytest.raises(ConfigError, match="at least one n"):
            schemas.load_config({"command": "esd", "n_list": []})

    def test_dump_config(self):
        config = schemas.load_config({"command": "clt-moments", "k": 3, "n_list": [100]})
        dumped = schemas.dump_config(config)
        assert dumped["command"] == "clt-moments"
        assert dumped["k"] == 3
        assert dumped["n_list"] == [100]
        assert schemas.load_config(dumped) == config


class TestRowSchemas:
    def test_check_row_columns(self):
        assert schemas.column_table(schemas.CheckRowSchema) == [
            {"name": "name", "type": "string", "description": "Check name"},
            {"name": "passed", "type": "boolean", "description": "Whether the check passed"},
            {
                "name": "detail",
                "type": "string",
                "description": "Measured quantity and threshold",
            },
        ]

    def test_esd_row_columns(self):
        names = [column["name"] for column in schemas.column_table(schemas.EsdRowSchema())]
        assert names == [
            "n",
            "replicate",
            "ks",
            "levy",
            "levy_chebyshev",
            "levy_bound",
            "dispersion_even",
            "dispersion_odd",
            "seed",
        ]

    @pytest.mark.parametrize("m", [1, 4])
    def test_clt_roots_columns(self, m):
        table = schemas.column_table(schemas.clt_roots_row_schema(m))
        assert [column["name"] for column in table] == ["n", "replicate"] + [
            f"z{i}" for i in range(1, m + 1)
        ]
        assert [column["type"] for column in table][2:] == ["number"] * m

    def test_clt_moments_columns(self):
        table = schemas.column_table(schemas.clt_moments_row_schema(2))
        assert [column["name"] for column in table] == ["n", "replicate", "y1", "y2"]

    def test_row_schema_factories_are_cached(self):
        assert schemas.clt_roots_row_schema(3) is schemas.clt_roots_row_schema(3)


class TestField2Type:
    @pytest.mark.parametrize(
        ("field", "expected"),
        [
            (fields.Integer(), "integer"),
            (fields.Float(), "number"),
            (fields.String(), "string"),
            (fields.Boolean(), "boolean"),
            (fields.List(fields.Integer()), "array"),
            (fields.Dict(), None),
        ],
    )
    def test_field2type(self, field, expected):
        assert schemas.field2type(field) == expected

    def test_subclass_maps_like_parent(self):
        class Probability(fields.Float):
            pass

        assert schemas.field2type(Probability()) == "number"
