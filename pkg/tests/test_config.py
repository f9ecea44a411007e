from pathlib import Path

import pytest

from knowing.coding import CODING_VERSION
from knowing.compmodel.primitives import PRIMITIVE_VERSION
from knowing.config import Config
from knowing.exceptions import ConfigError


def test_environment_overrides_defaults():
    config = Config.from_env(
        {"RK_RUN_BUDGET": "500", "RK_FORMAT": "records", "RK_CACHE": "x.tsv"}
    )

    assert config.run_budget == 500
    assert config.output_format == "records"
    assert config.cache_path == Path("x.tsv")
    assert config.prove_budget == Config().prove_budget


def test_unrelated_variables_are_ignored():
    assert Config.from_env({"HOME": "/root", "RK": "1"}) == Config()


@pytest.mark.parametrize(
    "environ",
    [
        {"RK_SEED": "abc"},
        {"RK_FORMAT": "xml"},
        {"RK_RUN_BUDGET": "0"},
        {"RK_THEOREM_BUDGET": "-5"},
        {"RK_CODING_VERSION": "godel-v0"},
        {"RK_PRIMITIVE_VERSION": "prim-v2"},
    ],
)
def test_bad_settings(environ):
    with pytest.raises(ConfigError):
        Config.from_env(environ)


def test_format_suggestion():
    with pytest.raises(ConfigError, match="did you mean"):
        Config(output_format="record")


def test_override_keeps_unset_settings():
    config = Config().override(seed=7, cache_path=None)

    assert config.seed == 7
    assert config.cache_path is None
    assert "run_budget=10000" in config.describe()


def test_pins_follow_the_build():
    config = Config.from_env({"RK_CODING_VERSION": CODING_VERSION})

    assert config.coding_version == CODING_VERSION
    assert config.primitive_version == PRIMITIVE_VERSION

    with pytest.raises(ConfigError, match="did you mean"):
        Config(coding_version="godel-v2")
