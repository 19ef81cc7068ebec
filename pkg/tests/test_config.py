import pytest

from src.config.settings import ComputationConfig
from src.exceptions import ConfigurationError


def test_defaults_are_valid():
    config = ComputationConfig()
    config.validate()
    assert config.perturbation_retries == 8
    assert set(config.svg_colors) == {"curve", "dual", "marker"}


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("TROPICAL_PERTURBATION_SEED", "42")
    monkeypatch.setenv("TROPICAL_LOG_LEVEL", "debug")
    config = ComputationConfig.from_env()
    assert config.perturbation_seed == 42
    assert config.log_level == "debug"


@pytest.mark.parametrize(
    "name, value",
    [
        ("TROPICAL_PERTURBATION_RETRIES", "many"),
        ("TROPICAL_PERTURBATION_RETRIES", "0"),
        ("TROPICAL_BRUTE_FORCE_MAX_DIM", "30"),
        ("TROPICAL_LOG_LEVEL", "LOUD"),
    ],
)
def test_invalid_settings_are_rejected(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigurationError):
        ComputationConfig.from_env()
