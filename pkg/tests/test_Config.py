import pytest

from modules.Config import Config, RunConfig
from modules.Errors import ConfigError


def test_defaults_without_a_file(tmp_path):
    config = Config(str(tmp_path / "absent.ini"))
    assert not config.loaded
    assert (config.epsilon, config.beta, config.ell_max) == (1.0, 0.05, 100)
    assert (config.seed, config.trials, config.workers, config.log_level) == (0, 1, 1, "INFO")


def test_reads_sections(tmp_path):
    path = tmp_path / "config.ini"
    path.write_text("[privacy]\nepsilon = 0.5\n\n[logging]\nlevel = debug\n", encoding="utf-8")
    config = Config(str(path))
    assert config.loaded
    assert config.epsilon == 0.5
    assert config.beta == 0.05
    assert config.log_level == "DEBUG"


def test_run_config_drops_unset_fields():
    assert RunConfig(command="selftest", seed=3).to_dict() == {"command": "selftest", "seed": 3}


@pytest.mark.parametrize("text", [
    "[privacy]\nepsilon = abc\n",
    "[run]\ntrials = 1.5\n",
    "epsilon = 1.0\n",
    "[privacy]\nbeta = 0.1\nbeta = 0.2\n",
])
def test_malformed_file_is_a_config_error(tmp_path, text):
    path = tmp_path / "config.ini"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError) as e:
        Config(str(path))
    assert str(path) in str(e.value)
