import configparser
from dataclasses import asdict, dataclass
from typing import Optional

from modules.Errors import ConfigError


class Config:
    def __init__(self, config_file_path: str = "config.ini"):
        self.config_file_path = config_file_path
        self.config = configparser.ConfigParser()
        try:
            # a missing file is fine: every setting has a default
            self.loaded = bool(self.config.read(self.config_file_path, encoding="utf-8"))

            self.epsilon = self.config.getfloat('privacy', 'epsilon', fallback=1.0)
            self.beta = self.config.getfloat('privacy', 'beta', fallback=0.05)
            self.ell_max = self.config.getint('privacy', 'ell_max', fallback=100)

            self.seed = self.config.getint('run', 'seed', fallback=0)
            self.trials = self.config.getint('run', 'trials', fallback=1)
            self.workers = self.config.getint('run', 'workers', fallback=1)
        except (configparser.Error, ValueError) as e:
            raise ConfigError(f"bad config file '{self.config_file_path}': {e}") from e

        self.log_level = self.config.get('logging', 'level', fallback='INFO').upper()


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one CLI invocation, embedded in every JSON report."""
    command: str
    input: Optional[str] = None
    format: Optional[str] = None
    algorithm: Optional[str] = None
    method: Optional[str] = None
    epsilon: Optional[float] = None
    beta: Optional[float] = None
    ell_max: Optional[int] = None
    ell: Optional[int] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    output: Optional[str] = None

    def to_dict(self) -> dict:
        return {key: value for key, value in asdict(self).items() if value is not None}
