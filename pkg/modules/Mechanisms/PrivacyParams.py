from dataclasses import dataclass

from modules.Errors import InvalidParameterError


@dataclass(frozen=True)
class PrivacyParams:
    """Budget epsilon, failure probability beta and the largest candidate bound ell_max."""
    epsilon: float
    beta: float
    ell_max: int

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidParameterError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0 < self.beta < 0.5:
            raise InvalidParameterError(f"beta must lie in (0, 0.5), got {self.beta}")
        if self.ell_max < 1:
            raise InvalidParameterError(f"ell_max must be >= 1, got {self.ell_max}")
