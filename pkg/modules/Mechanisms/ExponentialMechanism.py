from typing import Optional, Sequence, Union

import numpy as np

from modules.Errors import InvalidParameterError
from modules.Mechanisms.RandomSource import RandomSource


def exponential_mechanism_probabilities(scores: Sequence[float], epsilon: float) -> np.ndarray:
    """Pr[i] proportional to exp(epsilon * s_i / 2), shifted by the max score before exponentiating."""
    if len(scores) == 0:
        raise InvalidParameterError("the exponential mechanism needs at least one score")
    if not epsilon > 0:
        raise InvalidParameterError(f"epsilon must be > 0, got {epsilon}")
    s = np.asarray(scores, dtype=np.float64)
    weights = np.exp(0.5 * epsilon * (s - s.max()))
    return weights / weights.sum()


def exponential_mechanism_sample(scores: Sequence[float],
                                 epsilon: float,
                                 rng: RandomSource,
                                 size: Optional[int] = None) -> Union[int, np.ndarray]:
    """
    Samples a 0-based index by inverting the CDF of the exponential-mechanism
    distribution with a uniform draw from (0, 1). `size` returns that many draws.
    """
    cdf = np.cumsum(exponential_mechanism_probabilities(scores, epsilon))
    last = len(cdf) - 1
    if size is None:
        return min(int(np.searchsorted(cdf, rng.uniform(), side="right")), last)
    draws = np.searchsorted(cdf, rng.uniform(size), side="right")
    return np.minimum(draws, last)
