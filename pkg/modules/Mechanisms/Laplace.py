import math

import numpy as np

from modules.Errors import InvalidParameterError
from modules.Mechanisms.RandomSource import RandomSource


def _check_scale(b: float) -> None:
    if not b > 0:
        raise InvalidParameterError(f"Laplace scale must be > 0, got {b}")


def sample_laplace(b: float, rng: RandomSource) -> float:
    """
    One draw of Laplace(b): density exp(-|x|/b) / 2b, variance 2b^2, and
    Pr[X >= t] = exp(-t/b) / 2 for t > 0. Inverse CDF of a uniform on (0, 1).
    """
    _check_scale(b)
    u = rng.uniform()
    if u < 0.5:
        return b * math.log(2.0 * u)
    return -b * math.log(2.0 * (1.0 - u))


def sample_laplace_many(b: float, size: int, rng: RandomSource) -> np.ndarray:
    _check_scale(b)
    u = rng.uniform(size)
    return np.where(u < 0.5, b * np.log(2.0 * u), -b * np.log(2.0 * (1.0 - u)))


def confidence_margin(b: float, beta: float) -> float:
    """The t with Pr[Laplace(b) >= t] = beta, i.e. b * log(1 / (2 beta)); beta in (0, 1/2]."""
    _check_scale(b)
    if not 0 < beta <= 0.5:
        raise InvalidParameterError(f"beta must lie in (0, 0.5], got {beta}")
    return b * math.log(1.0 / (2.0 * beta))


def laplace_offset(ell: int, epsilon: float, beta: float) -> float:
    """(2 l / epsilon) * log(1 / (2 beta)), the noise compensation subtracted from D_l."""
    if ell < 1:
        raise InvalidParameterError(f"contribution bound must be >= 1, got {ell}")
    if not epsilon > 0:
        raise InvalidParameterError(f"epsilon must be > 0, got {epsilon}")
    return confidence_margin(2.0 * ell / epsilon, beta)
