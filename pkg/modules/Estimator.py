import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from modules.Dataset import Dataset
from modules.Errors import InvalidParameterError
from modules.GreedyMatching import greedy_count_at, greedy_count_curve
from modules.Matching.BoundedCount import BoundedCountCurve, bounded_count_curve, bounded_distinct_count
from modules.Mechanisms.GeneralizedExponentialMechanism import gem_select
from modules.Mechanisms.Laplace import confidence_margin, laplace_offset, sample_laplace
from modules.Mechanisms.PrivacyParams import PrivacyParams
from modules.Mechanisms.RandomSource import RandomSource

logger = logging.getLogger(__name__)

COUNTERS = ("matching", "greedy", "sampling")
SELECTION_METHODS = ("max_contribution", "p90_contribution", "exact_utility", "gem_utility")
# Only GEM spends privacy budget on the bound; the others read the data directly.
PRIVATE_SELECTIONS = {"gem_utility"}


@dataclass(frozen=True)
class DpEstimate:
    ell_hat: int
    nu_hat: float
    method: str
    params: PrivacyParams
    seed: int

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "epsilon": self.params.epsilon,
            "beta": self.params.beta,
            "ell_max": self.params.ell_max,
            "seed": self.seed,
            "ell_hat": self.ell_hat,
            "nu_hat": self.nu_hat,
        }


@dataclass(frozen=True)
class UtilityScores:
    """values[k] = q_l(D) for l = k + 1."""
    values: Tuple[float, ...]


def utility_scores(curve: BoundedCountCurve, params: PrivacyParams) -> UtilityScores:
    """q_l(D) = curve[l] - (2 l / epsilon) log(1 / (2 beta)); each q_l has sensitivity l."""
    if curve.ell_max != params.ell_max:
        raise InvalidParameterError(f"curve covers {curve.ell_max} bounds, params ask for {params.ell_max}")
    return UtilityScores(values=tuple(
        float(count) - laplace_offset(ell, params.epsilon, params.beta)
        for ell, count in curve.rows()
    ))


def release_from_curve(curve: BoundedCountCurve,
                       params: PrivacyParams,
                       rng: RandomSource,
                       method: str) -> DpEstimate:
    """
    GEM at budget epsilon/2 picks l_hat from the utility scores, then the score at
    l_hat is released with Laplace(2 l_hat / epsilon) noise.
    """
    ell_hat = gem_bound(curve, params, rng)
    nu_hat = utility_scores(curve, params).values[ell_hat - 1] + sample_laplace(2.0 * ell_hat / params.epsilon, rng)
    return DpEstimate(ell_hat=ell_hat, nu_hat=float(nu_hat), method=method, params=params, seed=rng.seed)


def dp_distinct_count(dataset: Dataset, params: PrivacyParams, rng: RandomSource, workers: int = 1) -> DpEstimate:
    curve = bounded_count_curve(dataset, params.ell_max, workers=workers)
    return release_from_curve(curve, params, rng, "matching")


def dp_approx_distinct_count(dataset: Dataset, params: PrivacyParams, rng: RandomSource) -> DpEstimate:
    curve = greedy_count_curve(dataset, params.ell_max)
    return release_from_curve(curve, params, rng, "greedy")


def dp_sampling_distinct_count(dataset: Dataset, params: PrivacyParams, rng: RandomSource) -> DpEstimate:
    curve = sampling_count_curve(dataset, params.ell_max, rng)
    return release_from_curve(curve, params, rng, "sampling")


def _sample_union(dataset: Dataset, ell: int, rng: RandomSource, seen: np.ndarray) -> int:
    seen[:] = False
    for person in dataset.people:
        items = list(person.items)
        k = min(ell, len(items))
        if k == len(items):
            chosen = items
        else:
            # Fisher-Yates, stopped after the first k positions
            for j in range(k):
                swap = rng.integers(j, len(items))
                items[j], items[swap] = items[swap], items[j]
            chosen = items[:k]
        if chosen:
            seen[chosen] = True
    return int(seen.sum())


def sampling_count(dataset: Dataset, ell: int, rng: RandomSource) -> int:
    """Distinct union of a uniform min(l, |u_i|)-subset drawn independently for every person."""
    if ell < 1:
        raise InvalidParameterError(f"contribution bound must be >= 1, got {ell}")
    return _sample_union(dataset, ell, rng, np.zeros(dataset.vocabulary_size, dtype=bool))


def sampling_count_curve(dataset: Dataset, ell_max: int, rng: RandomSource) -> BoundedCountCurve:
    if ell_max < 1:
        raise InvalidParameterError(f"ell_max must be >= 1, got {ell_max}")
    seen = np.zeros(dataset.vocabulary_size, dtype=bool)
    counts = tuple(_sample_union(dataset, ell, rng, seen) for ell in range(1, ell_max + 1))
    return BoundedCountCurve(counts=counts, exact=False)


def count_curve(dataset: Dataset, ell_max: int, counter: str, rng: RandomSource, workers: int = 1) -> BoundedCountCurve:
    if counter == "matching":
        return bounded_count_curve(dataset, ell_max, workers=workers)
    if counter == "greedy":
        return greedy_count_curve(dataset, ell_max)
    if counter == "sampling":
        return sampling_count_curve(dataset, ell_max, rng)
    raise InvalidParameterError(f"unknown counter '{counter}', expected one of {COUNTERS}")


def count_at(dataset: Dataset, ell: int, counter: str, rng: RandomSource) -> int:
    """One sensitivity-l count without sweeping the whole curve."""
    if counter == "matching":
        return bounded_distinct_count(dataset, ell)
    if counter == "greedy":
        return greedy_count_at(dataset, ell)
    if counter == "sampling":
        return sampling_count(dataset, ell, rng)
    raise InvalidParameterError(f"unknown counter '{counter}', expected one of {COUNTERS}")


def dp_count_fixed_bound(count: float, ell: int, epsilon: float, rng: RandomSource) -> float:
    """count + Laplace(l / epsilon); `count` must come from a sensitivity-l counter."""
    if ell < 1:
        raise InvalidParameterError(f"contribution bound must be >= 1, got {ell}")
    if not epsilon > 0:
        raise InvalidParameterError(f"epsilon must be > 0, got {epsilon}")
    return float(count) + sample_laplace(ell / epsilon, rng)


def fixed_bound_lower_bound(value: float, ell: int, epsilon: float, beta: float) -> float:
    """Shifts a fixed-bound release down so it undershoots the true count with probability >= 1 - beta."""
    return value - confidence_margin(ell / epsilon, beta)


def nearest_rank_percentile(values, fraction: float) -> int:
    ordered = sorted(values)
    rank = max(1, int(np.ceil(fraction * len(ordered))))
    return ordered[rank - 1]


def exact_utility_bound(curve: BoundedCountCurve, params: PrivacyParams) -> int:
    """Non-private argmax of count(l) - (l / epsilon) log(1 / (2 beta)); the first maximizer wins."""
    values = [float(count) - confidence_margin(ell / params.epsilon, params.beta) for ell, count in curve.rows()]
    return int(np.argmax(values)) + 1


def gem_bound(curve: BoundedCountCurve, params: PrivacyParams, rng: RandomSource) -> int:
    scores = utility_scores(curve, params)
    bounds = list(range(1, params.ell_max + 1))
    return gem_select(scores.values, bounds, params.epsilon / 2.0, params.beta, rng) + 1


def select_bound(dataset: Dataset,
                 method: str,
                 params: PrivacyParams,
                 counter: str,
                 rng: RandomSource,
                 workers: int = 1) -> int:
    """
    Picks a contribution bound.

    max_contribution and p90_contribution read the contribution sizes; exact_utility
    maximizes count(l) - (l / epsilon) log(1 / (2 beta)) without noise. Those three are
    not differentially private. gem_utility runs GEM at epsilon/2 over the scores the
    private estimators use, whose offset is (2 l / epsilon) log(1 / (2 beta)).
    """
    if method in ("max_contribution", "p90_contribution"):
        if dataset.n == 0:
            raise InvalidParameterError(f"'{method}' needs a non-empty dataset")
        if method == "max_contribution":
            return max(1, dataset.max_contribution)
        return max(1, nearest_rank_percentile(dataset.contributions(), 0.9))

    if method not in SELECTION_METHODS:
        raise InvalidParameterError(f"unknown selection '{method}', expected one of {SELECTION_METHODS}")

    curve = count_curve(dataset, params.ell_max, counter, rng, workers=workers)
    if method == "exact_utility":
        ell = exact_utility_bound(curve, params)
    else:
        ell = gem_bound(curve, params, rng)
    logger.info(f"Selected l={ell} with {method} over the {counter} curve.")
    return ell
