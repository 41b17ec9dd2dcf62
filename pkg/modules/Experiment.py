"""
Selection x counting comparison: for every epsilon, every trial and every pairing
of a bound selection rule with a counter, one raw row. Summaries (percentiles) are
left to downstream tooling.
"""
import logging
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from tqdm import tqdm

from modules.Dataset import Dataset
from modules.Errors import InvalidParameterError
from modules.Estimator import (COUNTERS, dp_count_fixed_bound, exact_utility_bound, nearest_rank_percentile,
                               release_from_curve, sampling_count, sampling_count_curve)
from modules.GreedyMatching import greedy_count_at, greedy_count_curve
from modules.Matching.BoundedCount import bounded_count_curve, bounded_distinct_count
from modules.Mechanisms.PrivacyParams import PrivacyParams
from modules.Mechanisms.RandomSource import RandomSource

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComparisonRow:
    epsilon: float
    trial: int
    selection: str
    counting: str
    private_selection: bool
    private_count: bool
    ell: int
    value: float

    def to_dict(self) -> dict:
        return asdict(self)


def run_comparison(dataset: Dataset,
                   params: PrivacyParams,
                   trials: int,
                   seed: int,
                   epsilons: Optional[Sequence[float]] = None) -> Iterator[ComparisonRow]:
    """
    :param epsilons: budgets to sweep; defaults to params.epsilon alone. Trial t
        draws from the same seed at every budget.
    """
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    sweep = [replace(params, epsilon=epsilon) for epsilon in (epsilons or [params.epsilon])]
    if dataset.n == 0:
        return
    contributions = dataset.contributions()
    fixed_bounds = {
        "max": max(1, max(contributions)),
        "p90": max(1, nearest_rank_percentile(contributions, 0.9)),
    }

    @lru_cache(maxsize=None)
    def exact_at(ell: int) -> int:
        return bounded_distinct_count(dataset, ell)

    @lru_cache(maxsize=None)
    def greedy_at(ell: int) -> int:
        return greedy_count_at(dataset, ell)

    fixed_curves = {
        "matching": bounded_count_curve(dataset, params.ell_max),
        "greedy": greedy_count_curve(dataset, params.ell_max),
    }

    for budget in sweep:
        epsilon = budget.epsilon
        for trial in tqdm(range(trials), desc=f"compare eps={epsilon:g}", disable=None):
            rng = RandomSource.for_trial(seed, trial)
            for counting in COUNTERS:
                if counting == "sampling":
                    curve = sampling_count_curve(dataset, params.ell_max, rng)

                    def count_at(ell, curve=curve, rng=rng):
                        return curve.at(ell) if ell <= curve.ell_max else sampling_count(dataset, ell, rng)
                else:
                    curve = fixed_curves[counting]
                    count_at = exact_at if counting == "matching" else greedy_at

                for selection, ell in fixed_bounds.items():
                    value = dp_count_fixed_bound(count_at(ell), ell, epsilon, rng)
                    yield ComparisonRow(epsilon, trial, selection, counting, False, True, ell, value)

                ell = exact_utility_bound(curve, budget)
                yield ComparisonRow(epsilon, trial, "utility", counting, False, False, ell, float(curve.at(ell)))

                estimate = release_from_curve(curve, budget, rng, counting)
                yield ComparisonRow(epsilon, trial, "gem", counting, True, False, estimate.ell_hat,
                                    float(curve.at(estimate.ell_hat)))
                yield ComparisonRow(epsilon, trial, "gem", counting, True, True, estimate.ell_hat, estimate.nu_hat)
    logger.info(f"Comparison finished: {len(sweep)} budget(s) x {trials} trial(s) x {len(COUNTERS)} counters.")
