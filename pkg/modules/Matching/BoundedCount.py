import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Tuple

from tqdm import tqdm

from modules.Dataset import Dataset, distinct_count_exact
from modules.Errors import InvalidParameterError
from modules.Matching.CopyGraph import build_copy_graph
from modules.Matching.HopcroftKarp import maximum_matching_size

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundedCountCurve:
    """
    counts[k] is the bounded count for l = k + 1.

    exact=True when every entry is D_l(D) from a maximum matching; greedy and
    sampling curves set it to False.
    """
    counts: Tuple[float, ...]
    exact: bool

    @property
    def ell_max(self) -> int:
        return len(self.counts)

    def at(self, ell: int) -> float:
        if not 1 <= ell <= self.ell_max:
            raise InvalidParameterError(f"bound {ell} outside 1..{self.ell_max}")
        return self.counts[ell - 1]

    def rows(self) -> List[Tuple[int, float]]:
        return [(ell, count) for ell, count in enumerate(self.counts, start=1)]


def bounded_distinct_count(dataset: Dataset, ell: int) -> int:
    """D_l(D): the largest distinct union when each person keeps at most `ell` items."""
    return maximum_matching_size(build_copy_graph(dataset, ell))


def _check_ell_max(ell_max: int) -> None:
    if ell_max < 1:
        raise InvalidParameterError(f"ell_max must be >= 1, got {ell_max}")


def bounded_count_curve(dataset: Dataset, ell_max: int, workers: int = 1) -> BoundedCountCurve:
    """
    One maximum matching per l in 1..ell_max, stopping early.

    Bounds at or above the largest contribution build the same copy graph, and the
    curve never rises above DC(D), so the matchings stop at whichever comes first
    and the saturated value is repeated. With `workers` > 1 the bounds run in
    batches of `workers` and the sweep stops after the batch that saturates.
    """
    _check_ell_max(ell_max)
    last_distinct = max(1, min(ell_max, dataset.max_contribution))
    bounds = list(range(1, last_distinct + 1))
    ceiling = distinct_count_exact(dataset)
    logger.info(f"Computing exact bounded counts for l=1..{ell_max} "
                f"(at most {len(bounds)} matchings, |D|={dataset.size}, DC={ceiling}).")

    counts: List[int] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for start in range(0, len(bounds), workers):
                batch = bounds[start:start + workers]
                counts.extend(pool.map(bounded_distinct_count, [dataset] * len(batch), batch))
                if counts[-1] >= ceiling:
                    break
    else:
        with tqdm(bounds, desc="matching", disable=None) as progress:
            for ell in progress:
                counts.append(bounded_distinct_count(dataset, ell))
                if counts[-1] >= ceiling:
                    break

    for ell, count in enumerate(counts, start=1):
        logger.debug(f"D_{ell} = {count}")
    if len(counts) < len(bounds):
        logger.debug(f"Curve reached DC={ceiling} at l={len(counts)}.")

    counts.extend([counts[-1]] * (ell_max - len(counts)))
    return BoundedCountCurve(counts=tuple(counts), exact=True)
