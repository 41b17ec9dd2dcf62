import logging
from dataclasses import dataclass, field
from typing import List

from modules.Dataset import Dataset
from modules.Errors import InvalidParameterError
from modules.Matching.BoundedCount import BoundedCountCurve

logger = logging.getLogger(__name__)


@dataclass
class GreedyState:
    """
    The growing maximal matching S.

    matched_items[v] is set once item v is matched; cursors[i] points at the first
    item of person i that has not been ruled out. Cursors only move forward, and a
    person leaves `active` once its cursor runs off the end.
    """
    matched_items: bytearray
    cursors: List[int]
    active: List[int]
    matched_size: int = 0
    rounds: int = field(default=0)

    @classmethod
    def start(cls, dataset: Dataset) -> "GreedyState":
        return cls(
            matched_items=bytearray(dataset.vocabulary_size),
            cursors=[0] * dataset.n,
            active=[i for i, person in enumerate(dataset.people) if person.items],
        )

    def run_round(self, dataset: Dataset) -> int:
        """Each active person, in dataset order, takes its first unmatched item."""
        matched = self.matched_items
        still_active = []
        for i in self.active:
            items = dataset.people[i].items
            c = self.cursors[i]
            while c < len(items) and matched[items[c]]:
                c += 1
            if c < len(items):
                matched[items[c]] = 1
                self.matched_size += 1
                c += 1
            self.cursors[i] = c
            if c < len(items):
                still_active.append(i)
        self.active = still_active
        self.rounds += 1
        return self.matched_size


def greedy_count_curve(dataset: Dataset, ell_max: int) -> BoundedCountCurve:
    """
    Greedy maximal matching swept over l = 1..ell_max.

    Rounds are the outer loop and people the inner loop; the sensitivity bound of the
    approximate count relies on this order, so it must not be swapped.
    """
    if ell_max < 1:
        raise InvalidParameterError(f"ell_max must be >= 1, got {ell_max}")
    state = GreedyState.start(dataset)
    counts = []
    for _ in range(ell_max):
        if state.active:
            state.run_round(dataset)
        counts.append(state.matched_size)
    logger.debug(f"Greedy curve saturated at |S|={state.matched_size} after {state.rounds} active rounds.")
    return BoundedCountCurve(counts=tuple(counts), exact=False)


def greedy_count_at(dataset: Dataset, ell: int) -> int:
    if ell < 1:
        raise InvalidParameterError(f"contribution bound must be >= 1, got {ell}")
    return int(greedy_count_curve(dataset, ell).counts[-1])
