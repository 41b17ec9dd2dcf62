import logging
from typing import List, Tuple

from modules.Dataset import Dataset
from modules.Errors import InvalidParameterError
from modules.Mechanisms.RandomSource import RandomSource

logger = logging.getLogger(__name__)


def zipf_dataset(people: int,
                 exponent: float = 1.1,
                 size_p: float = 0.25,
                 max_size: int = 20,
                 seed: int = 0) -> Dataset:
    """
    Persons p0, p1, ... each draw a geometric(size_p) number of items (capped at
    max_size) from a Zipf(exponent) popularity law over item names w1, w2, ...
    Repeated draws collapse, so a person can end up with fewer items than drawn.
    """
    if people < 0:
        raise InvalidParameterError(f"people must be >= 0, got {people}")
    if not exponent > 1:
        raise InvalidParameterError(f"Zipf exponent must be > 1, got {exponent}")
    if not 0 < size_p <= 1:
        raise InvalidParameterError(f"size_p must lie in (0, 1], got {size_p}")
    if max_size < 1:
        raise InvalidParameterError(f"max_size must be >= 1, got {max_size}")

    generator = RandomSource(seed).generator
    sizes = generator.geometric(size_p, size=people).clip(max=max_size)
    records: List[Tuple[str, List[str]]] = []
    for i, size in enumerate(sizes):
        ranks = generator.zipf(exponent, size=int(size))
        records.append((f"p{i}", [f"w{rank}" for rank in ranks]))

    dataset = Dataset.from_records(records)
    logger.info(f"Generated Zipf({exponent}) dataset: {dataset.n} people, {dataset.size} records.")
    return dataset


def random_small_dataset(rng: RandomSource,
                         max_people: int = 5,
                         max_items: int = 4,
                         universe: int = 6) -> Dataset:
    """A tiny random dataset for exhaustive cross-checks: n <= max_people, |u_i| <= max_items, items from `universe` names."""
    names = [chr(ord("a") + k) for k in range(universe)]
    n = rng.integers(1, max_people + 1)
    records = []
    for i in range(n):
        size = rng.integers(0, max_items + 1)
        picks = rng.generator.choice(universe, size=size, replace=False)
        records.append((str(i), [names[k] for k in picks]))
    return Dataset.from_records(records)
