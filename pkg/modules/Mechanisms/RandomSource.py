from typing import Optional, Union

import numpy as np

SEED_MASK = (1 << 64) - 1


class RandomSource:
    """
    Seeded PCG64 stream. Two sources built from the same seed yield identical draws.

    Not thread-safe: every estimator invocation owns its source.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & SEED_MASK
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    @classmethod
    def for_trial(cls, master_seed: int, trial: int) -> "RandomSource":
        """Per-trial source derived from (master seed, trial counter)."""
        return cls(derive_seed(master_seed, trial))

    def uniform(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Uniform variates on the open interval (0, 1)."""
        if size is None:
            u = self.generator.random()
            while u == 0.0:
                u = self.generator.random()
            return u
        u = self.generator.random(size)
        zeros = u == 0.0
        while zeros.any():
            u[zeros] = self.generator.random(int(zeros.sum()))
            zeros = u == 0.0
        return u

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        return int(self.generator.integers(low, high))


def derive_seed(master_seed: int, trial: int) -> int:
    sequence = np.random.SeedSequence([int(master_seed) & SEED_MASK, int(trial)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
