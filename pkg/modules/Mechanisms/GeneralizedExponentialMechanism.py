"""
Generalized exponential mechanism: selection among queries whose sensitivities differ.

Every candidate i gets the normalized score

    s_i = min_j ((q_i - t D_i) - (q_j - t D_j)) / (D_i + D_j)

which is the root of q_i - (s + t) D_i = f(s - t) with f(x) = max_j (q_j + x D_j).
f is the upper envelope of the lines (slope D_j, intercept q_j); after building it
once, each root is found by a binary search over its pieces, O(m log m) overall.
"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from modules.Errors import InvalidParameterError
from modules.Mechanisms.Envelope import build_upper_envelope
from modules.Mechanisms.ExponentialMechanism import exponential_mechanism_sample
from modules.Mechanisms.RandomSource import RandomSource

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GemProblem:
    q: Sequence[float]
    delta: Sequence[float]
    t: float

    def __post_init__(self):
        if len(self.q) != len(self.delta):
            raise InvalidParameterError(f"{len(self.q)} query values but {len(self.delta)} sensitivities")
        if len(self.q) == 0:
            raise InvalidParameterError("GEM needs at least one candidate")
        if min(self.delta) <= 0:
            raise InvalidParameterError("every sensitivity must be > 0")

    @property
    def m(self) -> int:
        return len(self.q)

    @classmethod
    def for_selection(cls, q: Sequence[float], delta: Sequence[float], epsilon: float, beta: float) -> "GemProblem":
        if not epsilon > 0:
            raise InvalidParameterError(f"epsilon must be > 0, got {epsilon}")
        if not beta > 0:
            raise InvalidParameterError(f"beta must be > 0, got {beta}")
        return cls(q=q, delta=delta, t=gem_threshold(len(q), epsilon, beta))


def gem_threshold(m: int, epsilon: float, beta: float) -> float:
    """t = (2 / epsilon) * log(m / beta)."""
    return 2.0 / epsilon * math.log(m / beta)


def gem_scores_fast(problem: GemProblem) -> np.ndarray:
    q = np.asarray(problem.q, dtype=np.float64)
    delta = np.asarray(problem.delta, dtype=np.float64)
    t = problem.t

    envelope = build_upper_envelope(list(zip(delta.tolist(), q.tolist())))
    slopes = np.array([piece[0] for piece in envelope.pieces])
    intercepts = np.array([piece[1] for piece in envelope.pieces])
    breakpoints = np.array(envelope.breakpoints, dtype=np.float64)
    last_piece = len(envelope.pieces) - 1

    # Vectorised binary search: the first breakpoint b with q_i - (b + 2t) D_i <= f(b)
    # bounds the piece holding s_i - t; none found means the last piece.
    lo = np.zeros(problem.m, dtype=np.int64)
    hi = np.full(problem.m, last_piece, dtype=np.int64)
    searching = lo < hi
    while searching.any():
        mid = (lo + hi) // 2
        probe = np.minimum(mid, last_piece - 1)
        b = breakpoints[probe]
        gap = q - (b + 2.0 * t) * delta - (intercepts[probe] + b * slopes[probe])
        left = searching & (gap <= 0)
        right = searching & ~(gap <= 0)
        hi = np.where(left, mid, hi)
        lo = np.where(right, mid + 1, lo)
        searching = lo < hi

    piece_slope = slopes[lo]
    piece_offset = intercepts[lo] - t * piece_slope
    scores = ((q - t * delta) - piece_offset) / (delta + piece_slope)
    return np.minimum(scores, 0.0)


def gem_select(q: Sequence[float],
               delta: Sequence[float],
               epsilon: float,
               beta: float,
               rng: RandomSource) -> int:
    """
    epsilon-DP choice of a 0-based index when q_i has sensitivity delta_i. With
    probability >= 1 - beta the pick satisfies
    q_pick >= max_j (q_j - delta_j * (4 / epsilon) * log(m / beta)).
    """
    problem = GemProblem.for_selection(q, delta, epsilon, beta)
    scores = gem_scores_fast(problem)
    choice = int(exponential_mechanism_sample(scores, epsilon, rng))
    logger.debug(f"GEM over {problem.m} candidates (t={problem.t:.4f}) picked index {choice}.")
    return choice
