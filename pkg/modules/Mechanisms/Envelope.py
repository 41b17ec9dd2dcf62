from bisect import bisect_left
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from modules.Errors import InvalidParameterError

Line = Tuple[float, float]  # (slope, intercept)


@dataclass(frozen=True)
class Envelope:
    """
    Upper envelope f(x) = max_j (intercept_j + x * slope_j) of increasing lines.

    pieces[k] is active on [breakpoints[k-1], breakpoints[k]]; slopes and breakpoints
    are strictly increasing. source_indices[k] is the input position of pieces[k].
    """
    pieces: Tuple[Line, ...]
    breakpoints: Tuple[float, ...]
    source_indices: Tuple[int, ...]

    def piece_at(self, x: float) -> int:
        """Index of the active piece; a point sitting on a breakpoint goes to the lower piece."""
        return bisect_left(self.breakpoints, x)

    def __call__(self, x: float) -> float:
        slope, intercept = self.pieces[self.piece_at(x)]
        return intercept + x * slope


def _never_on_top(first: Line, middle: Line, last: Line) -> bool:
    # middle is redundant when first and last cross at or left of where first and middle cross
    (d1, q1), (d2, q2), (d3, q3) = first, middle, last
    return (q1 - q3) * (d2 - d1) <= (q1 - q2) * (d3 - d1)


def build_upper_envelope(lines: Sequence[Line]) -> Envelope:
    """
    Sort by slope, keep the highest intercept among parallel lines (lower input
    index on a full tie) and pop every line that never realises the maximum.
    """
    if not lines:
        raise InvalidParameterError("the envelope needs at least one line")

    order = sorted(range(len(lines)), key=lambda j: (lines[j][0], -lines[j][1], j))
    hull: List[int] = []
    for j in order:
        if hull and lines[hull[-1]][0] == lines[j][0]:
            continue
        while len(hull) >= 2 and _never_on_top(lines[hull[-2]], lines[hull[-1]], lines[j]):
            hull.pop()
        hull.append(j)

    pieces = tuple((float(lines[j][0]), float(lines[j][1])) for j in hull)
    breakpoints = tuple(
        (q_left - q_right) / (d_right - d_left)
        for (d_left, q_left), (d_right, q_right) in zip(pieces, pieces[1:])
    )
    return Envelope(pieces=pieces, breakpoints=breakpoints, source_indices=tuple(hull))
