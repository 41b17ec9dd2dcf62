from dataclasses import dataclass
from typing import List, Sequence, Tuple

from modules.Dataset import Dataset
from modules.Errors import InvalidParameterError


@dataclass(frozen=True)
class CopyGraph:
    """
    Bipartite graph G_l = (U_l, V, E_l).

    Left vertex k stands for the pair left_vertices[k] = (person index, copy index).
    Every copy of a person shares one adjacency tuple (that person's item ids), so the
    edge list is never materialised min(l, |u_i|) times.
    """
    left_vertices: Tuple[Tuple[int, int], ...]
    right_count: int
    adjacency: Tuple[Sequence[int], ...]

    @property
    def left_count(self) -> int:
        return len(self.left_vertices)

    @property
    def edge_count(self) -> int:
        return sum(len(neighbours) for neighbours in self.adjacency)

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges: Sequence[Tuple[int, int]]) -> "CopyGraph":
        """Arbitrary bipartite graph (one copy per left vertex); used by the oracle cross-checks."""
        neighbours: List[set] = [set() for _ in range(left_count)]
        for u, v in edges:
            if not (0 <= u < left_count and 0 <= v < right_count):
                raise InvalidParameterError(f"edge ({u}, {v}) outside {left_count}x{right_count}")
            neighbours[u].add(v)
        return cls(
            left_vertices=tuple((u, 0) for u in range(left_count)),
            right_count=right_count,
            adjacency=tuple(tuple(sorted(vs)) for vs in neighbours),
        )


def build_copy_graph(dataset: Dataset, ell: int) -> CopyGraph:
    """Person i gets min(ell, |u_i|) left copies, each adjacent to every item of u_i."""
    if ell < 1:
        raise InvalidParameterError(f"contribution bound must be >= 1, got {ell}")

    left_vertices: List[Tuple[int, int]] = []
    adjacency: List[Sequence[int]] = []
    for i, person in enumerate(dataset.people):
        neighbours = tuple(sorted(person.items))
        for j in range(min(ell, len(person.items))):
            left_vertices.append((i, j))
            adjacency.append(neighbours)

    return CopyGraph(
        left_vertices=tuple(left_vertices),
        right_count=dataset.vocabulary_size,
        adjacency=tuple(adjacency),
    )
