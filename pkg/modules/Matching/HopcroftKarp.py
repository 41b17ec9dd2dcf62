"""
Hopcroft-Karp maximum-cardinality matching on a CopyGraph.

Phases alternate a BFS that layers the left vertices by alternating-path distance
from the free left vertices with a DFS that augments along vertex-disjoint shortest
paths. Both searches visit vertices and edges in ascending index order, so the
matching found is the same on every run. The DFS is iterative with a per-vertex
edge cursor, which keeps deep alternating paths off the Python call stack.
"""
from collections import deque
from typing import List

from modules.Matching.CopyGraph import CopyGraph

FREE = -1
INFINITY = float("inf")


class HopcroftKarp:

    def __init__(self, graph: CopyGraph):
        self.graph = graph
        self.pair_left: List[int] = [FREE] * graph.left_count
        self.pair_right: List[int] = [FREE] * graph.right_count
        self.dist: List[float] = [INFINITY] * graph.left_count
        self.limit = INFINITY

    def _layer(self) -> bool:
        """BFS from every free left vertex; True when some free right vertex is reachable."""
        queue = deque()
        for u in range(self.graph.left_count):
            if self.pair_left[u] == FREE:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = INFINITY
        self.limit = INFINITY

        while queue:
            u = queue.popleft()
            if self.dist[u] + 1 > self.limit:
                continue
            for v in self.graph.adjacency[u]:
                w = self.pair_right[v]
                if w == FREE:
                    if self.limit == INFINITY:
                        self.limit = self.dist[u] + 1
                elif self.dist[w] == INFINITY:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return self.limit != INFINITY

    def _augment(self, root: int, cursor: List[int]) -> bool:
        adjacency = self.graph.adjacency
        stack = [root]
        path: List[int] = []
        while stack:
            u = stack[-1]
            neighbours = adjacency[u]
            descended = False
            while cursor[u] < len(neighbours):
                v = neighbours[cursor[u]]
                cursor[u] += 1
                w = self.pair_right[v]
                if w == FREE:
                    if self.dist[u] + 1 == self.limit:
                        path.append(v)
                        for left, right in zip(stack, path):
                            self.pair_left[left] = right
                            self.pair_right[right] = left
                        return True
                elif self.dist[w] == self.dist[u] + 1:
                    path.append(v)
                    stack.append(w)
                    descended = True
                    break
            if not descended:
                # dead end for the rest of this phase
                self.dist[u] = INFINITY
                stack.pop()
                if path:
                    path.pop()
        return False

    def __call__(self) -> int:
        self.pair_left = [FREE] * self.graph.left_count
        self.pair_right = [FREE] * self.graph.right_count
        size = 0
        while self._layer():
            cursor = [0] * self.graph.left_count
            for u in range(self.graph.left_count):
                if self.pair_left[u] == FREE and self._augment(u, cursor):
                    size += 1
        return size


def maximum_matching_size(graph: CopyGraph) -> int:
    return HopcroftKarp(graph)()
