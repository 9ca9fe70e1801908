"""Approximate token swapping between two mappings on the line.

Each step builds a companion digraph: ``v -> w`` whenever swapping along the
graph edge ``(v, w)`` moves the token on ``v`` strictly closer to its
destination. Walking from a misplaced vertex either closes a directed cycle
(a happy swap chain: every token on it moves closer) or reaches a vertex with
no out-edges, whose token is already home (an unhappy swap). The core works
on any graph given adjacency and a distance function; only the path is
exposed publicly.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Union

from .errors import AllTokensPlaced, StateSpaceTooLarge
from .mapping import Mapping

SwapSequence = list[tuple[int, int]]


@dataclass(frozen=True)
class CompanionGraph:
    out: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v, targets in enumerate(self.out) for w in targets]

    def out_degree(self, v: int) -> int:
        return len(self.out[v])


@dataclass(frozen=True)
class HappyChain:
    """Directed cycle ``cycle[0] -> cycle[1] -> ... -> cycle[0]`` in the companion graph."""

    cycle: tuple[int, ...]

    def swaps(self) -> SwapSequence:
        c = self.cycle
        return [(c[i], c[i + 1]) for i in range(len(c) - 2, -1, -1)]


@dataclass(frozen=True)
class UnhappySwap:
    edge: tuple[int, int]

    def swaps(self) -> SwapSequence:
        return [self.edge]


Operation = Union[HappyChain, UnhappySwap]


def _path_adjacency(n: int) -> list[list[int]]:
    return [[w for w in (v - 1, v + 1) if 0 <= w < n] for v in range(n)]


def _path_distance(a: int, b: int) -> int:
    return abs(a - b)


def _companion(adj, dist, dest: Sequence[int]) -> CompanionGraph:
    # dest[v]: vertex the token currently on v has to reach
    out = []
    for v, nbrs in enumerate(adj):
        d = dist(v, dest[v])
        out.append(tuple(sorted(w for w in nbrs if dist(w, dest[v]) < d)))
    return CompanionGraph(tuple(out))


def _destinations(current: Mapping, target: Mapping) -> list[int]:
    if len(current) != len(target):
        raise ValueError("mappings differ in size")
    return [target.forward[current.inverse[v]] for v in range(len(current))]


def companion_graph(current: Mapping, target: Mapping) -> CompanionGraph:
    """Companion digraph on the path ``0 - 1 - ... - M-1``."""
    dest = _destinations(current, target)
    return _companion(_path_adjacency(len(dest)), _path_distance, dest)


def find_operation(f: CompanionGraph) -> Operation:
    """Walk from the lowest misplaced vertex along lowest-index out-edges."""
    start = next((v for v, targets in enumerate(f.out) if targets), None)
    if start is None:
        raise AllTokensPlaced("every token is already at its destination")
    path = [start]
    where = {start: 0}
    while True:
        v = path[-1]
        w = f.out[v][0]
        if w in where:
            return HappyChain(tuple(path[where[w]:]))
        if not f.out[w]:
            return UnhappySwap((v, w))
        where[w] = len(path)
        path.append(w)


def _token_swap(
    adj: Sequence[Sequence[int]], dist: Callable[[int, int], int], dest: list[int]
) -> SwapSequence:
    dest = list(dest)
    swaps: SwapSequence = []
    while any(dist(v, d) for v, d in enumerate(dest)):
        op = find_operation(_companion(adj, dist, dest))
        for a, b in op.swaps():
            dest[a], dest[b] = dest[b], dest[a]
            swaps.append((a, b))
    return swaps


def token_swap_sequence(current: Mapping, target: Mapping) -> SwapSequence:
    """Adjacent position swaps that turn ``current`` into ``target``.

    Each swap is returned as ``(i, i + 1)``. On the path every operation
    removes one inversion, so the length equals the minimum possible.
    """
    dest = _destinations(current, target)
    swaps = _token_swap(_path_adjacency(len(dest)), _path_distance, dest)
    return [(min(a, b), max(a, b)) for a, b in swaps]


def inversion_count(current: Mapping, target: Mapping) -> int:
    dest = _destinations(current, target)
    return sum(1 for i in range(len(dest)) for j in range(i + 1, len(dest)) if dest[i] > dest[j])


@lru_cache(maxsize=None)
def _bfs_table(n: int) -> dict[tuple[int, ...], int]:
    # distances from the identity arrangement to every arrangement of n tokens
    start = tuple(range(n))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        d = dist[s] + 1
        for i in range(n - 1):
            t = list(s)
            t[i], t[i + 1] = t[i + 1], t[i]
            t = tuple(t)
            if t not in dist:
                dist[t] = d
                queue.append(t)
    return dist


def bfs_optimal_swaps(current: Mapping, target: Mapping, max_states: int = 40320) -> int:
    """Exact minimum number of adjacent swaps, by breadth-first search.

    Tokens are relabelled by their current position so one BFS table per
    size serves every pair.
    """
    n = len(current)
    if math.factorial(n) > max_states:
        raise StateSpaceTooLarge(f"{n}! states exceed the limit of {max_states}")
    arrangement = tuple(current.forward[target.inverse[p]] for p in range(n))
    return _bfs_table(n)[arrangement]
