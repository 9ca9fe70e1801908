"""Time-weighted interaction graph over logical qubits, with forced coupling."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dependency import DependencyState
from .errors import EmptyCircuit, OverlappingPairs, ParamOutOfRange
from .mapping import Mapping


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    """Symmetric nonnegative weights between vertex groups.

    Each group holds one logical qubit, or two after forced coupling.
    """

    groups: tuple[tuple[int, ...], ...]
    weights: np.ndarray
    alpha: float = 1.0
    beta: float = 0.0
    tau: int = 0

    @property
    def num_vertices(self) -> int:
        return len(self.groups)

    @property
    def num_qubits(self) -> int:
        return sum(len(g) for g in self.groups)

    def group_of(self, qubit: int) -> int:
        for i, g in enumerate(self.groups):
            if qubit in g:
                return i
        raise KeyError(qubit)

    def weight(self, a: int, b: int) -> float:
        """Weight between the groups containing qubits ``a`` and ``b``."""
        return float(self.weights[self.group_of(a), self.group_of(b)])

    def total_weight(self) -> float:
        return float(np.triu(self.weights, 1).sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        labels = ["+".join(map(str, g)) for g in self.groups]
        buf.write("," + ",".join(labels) + "\n")
        for label, row in zip(labels, self.weights):
            buf.write(label + "," + ",".join(repr(float(x)) for x in row) + "\n")
        return buf.getvalue()


def _check_params(alpha: float, beta: float, tau: int):
    if not 0.0 <= alpha <= 1.0:
        raise ParamOutOfRange(f"alpha must lie in [0, 1], got {alpha}")
    if not 0.0 <= beta <= 1.0:
        raise ParamOutOfRange(f"beta must lie in [0, 1], got {beta}")
    if int(tau) != tau or tau < 0:
        raise ParamOutOfRange(f"tau must be a nonnegative integer, got {tau}")


def build_graph(
    state: DependencyState,
    prev: Optional[Mapping],
    alpha: float,
    beta: float,
    tau: int,
    num_qubits: int | None = None,
    reverse: bool = False,
) -> InteractionGraph:
    """Weighted interaction graph for the next mapping.

    Every remaining CNOT whose forward layer is at most ``tau`` adds
    ``alpha ** (T - reverse_layer)`` to the weight of its qubit pair, and every
    pair adjacent under ``prev`` gets ``beta`` on top. ``0 ** 0`` counts as 1,
    so chain heads keep unit weight even with ``alpha = 0``. With ``reverse``
    the two layerings swap roles (routing from the end of the circuit).
    """
    _check_params(alpha, beta, tau)
    if num_qubits is None:
        if prev is not None:
            num_qubits = len(prev)
        else:
            num_qubits = 1 + max((max(c, t) for c, t in state.cnots), default=-1)
    w = np.zeros((num_qubits, num_qubits))
    _, t_rev, layer_index = state.layers(reverse)
    T = state.T
    for layer in range(int(tau) + 1):
        for i in layer_index.get(layer, ()):
            c, t = state.cnots[i]
            inc = alpha ** (T - t_rev[i])
            w[c, t] += inc
            w[t, c] += inc
    if prev is not None:
        for p in range(num_qubits - 1):
            a, b = prev.inverse[p], prev.inverse[p + 1]
            w[a, b] += beta
            w[b, a] += beta
    groups = tuple((q,) for q in range(num_qubits))
    return InteractionGraph(groups, w, alpha, beta, int(tau))


def priority_pairs(state: DependencyState, reverse: bool = False) -> list[tuple[int, int]]:
    """Qubit pairs of front-layer CNOTs that head a longest dependency chain."""
    if not state:
        raise EmptyCircuit("no remaining CNOTs")
    _, t_rev, _ = state.layers(reverse)
    front = state.back if reverse else state.front
    return [state.cnots[j] for j in sorted(front) if t_rev[j] == state.T]


def force_couple(g: InteractionGraph, pairs: Sequence[tuple[int, int]]) -> InteractionGraph:
    """Fuse each qubit pair into a single vertex.

    The fused vertex's weight to any third vertex is the sum of its members'
    weights; the weight between the two members is dropped.
    """
    seen: set[int] = set()
    for a, b in pairs:
        if a == b or a in seen or b in seen:
            raise OverlappingPairs(f"pairs {list(pairs)} share a qubit")
        seen.update((a, b))
    partner = {}
    for a, b in pairs:
        for q in (a, b):
            gi = g.group_of(q)
            if len(g.groups[gi]) != 1:
                raise OverlappingPairs(f"qubit {q} is already part of fused group {g.groups[gi]}")
        partner[a], partner[b] = b, a

    new_groups: list[tuple[int, ...]] = []
    members: list[list[int]] = []  # old vertex indices per new vertex
    placed: set[int] = set()
    for i, grp in enumerate(g.groups):
        q = grp[0]
        if q in placed:
            continue
        if len(grp) == 1 and q in partner:
            j = g.group_of(partner[q])
            new_groups.append((q, partner[q]))
            members.append([i, j])
            placed.update((q, partner[q]))
        else:
            new_groups.append(grp)
            members.append([i])
            placed.update(grp)

    n = len(new_groups)
    w = np.zeros((n, n))
    for x in range(n):
        for y in range(x + 1, n):
            s = sum(g.weights[i, j] for i in members[x] for j in members[y])
            w[x, y] = w[y, x] = s
    return InteractionGraph(tuple(new_groups), w, g.alpha, g.beta, g.tau)
