from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Mapping:
    """Bijection from logical qubits to line positions ``0..M-1``.

    ``forward[q]`` is the position of logical qubit ``q``; ``inverse[p]`` is
    the qubit sitting at position ``p``.
    """

    forward: tuple[int, ...]
    inverse: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fwd = tuple(int(p) for p in self.forward)
        n = len(fwd)
        inv = [-1] * n
        for q, p in enumerate(fwd):
            if not 0 <= p < n or inv[p] != -1:
                raise ValueError(f"not a permutation of 0..{n - 1}: {fwd}")
            inv[p] = q
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def identity(cls, n: int) -> Mapping:
        return cls(tuple(range(n)))

    @classmethod
    def from_order(cls, order: Iterable[int]) -> Mapping:
        """Build from the left-to-right sequence of qubits on the line."""
        order = list(order)
        fwd = [0] * len(order)
        for p, q in enumerate(order):
            fwd[q] = p
        return cls(tuple(fwd))

    def __len__(self) -> int:
        return len(self.forward)

    def position(self, qubit: int) -> int:
        return self.forward[qubit]

    def qubit_at(self, position: int) -> int:
        return self.inverse[position]

    def adjacent(self, a: int, b: int) -> bool:
        return abs(self.forward[a] - self.forward[b]) == 1

    def swap_positions(self, i: int, j: int) -> Mapping:
        """Mapping after exchanging the qubits at positions ``i`` and ``j``."""
        fwd = list(self.forward)
        qi, qj = self.inverse[i], self.inverse[j]
        fwd[qi], fwd[qj] = j, i
        return Mapping(tuple(fwd))

    def apply_swaps(self, swaps: Sequence[tuple[int, int]]) -> Mapping:
        inv = list(self.inverse)
        for i, j in swaps:
            inv[i], inv[j] = inv[j], inv[i]
        return Mapping.from_order(inv)

    def displacement(self, other: Mapping) -> int:
        """Sum over qubits of how far each one moves between the two mappings."""
        return sum(abs(a - b) for a, b in zip(self.forward, other.forward))
