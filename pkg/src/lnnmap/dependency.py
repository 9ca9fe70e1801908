"""CNOT dependency DAG with forward/reverse greedy layering.

CNOT ``i`` directly blocks CNOT ``j`` when ``i < j``, both act on some qubit
``q`` and no CNOT between them touches ``q``. The forward layer of a CNOT is
0 when it has no remaining blockers and otherwise one more than the largest
forward layer among its blockers; the reverse layer is the same quantity
computed on the reversed list. Only shared-qubit ordering is modelled: two
CNOTs sharing a control still block each other.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from .errors import NotInFrontLayer

CnotPair = tuple[int, int]


class DependencyState:
    """Mutable dependency structure over the not-yet-applied CNOTs.

    CNOTs keep their index in the original list for the lifetime of the
    state. :meth:`apply_cnot` updates blockers and the front/back sets
    incrementally; layer numbers are only recomputed by :meth:`refresh_layers`.
    """

    def __init__(self, cnots: Sequence[CnotPair], remaining: Iterable[int] | None = None):
        self.cnots: tuple[CnotPair, ...] = tuple((int(c), int(t)) for c, t in cnots)
        if remaining is None:
            self.order = list(range(len(self.cnots)))
        else:
            self.order = sorted(set(remaining))
        self.remaining: set[int] = set(self.order)
        self.blockers: dict[int, set[int]] = {}
        self.blocked_by_me: dict[int, set[int]] = {}
        self.t_fwd: dict[int, int] = {}
        self.t_rev: dict[int, int] = {}
        self.T = 0
        self.front: set[int] = set()
        self.back: set[int] = set()
        self.layer_index: dict[int, list[int]] = {}
        self.rev_layer_index: dict[int, list[int]] = {}
        self.refresh_layers()

    @classmethod
    def build(cls, cnots: Sequence[CnotPair]) -> DependencyState:
        return cls(cnots)

    def __len__(self) -> int:
        return len(self.remaining)

    def __bool__(self) -> bool:
        return bool(self.remaining)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DependencyState):
            return NotImplemented
        return self._key() == other._key()

    def _key(self):
        return (
            self.cnots,
            self.remaining,
            self.blockers,
            self.blocked_by_me,
            self.t_fwd,
            self.t_rev,
            self.T,
            self.front,
            self.back,
            {k: sorted(v) for k, v in self.layer_index.items()},
        )

    def refresh_layers(self) -> DependencyState:
        """Recompute blockers and both layerings over the remaining CNOTs."""
        self.order = [j for j in self.order if j in self.remaining]
        cnots = self.cnots
        blockers: dict[int, set[int]] = {}
        succ: dict[int, set[int]] = {j: set() for j in self.order}
        t_fwd: dict[int, int] = {}
        last: dict[int, int] = {}
        for j in self.order:
            c, t = cnots[j]
            b = set()
            if c in last:
                b.add(last[c])
            if t in last:
                b.add(last[t])
            blockers[j] = b
            layer = 0
            for i in b:
                succ[i].add(j)
                if t_fwd[i] + 1 > layer:
                    layer = t_fwd[i] + 1
            t_fwd[j] = layer
            last[c] = last[t] = j

        t_rev: dict[int, int] = {}
        for j in reversed(self.order):
            layer = 0
            for s in succ[j]:
                if t_rev[s] + 1 > layer:
                    layer = t_rev[s] + 1
            t_rev[j] = layer

        layer_index: dict[int, list[int]] = defaultdict(list)
        rev_layer_index: dict[int, list[int]] = defaultdict(list)
        for j in self.order:
            layer_index[t_fwd[j]].append(j)
            rev_layer_index[t_rev[j]].append(j)

        self.blockers = blockers
        self.blocked_by_me = succ
        self.t_fwd = t_fwd
        self.t_rev = t_rev
        self.T = max(t_fwd.values(), default=0)
        self.layer_index = dict(layer_index)
        self.rev_layer_index = dict(rev_layer_index)
        self.front = set(layer_index.get(0, ()))
        self.back = set(rev_layer_index.get(0, ()))
        return self

    def front_layer(self, reverse: bool = False) -> set[int]:
        """CNOTs with no remaining blockers (or, with ``reverse``, no remaining successors)."""
        return set(self.back if reverse else self.front)

    def layers(self, reverse: bool = False):
        """``(t_fwd, t_rev, layer_index)`` as seen from the chosen end of the circuit.

        Routing from the back of the circuit interchanges the two layerings.
        """
        if reverse:
            return self.t_rev, self.t_fwd, self.rev_layer_index
        return self.t_fwd, self.t_rev, self.layer_index

    def apply_cnot(self, j: int, reverse: bool = False) -> DependencyState:
        """Remove front-layer CNOT ``j``; successors left unblocked join the front.

        With ``reverse`` the CNOT is taken from the back of the circuit instead.
        """
        layer = self.back if reverse else self.front
        if j not in layer:
            side = "back" if reverse else "front"
            raise NotInFrontLayer(f"CNOT {j} is not in the {side} layer")
        if reverse:
            freed, links, target_set = self.blockers[j], self.blocked_by_me, self.back
        else:
            freed, links, target_set = self.blocked_by_me[j], self.blockers, self.front
        for k in freed:
            links[k].discard(j)
            if not links[k]:
                target_set.add(k)
        self.remaining.discard(j)
        self.front.discard(j)
        self.back.discard(j)
        del self.blockers[j]
        del self.blocked_by_me[j]
        self.t_fwd.pop(j, None)
        self.t_rev.pop(j, None)
        return self


def build(cnots: Sequence[CnotPair]) -> DependencyState:
    return DependencyState(cnots)


def front_layer(state: DependencyState) -> set[int]:
    return state.front_layer()


def apply_cnot(state: DependencyState, j: int) -> DependencyState:
    return state.apply_cnot(j)


def refresh_layers(state: DependencyState) -> DependencyState:
    return state.refresh_layers()
