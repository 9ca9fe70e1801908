"""Independent checks on routed circuits.

Compliance is a direct scan of the two-qubit gates. Equivalence is checked
twice, by replaying the routed circuit while tracking where every logical
qubit sits, and (for small registers) by comparing dense unitaries up to the
initial and final relabellings.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .circuit import Barrier, Cnot, Gate, LogicalProgram, OneQubitGate, Swap, is_two_qubit
from .errors import StateSpaceTooLarge, TooManyQubits
from .qasm import eval_param
from .router import RoutedCircuit


@dataclass
class VerificationReport:
    compliant: bool
    equivalent_permutation: bool
    equivalent_unitary: Optional[bool]
    swap_count: int
    cnot_count: int
    depth: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def check_compliance(routed: RoutedCircuit) -> bool:
    return all(abs(g.qubits[0] - g.qubits[1]) == 1 for g in routed.gates if is_two_qubit(g))


def _logical_ops(routed: RoutedCircuit) -> tuple[list[Gate], list[int]] | None:
    # replay SWAPs; returns the logical gate sequence and the final position of each qubit
    at = list(routed.initial_mapping.inverse)
    ops: list[Gate] = []
    for g in routed.gates:
        if any(not 0 <= p < routed.num_qubits for p in g.qubits):
            return None
        if isinstance(g, Swap):
            at[g.a], at[g.b] = at[g.b], at[g.a]
        elif not isinstance(g, Barrier):
            ops.append(g.remap(at.__getitem__))
    final = [0] * len(at)
    for p, q in enumerate(at):
        final[q] = p
    return ops, final


def check_equivalence_permutation(source: LogicalProgram, routed: RoutedCircuit) -> bool:
    """Replay ``routed`` in terms of logical qubits and match it against ``source``.

    Each replayed gate must be the gate at the head of every per-qubit stream
    of the source, i.e. the sequences differ only by commuting gates on
    disjoint qubits. The tracked end positions must equal ``final_mapping``.
    """
    source = source.expand_swaps()
    if source.num_qubits != routed.num_qubits:
        return False
    replay = _logical_ops(routed)
    if replay is None:
        return False
    ops, final = replay
    if tuple(final) != routed.final_mapping.forward:
        return False
    src = [g for g in source.gates if not isinstance(g, Barrier)]
    streams: list[list[int]] = [[] for _ in range(source.num_qubits)]
    for i, g in enumerate(src):
        for q in g.qubits:
            streams[q].append(i)
    heads = [0] * source.num_qubits
    for g in ops:
        qs = g.qubits
        q0 = qs[0]
        if heads[q0] >= len(streams[q0]):
            return False
        i = streams[q0][heads[q0]]
        if src[i] != g:
            return False
        for q in qs:
            if heads[q] >= len(streams[q]) or streams[q][heads[q]] != i:
                return False
        for q in qs:
            heads[q] += 1
    return all(h == len(s) for h, s in zip(heads, streams))


_FIXED = {
    "id": np.eye(2),
    "x": np.array([[0, 1], [1, 0]]),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.diag([1, -1]),
    "h": np.array([[1, 1], [1, -1]]) / math.sqrt(2),
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "t": np.diag([1, np.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
}


def _u3(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]]
    )


def gate_matrix(g: OneQubitGate) -> np.ndarray:
    if g.name in _FIXED:
        return np.asarray(_FIXED[g.name], dtype=complex)
    p = [eval_param(x) for x in g.params]
    if g.name == "u3":
        return _u3(*p)
    if g.name == "u2":
        return _u3(math.pi / 2, p[0], p[1])
    if g.name == "u1":
        return np.diag([1, np.exp(1j * p[0])])
    if g.name == "rx":
        c, s = math.cos(p[0] / 2), math.sin(p[0] / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if g.name == "ry":
        c, s = math.cos(p[0] / 2), math.sin(p[0] / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if g.name == "rz":
        return np.diag([np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])])
    raise ValueError(f"no matrix for {g.name}")


def _apply(tensor: np.ndarray, g: Gate) -> np.ndarray:
    # tensor axes 0..n-1 are wires; the last axis enumerates columns
    if isinstance(g, OneQubitGate):
        q = g.qubit
        return np.moveaxis(np.tensordot(gate_matrix(g), tensor, axes=([1], [q])), 0, q)
    if isinstance(g, Cnot):
        out = tensor.copy()
        idx = [slice(None)] * tensor.ndim
        idx[g.control] = 1
        sub = out[tuple(idx)]
        t_axis = g.target - (g.target > g.control)
        out[tuple(idx)] = np.flip(sub, axis=t_axis)
        return out
    if isinstance(g, Swap):
        return np.swapaxes(tensor, g.a, g.b).copy()
    return tensor


def _relabel(tensor: np.ndarray, mapping) -> np.ndarray:
    # logical qubit q moves to wire mapping.forward[q]
    n = len(mapping)
    return np.transpose(tensor, list(mapping.inverse) + [n])


def check_equivalence_unitary(
    source: LogicalProgram, routed: RoutedCircuit, max_qubits: int = 10, atol: float = 1e-9
) -> bool:
    """Dense check that ``U_routed * P_initial == P_final * U_source``.

    Measurements and barriers are ignored.

    Raises:
        TooManyQubits: more than ``max_qubits`` qubits.
    """
    n = source.num_qubits
    if n > max_qubits:
        raise TooManyQubits(f"{n} qubits exceed the dense limit of {max_qubits}")
    if routed.num_qubits != n:
        return False
    dim = 2**n
    eye = np.eye(dim, dtype=complex).reshape([2] * n + [dim])
    lhs = _relabel(eye, routed.initial_mapping)
    for g in routed.gates:
        if any(not 0 <= p < n for p in g.qubits):
            return False
        lhs = _apply(lhs, g)
    rhs = eye
    for g in source.gates:
        rhs = _apply(rhs, g)
    rhs = _relabel(rhs, routed.final_mapping)
    return bool(np.allclose(lhs, rhs, rtol=0.0, atol=atol))


def circuit_depth(gates) -> int:
    """Greedy ASAP layering; each qubit carries at most one gate per layer."""
    level: dict[int, int] = {}
    depth = 0
    for g in gates:
        if isinstance(g, Barrier) or not g.qubits:
            continue
        d = 1 + max(level.get(q, 0) for q in g.qubits)
        for q in g.qubits:
            level[q] = d
        depth = max(depth, d)
    return depth


def verify(
    source: LogicalProgram, routed: RoutedCircuit, unitary: Optional[bool] = None, max_qubits: int = 10
) -> VerificationReport:
    """Run the checks and collect metrics.

    ``unitary=None`` runs the dense check only when the register is small enough.
    """
    src = source.expand_swaps()
    if unitary is None:
        unitary = src.num_qubits <= max_qubits
    eq_u = check_equivalence_unitary(src, routed, max_qubits) if unitary else None
    two_qubit = sum(is_two_qubit(g) for g in routed.gates)
    return VerificationReport(
        compliant=check_compliance(routed),
        equivalent_permutation=check_equivalence_permutation(src, routed),
        equivalent_unitary=eq_u,
        swap_count=two_qubit - src.num_cnots,
        cnot_count=routed.cnot_count,
        depth=circuit_depth(routed.gates),
    )


def optimal_swap_count(program: LogicalProgram, max_qubits: int = 5) -> int:
    """Exact minimum number of added SWAPs over all initial mappings and schedules.

    Dijkstra over (arrangement, applied-CNOT set) states: applying an adjacent
    front-layer CNOT costs 0 and an adjacent SWAP costs 1. Exponential; meant
    as a test oracle for tiny circuits.
    """
    n = program.num_qubits
    cnots = program.expand_swaps().cnot_indices
    if n > max_qubits:
        raise StateSpaceTooLarge(f"{n} qubits exceed the oracle limit of {max_qubits}")
    full = (1 << len(cnots)) - 1
    preds = []
    for j, (c, t) in enumerate(cnots):
        mask = 0
        for i in range(j):
            if {c, t} & set(cnots[i]):
                mask |= 1 << i
        preds.append(mask)


    dist: dict[tuple, int] = {}
    heap = []
    for perm in itertools.permutations(range(n)):
        state = (perm, 0)  # perm[q] = position of qubit q
        dist[state] = 0
        heap.append((0, perm, 0))
    heapq.heapify(heap)
    while heap:
        d, perm, done = heapq.heappop(heap)
        if dist.get((perm, done), math.inf) < d:
            continue
        if done == full:
            return d
        moves = []
        for j, (c, t) in enumerate(cnots):
            if not done >> j & 1 and preds[j] & ~done == 0 and abs(perm[c] - perm[t]) == 1:
                moves.append((d, perm, done | 1 << j))
        for p in range(n - 1):
            new = list(perm)
            a, b = perm.index(p), perm.index(p + 1)
            new[a], new[b] = p + 1, p
            moves.append((d + 1, tuple(new), done))
        for nd, nperm, ndone in moves:
            if nd < dist.get((nperm, ndone), math.inf):
                dist[(nperm, ndone)] = nd
                heapq.heappush(heap, (nd, nperm, ndone))
    raise AssertionError("unreachable")
