"""Mapper/permuter routing loop for linear nearest-neighbour devices.

Each iteration asks the spectral mapper for a mapping, then greedily applies
every front-layer CNOT that is adjacent under it (admitting CNOTs that become
unblocked) until none is. Consecutive mappings are bridged by token swapping.
"""

from __future__ import annotations

import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .circuit import Barrier, Cnot, Gate, LogicalProgram, Swap, is_two_qubit
from .dependency import DependencyState
from .errors import EmptyCircuit, LnnmapError, ParamOutOfRange
from .interaction import InteractionGraph, build_graph, force_couple, priority_pairs
from .mapping import Mapping
from .spectral import choose_orientation, spectral_coordinates
from .token_swap import token_swap_sequence

# (alpha, beta) pairs tried by the meta-algorithm, in tie-break order
DEFAULT_PAIRS: tuple[tuple[float, float], ...] = (
    (0.2, 0.3),
    (0.3, 0.4),
    (0.4, 0.1),
    (0.5, 0.1),
    (0.5, 0.6),
    (0.7, 0.1),
    (0.8, 0.1),
    (0.8, 0.2),
    (0.8, 0.6),
    (0.9, 0.9),
)


class ForcedMode(str, Enum):
    STANDALONE = "standalone"
    FALLBACK = "fallback"


class Direction(str, Enum):
    FORWARD = "forward"
    BIDIRECTIONAL = "bidi"


@dataclass(frozen=True)
class RouterConfig:
    """Tunable knobs of the router.

    ``tau_regular``/``tau_forced`` default to ``M`` and ``4M`` for an
    ``M``-qubit program when left as ``None``.
    """

    alpha: float = 0.5
    beta: float = 0.6
    tau_regular: Optional[int] = None
    tau_forced: Optional[int] = None
    forced_mode: ForcedMode = ForcedMode.FALLBACK
    direction: Direction = Direction.FORWARD
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "forced_mode", ForcedMode(self.forced_mode))
        object.__setattr__(self, "direction", Direction(self.direction))
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParamOutOfRange(f"{name} must lie in [0, 1], got {v}")
        for name in ("tau_regular", "tau_forced"):
            v = getattr(self, name)
            if v is not None and (int(v) != v or v < 1):
                raise ParamOutOfRange(f"{name} must be a positive integer, got {v}")

    def taus(self, num_qubits: int) -> tuple[int, int]:
        reg = self.tau_regular if self.tau_regular is not None else num_qubits
        forced = self.tau_forced if self.tau_forced is not None else 4 * num_qubits
        return int(reg), int(forced)


@dataclass(frozen=True)
class Block:
    """CNOTs (indices into the program's CNOT list) applied under one mapping."""

    mapping: Mapping
    cnots: tuple[int, ...]
    forced: bool = False


@dataclass(frozen=True)
class RoutedCircuit:
    """Physical circuit on line positions plus the mappings at both ends.

    ``gates`` uses the same gate types as :class:`LogicalProgram`, with
    qubit indices meaning positions. ``mappings`` records the mapping of every
    routing iteration before leading/trailing SWAPs were folded away.
    """

    num_qubits: int
    gates: tuple[Gate, ...]
    initial_mapping: Mapping
    final_mapping: Mapping
    register_name: str = "q"
    cregs: tuple[tuple[str, int], ...] = ()
    mappings: tuple[Mapping, ...] = ()
    forced_iterations: int = 0

    @property
    def swap_count(self) -> int:
        return sum(isinstance(g, Swap) for g in self.gates)

    @property
    def cnot_count(self) -> int:
        return sum(isinstance(g, Cnot) for g in self.gates)

    @property
    def blocks(self) -> list[tuple[list[Cnot], list[Swap]]]:
        """Alternating runs of CNOTs and the SWAP bridge that follows each run."""
        out: list[tuple[list[Cnot], list[Swap]]] = []
        cnots: list[Cnot] = []
        swaps: list[Swap] = []
        for g in self.gates:
            if isinstance(g, Cnot):
                if swaps:
                    out.append((cnots, swaps))
                    cnots, swaps = [], []
                cnots.append(g)
            elif isinstance(g, Swap):
                swaps.append(g)
        if cnots or swaps:
            out.append((cnots, swaps))
        return out


class MappingResult(NamedTuple):
    mapping: Mapping
    forced: bool


GraphHook = Callable[[int, InteractionGraph], None]


def _solve(
    graph: InteractionGraph,
    prev: Optional[Mapping],
    rng: np.random.Generator,
    hint: Optional[InteractionGraph] = None,
) -> Mapping:
    anchor = None
    if prev is not None:
        anchor = np.array([np.mean([prev.forward[q] for q in grp]) for grp in graph.groups])
    y = spectral_coordinates(graph.weights, anchor, hint=None if hint is None else hint.weights)
    return choose_orientation(y, prev, graph.groups, rng)


def next_mapping(
    state: DependencyState,
    prev: Optional[Mapping],
    cfg: RouterConfig,
    num_qubits: int,
    rng: Optional[np.random.Generator] = None,
    reverse: bool = False,
    on_graph: Optional[GraphHook] = None,
) -> MappingResult:
    """Spectral mapping for the next iteration.

    In fallback mode the plain interaction graph is tried first; only if its
    mapping leaves every front-layer CNOT non-adjacent is the graph rebuilt
    with ``tau_forced``, the priority pairs fused, and the solve repeated.
    The fused path always makes at least one front-layer CNOT adjacent.
    """
    if not state:
        raise EmptyCircuit("no remaining CNOTs to map")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    tau_regular, tau_forced = cfg.taus(num_qubits)
    front = state.front_layer(reverse)
    # undecayed counts of every remaining CNOT; only consulted where the windowed graph is silent
    hint = build_graph(state, None, 1.0, 0.0, state.T, num_qubits, reverse)
    if cfg.forced_mode is ForcedMode.FALLBACK:
        g = build_graph(state, prev, cfg.alpha, cfg.beta, tau_regular, num_qubits, reverse)
        if on_graph:
            on_graph(0, g)
        m = _solve(g, prev, rng, hint)
        if any(m.adjacent(*state.cnots[j]) for j in front):
            return MappingResult(m, False)
    pairs = priority_pairs(state, reverse)
    g = force_couple(build_graph(state, prev, cfg.alpha, cfg.beta, tau_forced, num_qubits, reverse), pairs)
    if on_graph:
        on_graph(1, g)
    return MappingResult(_solve(g, prev, rng, force_couple(hint, pairs)), True)


def _iterate(state, prev, cfg, num_qubits, rng, reverse, on_graph) -> Block:
    mapping, forced = next_mapping(state, prev, cfg, num_qubits, rng, reverse, on_graph)
    applied: list[int] = []
    while True:
        candidates = sorted(state.front_layer(reverse), reverse=reverse)
        pick = next((j for j in candidates if mapping.adjacent(*state.cnots[j])), None)
        if pick is None:
            break
        state.apply_cnot(pick, reverse)
        applied.append(pick)
    state.refresh_layers()
    if not applied:
        raise LnnmapError("routing iteration applied no CNOT")
    return Block(mapping, tuple(applied), forced)


class _Assembler:
    """Interleaves carried single-qubit operations with the routed CNOTs."""

    def __init__(self, program: LogicalProgram, start: Mapping):
        self.program = program
        self.cur = start
        self.out: list[Gate] = []
        self.streams = [deque() for _ in range(program.num_qubits)]
        self.cnot_gate: list[int] = []
        self.done: set[int] = set()
        for gi, g in enumerate(program.gates):
            for q in g.qubits:
                self.streams[q].append(gi)
            if isinstance(g, Cnot):
                self.cnot_gate.append(gi)

    def _pos(self, q: int) -> int:
        return self.cur.forward[q]

    def flush(self, q: int, stop: Optional[int] = None):
        stream = self.streams[q]
        while stream and stream[0] != stop:
            gi = stream.popleft()
            g = self.program.gates[gi]
            if isinstance(g, Cnot):
                raise LnnmapError(f"CNOT #{gi} emitted out of dependency order")
            if gi in self.done:
                continue
            if isinstance(g, Barrier):
                self.done.add(gi)
            self.out.append(g.remap(self._pos))
        if stop is not None:
            stream.popleft()

    def bridge(self, target: Mapping):
        for a, b in token_swap_sequence(self.cur, target):
            self.out.append(Swap(a, b))
        self.cur = target

    def cnot(self, j: int):
        gi = self.cnot_gate[j]
        g = self.program.gates[gi]
        self.flush(g.control, gi)
        self.flush(g.target, gi)
        self.out.append(g.remap(self._pos))

    def finish(self):
        for q in range(self.program.num_qubits):
            self.flush(q)


def _exchange(a: int, b: int):
    return lambda p: b if p == a else a if p == b else p


def trim_swaps(
    gates: Sequence[Gate], initial: Mapping, final: Mapping
) -> tuple[list[Gate], Mapping, Mapping]:
    """Fold SWAPs that commute to either end of the circuit into the end mappings.

    A SWAP whose positions no earlier two-qubit gate touches becomes part of
    the initial relabelling; one that no later two-qubit gate touches is
    dropped and the trailing single-qubit gates and measurements are remapped.
    """
    gates = list(gates)
    changed = True
    while changed:
        changed = False
        kept: list[Gate] = []
        touched: set[int] = set()
        for g in gates:
            if isinstance(g, Swap) and g.a not in touched and g.b not in touched:
                f = _exchange(g.a, g.b)
                kept = [h.remap(f) for h in kept]
                initial = initial.swap_positions(g.a, g.b)
                changed = True
                continue
            if is_two_qubit(g):
                touched.update(g.qubits)
            kept.append(g)
        gates = kept

        kept_rev: list[Gate] = []
        touched = set()
        for g in reversed(gates):
            if isinstance(g, Swap) and g.a not in touched and g.b not in touched:
                f = _exchange(g.a, g.b)
                kept_rev = [h.remap(f) for h in kept_rev]
                final = final.swap_positions(g.a, g.b)
                changed = True
                continue
            if is_two_qubit(g):
                touched.update(g.qubits)
            kept_rev.append(g)
        gates = kept_rev[::-1]
    return gates, initial, final


def route(
    program: LogicalProgram, cfg: RouterConfig = RouterConfig(), on_graph: Optional[GraphHook] = None
) -> RoutedCircuit:
    """Route ``program`` onto a line of ``program.num_qubits`` positions.

    Source SWAPs are expanded into three CNOTs first. In bidirectional mode
    forward and reverse iterations alternate and the last forward mapping is
    bridged to the last reverse mapping.
    """
    prog = program.expand_swaps()
    M = prog.num_qubits
    state = DependencyState(prog.cnot_indices)
    rng = np.random.default_rng(cfg.seed)
    forward: list[Block] = []
    backward: list[Block] = []
    bidi = cfg.direction is Direction.BIDIRECTIONAL
    while state:
        prev = forward[-1].mapping if forward else None
        forward.append(_iterate(state, prev, cfg, M, rng, False, on_graph))
        if bidi and state:
            prev = backward[-1].mapping if backward else None
            backward.append(_iterate(state, prev, cfg, M, rng, True, on_graph))
    blocks = forward + [Block(b.mapping, b.cnots[::-1], b.forced) for b in reversed(backward)]

    start = blocks[0].mapping if blocks else Mapping.identity(M)
    asm = _Assembler(prog, start)
    for k, blk in enumerate(blocks):
        if k:
            asm.bridge(blk.mapping)
        for j in blk.cnots:
            asm.cnot(j)
    asm.finish()
    gates, initial, final = trim_swaps(asm.out, start, asm.cur)
    return RoutedCircuit(
        num_qubits=M,
        gates=tuple(gates),
        initial_mapping=initial,
        final_mapping=final,
        register_name=prog.register_name,
        cregs=prog.cregs,
        mappings=tuple(b.mapping for b in blocks),
        forced_iterations=sum(b.forced for b in blocks),
    )


@dataclass
class MetaEntry:
    alpha: float
    beta: float
    swap_count: int
    wall_time_s: float


@dataclass
class MetaReport:
    entries: list[MetaEntry] = field(default_factory=list)
    best_index: int = -1

    @property
    def best(self) -> MetaEntry:
        return self.entries[self.best_index]

    def to_dict(self) -> dict:
        return {"best_index": self.best_index, "entries": [asdict(e) for e in self.entries]}


def _timed_route(program: LogicalProgram, cfg: RouterConfig):
    t0 = time.perf_counter()
    routed = route(program, cfg)
    return routed, time.perf_counter() - t0


def route_meta(
    program: LogicalProgram,
    pairs: Sequence[tuple[float, float]] = DEFAULT_PAIRS,
    seed: int = 0,
    forced_mode: ForcedMode = ForcedMode.FALLBACK,
    direction: Direction = Direction.FORWARD,
    tau_regular: Optional[int] = None,
    tau_forced: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> tuple[RoutedCircuit, MetaReport]:
    """Route once per ``(alpha, beta)`` pair and keep the fewest-SWAP result.

    Ties go to the earliest pair. ``max_workers > 1`` runs the configurations
    in separate processes; the result does not depend on it.
    """
    if not pairs:
        raise ValueError("route_meta needs at least one (alpha, beta) pair")
    cfgs = [
        RouterConfig(a, b, tau_regular, tau_forced, forced_mode, direction, seed) for a, b in pairs
    ]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_timed_route, [program] * len(cfgs), cfgs))
    else:
        results = [_timed_route(program, cfg) for cfg in cfgs]
    report = MetaReport()
    for cfg, (routed, wall) in zip(cfgs, results):
        report.entries.append(MetaEntry(cfg.alpha, cfg.beta, routed.swap_count, wall))
    counts = [r.swap_count for r, _ in results]
    report.best_index = counts.index(min(counts))
    return results[report.best_index][0], report
