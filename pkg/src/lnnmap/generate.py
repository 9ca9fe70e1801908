"""Synthetic benchmark circuits.

``linear`` circuits only couple qubits that are neighbours under a hidden
line order, so a perfect router needs no SWAPs at all. ``chain`` circuits are
staircases in which every CNOT shares a qubit with its predecessor, which
leaves exactly one CNOT in the front layer at any time.
"""

from __future__ import annotations

import numpy as np

from .circuit import Cnot, Gate, LogicalProgram, Measure, OneQubitGate

KINDS = ("random", "linear", "chain", "triangle")

_ROTATIONS = ("rz", "rx", "ry")
_CLIFFORD = ("h", "s", "t", "x")


def _one_qubit(rng: np.random.Generator, q: int) -> OneQubitGate:
    if rng.random() < 0.5:
        return OneQubitGate(str(rng.choice(_CLIFFORD)), (), q)
    k = int(rng.integers(1, 8))
    return OneQubitGate(str(rng.choice(_ROTATIONS)), (f"{k}*pi/8",), q)


def _random(rng, M, N):
    return [tuple(int(x) for x in rng.choice(M, size=2, replace=False)) for _ in range(N)]


def _linear(rng, M, N):
    # ising-style brick layers mixed with graycode-style staircases, on line positions
    out: list[tuple[int, int]] = []
    while len(out) < N:
        if rng.random() < 0.5:
            start = int(rng.integers(2))
            for p in range(start, M - 1, 2):
                out.append((p, p + 1) if rng.random() < 0.5 else (p + 1, p))
        else:
            lo = int(rng.integers(M - 1))
            hi = int(rng.integers(lo + 1, M))
            steps = list(range(lo, hi))
            if rng.random() < 0.5:
                steps.reverse()
            out += [(p, p + 1) for p in steps]
    return out[:N]


def _chain(rng, M, N):
    out: list[tuple[int, int]] = []
    a, b = (int(x) for x in rng.choice(M, size=2, replace=False))
    for _ in range(N):
        out.append((a, b) if rng.random() < 0.5 else (b, a))
        keep = a if rng.random() < 0.5 else b
        other = int(rng.integers(M - 1))
        other += other >= keep
        a, b = keep, other
    return out


def _triangle(rng, M, N):
    out: list[tuple[int, int]] = []
    while len(out) < N:
        a, b, c = (int(x) for x in rng.choice(M, size=3, replace=False))
        out += [(a, b), (b, c), (a, c)]
    return out[:N]


_BUILDERS = {"random": _random, "linear": _linear, "chain": _chain, "triangle": _triangle}


def generate(
    kind: str,
    num_qubits: int,
    num_cnots: int,
    seed: int = 0,
    one_qubit_rate: float = 0.0,
    relabel: bool = True,
    measure: bool = False,
) -> LogicalProgram:
    """Deterministic synthetic circuit of ``num_cnots`` CNOTs.

    ``one_qubit_rate`` is the expected number of single-qubit gates inserted
    before each CNOT. ``relabel`` scrambles logical indices of ``linear``
    circuits so the line order is not the identity.
    """
    if kind not in _BUILDERS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    need = 3 if kind == "triangle" else 2
    if num_qubits < need:
        raise ValueError(f"{kind} circuits need at least {need} qubits")
    if num_cnots < 0:
        raise ValueError("num_cnots must be nonnegative")
    rng = np.random.default_rng(seed)
    pairs = _BUILDERS[kind](rng, num_qubits, num_cnots)
    if kind == "linear" and relabel:
        perm = [int(x) for x in rng.permutation(num_qubits)]
        pairs = [(perm[c], perm[t]) for c, t in pairs]
    gates: list[Gate] = []
    for c, t in pairs:
        for _ in range(int(rng.poisson(one_qubit_rate)) if one_qubit_rate > 0 else 0):
            gates.append(_one_qubit(rng, int(rng.choice((c, t)))))
        gates.append(Cnot(c, t))
    cregs: tuple[tuple[str, int], ...] = ()
    if measure:
        cregs = (("c", num_qubits),)
        gates += [Measure(q, "c", q) for q in range(num_qubits)]
    return LogicalProgram(num_qubits, tuple(gates), cregs=cregs)
