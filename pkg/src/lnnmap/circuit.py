"""Gate and program types shared by the parser, router and verifiers.

Qubit indices in a :class:`LogicalProgram` are logical qubit ids. The same
gate types are reused for routed output, where indices are line positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

# name -> number of parameters
ONE_QUBIT_ARITY: dict[str, int] = {
    "u1": 1,
    "u2": 2,
    "u3": 3,
    "rx": 1,
    "ry": 1,
    "rz": 1,
    "h": 0,
    "x": 0,
    "y": 0,
    "z": 0,
    "s": 0,
    "sdg": 0,
    "t": 0,
    "tdg": 0,
    "id": 0,
}


@dataclass(frozen=True)
class OneQubitGate:
    name: str
    params: tuple[str, ...]
    qubit: int

    def __post_init__(self):
        arity = ONE_QUBIT_ARITY.get(self.name)
        if arity is None:
            raise ValueError(f"unknown single-qubit gate {self.name!r}")
        if len(self.params) != arity:
            raise ValueError(f"{self.name} takes {arity} parameter(s), got {len(self.params)}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def remap(self, f: Callable[[int], int]) -> OneQubitGate:
        return OneQubitGate(self.name, self.params, f(self.qubit))


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError(f"CNOT control and target coincide ({self.control})")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)

    def remap(self, f: Callable[[int], int]) -> Cnot:
        return Cnot(f(self.control), f(self.target))


@dataclass(frozen=True)
class Swap:
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"SWAP operands coincide ({self.a})")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.a, self.b)

    def remap(self, f: Callable[[int], int]) -> Swap:
        return Swap(f(self.a), f(self.b))


@dataclass(frozen=True)
class Measure:
    qubit: int
    creg: str
    bit: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def remap(self, f: Callable[[int], int]) -> Measure:
        return Measure(f(self.qubit), self.creg, self.bit)


@dataclass(frozen=True)
class Barrier:
    qubits: tuple[int, ...]

    def remap(self, f: Callable[[int], int]) -> Barrier:
        return Barrier(tuple(f(q) for q in self.qubits))


Gate = Union[OneQubitGate, Cnot, Swap, Measure, Barrier]


def is_two_qubit(gate: Gate) -> bool:
    return isinstance(gate, (Cnot, Swap))


@dataclass(frozen=True)
class LogicalProgram:
    """A parsed circuit over a single quantum register of ``num_qubits`` qubits."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    register_name: str = "q"
    cregs: tuple[tuple[str, int], ...] = ()
    cnot_indices: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a program needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "cregs", tuple(self.cregs))
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"{g} references qubit {q} outside [0, {self.num_qubits})")
        object.__setattr__(
            self,
            "cnot_indices",
            tuple((g.control, g.target) for g in self.gates if isinstance(g, Cnot)),
        )

    @classmethod
    def from_cnots(cls, num_qubits: int, cnots, **kwargs) -> LogicalProgram:
        return cls(num_qubits, tuple(Cnot(c, t) for c, t in cnots), **kwargs)

    @property
    def num_cnots(self) -> int:
        return len(self.cnot_indices)

    def expand_swaps(self) -> LogicalProgram:
        """Replace every SWAP by its three-CNOT decomposition."""
        if not any(isinstance(g, Swap) for g in self.gates):
            return self
        out: list[Gate] = []
        for g in self.gates:
            if isinstance(g, Swap):
                out += [Cnot(g.a, g.b), Cnot(g.b, g.a), Cnot(g.a, g.b)]
            else:
                out.append(g)
        return LogicalProgram(self.num_qubits, tuple(out), self.register_name, self.cregs)
