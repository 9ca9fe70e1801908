"""Spectral SWAP-insertion routing for linear nearest-neighbour qubit layouts."""

from .circuit import Barrier, Cnot, LogicalProgram, Measure, OneQubitGate, Swap
from .dependency import DependencyState
from .errors import LnnmapError, QasmError, QasmSyntaxError, UnsupportedGate
from .generate import generate
from .interaction import InteractionGraph, build_graph, force_couple, priority_pairs
from .mapping import Mapping
from .qasm import emit_program, parse_program
from .router import (
    DEFAULT_PAIRS,
    Direction,
    ForcedMode,
    MetaReport,
    RoutedCircuit,
    RouterConfig,
    next_mapping,
    route,
    route_meta,
)
from .spectral import choose_orientation, coordinates_to_mapping, fiedler_vector, laplacian
from .token_swap import bfs_optimal_swaps, token_swap_sequence
from .verify import (
    VerificationReport,
    check_compliance,
    check_equivalence_permutation,
    check_equivalence_unitary,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "Barrier",
    "Cnot",
    "DEFAULT_PAIRS",
    "DependencyState",
    "Direction",
    "ForcedMode",
    "InteractionGraph",
    "LnnmapError",
    "LogicalProgram",
    "Mapping",
    "Measure",
    "MetaReport",
    "OneQubitGate",
    "QasmError",
    "QasmSyntaxError",
    "RoutedCircuit",
    "RouterConfig",
    "Swap",
    "UnsupportedGate",
    "VerificationReport",
    "bfs_optimal_swaps",
    "build_graph",
    "check_compliance",
    "check_equivalence_permutation",
    "check_equivalence_unitary",
    "choose_orientation",
    "coordinates_to_mapping",
    "emit_program",
    "fiedler_vector",
    "force_couple",
    "generate",
    "laplacian",
    "next_mapping",
    "parse_program",
    "priority_pairs",
    "route",
    "route_meta",
    "token_swap_sequence",
    "verify",
]
