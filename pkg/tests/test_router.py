import numpy as np
import pytest
from hypothesis import given, settings

from lnnmap.circuit import Barrier, Cnot, LogicalProgram, Measure, OneQubitGate, Swap, is_two_qubit
from lnnmap.dependency import DependencyState
from lnnmap.errors import EmptyCircuit, ParamOutOfRange
from lnnmap.generate import generate
from lnnmap.mapping import Mapping
from lnnmap.router import (
    DEFAULT_PAIRS,
    Direction,
    ForcedMode,
    RouterConfig,
    next_mapping,
    route,
    route_meta,
    trim_swaps,
)
from lnnmap.verify import check_compliance, check_equivalence_permutation, optimal_swap_count

from conftest import cnot_lists, random_program

TRIANGLE = [(0, 1), (1, 2), (0, 2)]
# the unfused placement of this circuit separates the lone front-layer CNOT (2, 3)
FALLBACK_CASE = [(2, 3), (3, 0), (0, 2), (2, 4), (3, 1)]

ALL_CONFIGS = [
    RouterConfig(),
    RouterConfig(direction="bidi"),
    RouterConfig(forced_mode="standalone"),
    RouterConfig(0.9, 0.9, forced_mode="standalone", direction="bidi"),
    RouterConfig(0.2, 0.3, tau_regular=1, tau_forced=2),
]


def test_config_validation():
    with pytest.raises(ParamOutOfRange):
        RouterConfig(alpha=1.5)
    with pytest.raises(ParamOutOfRange):
        RouterConfig(tau_regular=0)
    assert RouterConfig().taus(7) == (7, 28)
    assert RouterConfig(forced_mode="standalone").forced_mode is ForcedMode.STANDALONE
    assert RouterConfig(direction="bidi").direction is Direction.BIDIRECTIONAL


def test_default_pairs():
    assert DEFAULT_PAIRS == (
        (0.2, 0.3), (0.3, 0.4), (0.4, 0.1), (0.5, 0.1), (0.5, 0.6),
        (0.7, 0.1), (0.8, 0.1), (0.8, 0.2), (0.8, 0.6), (0.9, 0.9),
    )


def test_next_mapping_single_cnot():
    m, _ = next_mapping(DependencyState([(0, 1)]), None, RouterConfig(), 2)
    assert m.adjacent(0, 1)


def test_next_mapping_triangle():
    s = DependencyState(TRIANGLE)
    m, _ = next_mapping(s, None, RouterConfig(), 3)
    assert any(m.adjacent(*s.cnots[j]) for j in s.front)


def test_next_mapping_fallback_path():
    s = DependencyState(FALLBACK_CASE)
    assert s.front == {0}
    m, forced = next_mapping(s, None, RouterConfig(), 5)
    assert forced
    assert m.adjacent(2, 3)
    stages = []
    next_mapping(s, None, RouterConfig(), 5, on_graph=lambda k, g: stages.append(k))
    assert stages == [0, 1]


def test_next_mapping_empty():
    with pytest.raises(EmptyCircuit):
        next_mapping(DependencyState([]), None, RouterConfig(), 3)


@settings(max_examples=100, deadline=None)
@given(cnot_lists(max_qubits=8, max_cnots=30))
def test_next_mapping_makes_progress(data):
    m, cnots = data
    if not cnots:
        return
    s = DependencyState(cnots)
    for mode in ("standalone", "fallback"):
        for reverse in (False, True):
            mp, _ = next_mapping(s, None, RouterConfig(forced_mode=mode), m, reverse=reverse)
            assert any(mp.adjacent(*s.cnots[j]) for j in s.front_layer(reverse))


def test_empty_circuit():
    r = route(LogicalProgram(4))
    assert r.gates == ()
    assert r.initial_mapping == Mapping.identity(4)
    assert r.blocks == []


def test_triangle_one_swap():
    p = LogicalProgram.from_cnots(3, TRIANGLE)
    for cfg in ALL_CONFIGS:
        r = route(p, cfg)
        if cfg.direction is Direction.FORWARD:
            assert r.swap_count == 1
        assert 1 <= r.swap_count <= 2
        assert check_compliance(r)
        assert check_equivalence_permutation(p, r)
    assert optimal_swap_count(p) == 1


def test_linear_circuit_needs_no_swaps():
    p = generate("linear", 10, 200, seed=4)
    r, report = route_meta(p)
    assert r.swap_count == 0
    assert [e.swap_count for e in report.entries] == [0] * 10


def _check(p, r):
    assert check_compliance(r)
    assert check_equivalence_permutation(p, r)
    assert r.cnot_count == p.expand_swaps().num_cnots
    twoq = [g for g in r.gates if is_two_qubit(g)]
    if twoq:
        assert isinstance(twoq[0], Cnot)
        assert isinstance(twoq[-1], Cnot)


@settings(max_examples=60, deadline=None)
@given(cnot_lists(max_qubits=7, max_cnots=40))
def test_route_valid_all_configs(data):
    m, cnots = data
    p = LogicalProgram.from_cnots(m, cnots)
    for cfg in ALL_CONFIGS:
        _check(p, route(p, cfg))


def test_route_with_carried_operations():
    rng = np.random.default_rng(99)
    for _ in range(40):
        p = random_program(rng, int(rng.integers(2, 8)), int(rng.integers(0, 40)))
        for cfg in ALL_CONFIGS[:3]:
            r = route(p, cfg)
            _check(p, r)
            assert sum(isinstance(g, OneQubitGate) for g in r.gates) == sum(
                isinstance(g, OneQubitGate) for g in p.gates
            )
            measures = [g for g in r.gates if isinstance(g, Measure)]
            assert sorted((g.creg, g.bit) for g in measures) == [("c", q) for q in range(p.num_qubits)]
            for g in measures:
                assert r.final_mapping.position(g.bit) == g.qubit


def test_source_swaps_and_barriers():
    p = LogicalProgram(
        4,
        (Cnot(0, 2), Barrier((0, 1, 2, 3)), Swap(1, 3), OneQubitGate("h", (), 1), Cnot(3, 0)),
    )
    r = route(p)
    _check(p, r)
    assert sum(isinstance(g, Barrier) for g in r.gates) == 1


def test_iterations_apply_at_least_one_cnot():
    p = generate("random", 8, 120, seed=3)
    for cfg in ALL_CONFIGS:
        r = route(p, cfg)
        assert len(r.mappings) <= p.num_cnots


def test_deterministic():
    p = generate("random", 7, 80, seed=12, one_qubit_rate=0.5)
    cfg = RouterConfig(0.5, 0.6, seed=7)
    assert route(p, cfg) == route(p, cfg)
    assert route(p, RouterConfig(direction="bidi", seed=3)) == route(p, RouterConfig(direction="bidi", seed=3))


def test_trim_folds_leading_and_trailing_swaps():
    gates = [Swap(0, 1), OneQubitGate("h", (), 0), Cnot(1, 2), Swap(2, 3), Measure(3, "c", 0)]
    out, initial, final = trim_swaps(gates, Mapping.identity(4), Mapping((1, 0, 3, 2)))
    assert out == [OneQubitGate("h", (), 0), Cnot(1, 2), Measure(2, "c", 0)]
    assert initial == Mapping((1, 0, 2, 3))
    assert final == Mapping((1, 0, 2, 3))


def test_trim_keeps_inner_swaps():
    gates = [Cnot(0, 1), Swap(1, 2), Cnot(1, 0)]
    out, initial, final = trim_swaps(gates, Mapping.identity(3), Mapping((0, 2, 1)))
    assert out == gates


def test_meta_picks_minimum_first():
    p = generate("random", 6, 40, seed=5)
    r, report = route_meta(p)
    counts = [route(p, RouterConfig(a, b)).swap_count for a, b in DEFAULT_PAIRS]
    assert [e.swap_count for e in report.entries] == counts
    assert r.swap_count == min(counts)
    assert report.best_index == counts.index(min(counts))
    assert report.best.alpha == DEFAULT_PAIRS[report.best_index][0]
    assert set(report.to_dict()) == {"best_index", "entries"}


def test_meta_parallel_matches_serial():
    p = generate("random", 6, 30, seed=8)
    serial, rep1 = route_meta(p)
    parallel, rep2 = route_meta(p, max_workers=2)
    assert serial == parallel
    assert rep1.best_index == rep2.best_index


def test_meta_not_worse_than_default_pair():
    rng = np.random.default_rng(31)
    for i in range(20):
        p = generate("random", int(rng.integers(3, 9)), int(rng.integers(5, 50)), seed=i)
        assert route_meta(p)[0].swap_count <= route(p, RouterConfig(0.5, 0.6)).swap_count


def test_meta_requires_pairs():
    with pytest.raises(ValueError):
        route_meta(LogicalProgram(2), pairs=())
