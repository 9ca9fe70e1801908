import pytest

from lnnmap.dependency import DependencyState
from lnnmap.generate import KINDS, generate
from lnnmap.qasm import emit_program
from lnnmap.router import route


def test_random_stable_across_runs():
    a = generate("random", 5, 30, seed=1)
    b = generate("random", 5, 30, seed=1)
    assert a == b
    assert emit_program(a) == emit_program(b)
    assert a.num_cnots == 30
    assert a != generate("random", 5, 30, seed=2)


def test_linear_routes_without_swaps():
    p = generate("linear", 10, 300, seed=0)
    assert route(p).swap_count == 0


def test_linear_is_a_relabelled_path():
    p = generate("linear", 8, 200, seed=6)
    edges = {frozenset(c) for c in p.cnot_indices}
    assert len(edges) <= 7
    degree = {q: sum(q in e for e in edges) for q in range(8)}
    assert max(degree.values()) <= 2


def test_linear_without_relabel_is_on_identity_line():
    p = generate("linear", 6, 50, seed=3, relabel=False)
    assert all(abs(c - t) == 1 for c, t in p.cnot_indices)


def test_chain_front_layer_single():
    p = generate("chain", 7, 31, seed=0)
    s = DependencyState(p.cnot_indices)
    while s:
        assert len(s.front) == 1
        s.apply_cnot(next(iter(s.front)))
        assert len(s.front) <= 1
        s.refresh_layers()


def test_triangle_family():
    p = generate("triangle", 6, 9, seed=2)
    c = p.cnot_indices
    for i in range(0, 9, 3):
        a, b = c[i]
        assert c[i + 1][0] == b
        assert c[i + 2] == (a, c[i + 1][1])


def test_one_qubit_gates_and_measures():
    p = generate("random", 4, 20, seed=0, one_qubit_rate=1.0, measure=True)
    assert len(p.gates) > 20 + 4
    assert p.cregs == (("c", 4),)


@pytest.mark.parametrize("kind", KINDS)
def test_sizes(kind):
    p = generate(kind, 5, 12, seed=9)
    assert p.num_qubits == 5 and p.num_cnots == 12


def test_bad_arguments():
    with pytest.raises(ValueError):
        generate("grid", 4, 4)
    with pytest.raises(ValueError):
        generate("triangle", 2, 3)
    with pytest.raises(ValueError):
        generate("random", 1, 3)
