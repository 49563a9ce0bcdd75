import numpy as np
import pytest

from boundent import circuit as qc
from boundent.errors import BadGate, BadIndex, DimMismatch, NonUnitaryGate
from boundent.qmat import SX, basis_state
from conftest import random_unitary


def test_cnot_truth_table():
    g = qc.cnot(0, 1)
    for bits, out in [("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")]:
        assert np.allclose(qc.apply(basis_state(bits), g), basis_state(out))


def test_open_control():
    g = qc.cnot(0, 1, on_one=False)
    assert np.allclose(qc.apply(basis_state("00"), g), basis_state("01"))
    assert np.allclose(qc.apply(basis_state("10"), g), basis_state("10"))


@pytest.mark.parametrize("polarities", [(1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 0)])
def test_toffoli_polarities(polarities):
    g = qc.toffoli3((0, 1, 2), 3, polarities)
    for idx in range(16):
        bits = format(idx, "04b")
        fires = all(int(bits[q]) == p for q, p in enumerate(polarities))
        expect = bits[:3] + (str(1 - int(bits[3])) if fires else bits[3])
        assert np.allclose(qc.apply(basis_state(bits), g), basis_state(expect))


def test_toffoli_needs_distinct_qubits():
    with pytest.raises(BadIndex):
        qc.toffoli3((0, 1, 1), 3)


def test_gate_validation():
    with pytest.raises(NonUnitaryGate):
        qc.single(np.array([[1, 1], [0, 1]]), 0)
    with pytest.raises(BadGate):
        qc.Gate(SX, (0,), ((0, True),))
    with pytest.raises(BadGate):
        qc.Circuit(2, (qc.cnot(0, 2),))
    with pytest.raises(DimMismatch):
        qc.run(qc.Circuit(2, ()), np.ones(8) / np.sqrt(8))


def _random_circuit(rng, n, n_gates):
    gates = []
    for _ in range(n_gates):
        qs = rng.permutation(n)
        kind = rng.integers(3)
        if kind == 0:
            gates.append(qc.single(random_unitary(rng, 2), int(qs[0])))
        elif kind == 1:
            gates.append(qc.controlled(random_unitary(rng, 4), (int(qs[0]), int(qs[1])), [(int(qs[2]), bool(rng.integers(2)))]))
        else:
            phases = tuple(rng.uniform(0, 2 * np.pi, 8))
            gates.append(qc.toffoli3([int(q) for q in qs[:3]], int(qs[3]), tuple(rng.integers(0, 2, 3)), phases))
    return qc.Circuit(n, tuple(gates))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_fast_path_matches_full_operator(rng, n):
    circ = _random_circuit(rng, n, 12)
    psi0 = random_unitary(rng, 1 << n)[:, 0]
    fast = qc.run(circ, psi0)
    slow = qc.unitary_of(circ) @ psi0
    assert np.max(np.abs(fast - slow)) < 1e-12


def test_run_trace_records_every_gate(rng):
    circ = _random_circuit(rng, 4, 5)
    trace = []
    final = qc.run(circ, trace=trace)
    assert len(trace) == 5 and np.allclose(trace[-1], final)


def test_text_round_trip(rng):
    circ = _random_circuit(rng, 5, 8)
    back = qc.parse_circuit(qc.dump_circuit(circ))
    assert back.n_qubits == 5
    assert np.allclose(qc.unitary_of(back), qc.unitary_of(circ), atol=1e-14)
