"""Gate-level pure-state simulator with polarity-tagged controls.

Gates are applied by bit-masked index arithmetic on the amplitude vector;
``expand`` builds the full ``2^n x 2^n`` operator by a separate slow route
(Kronecker products plus projector sums) and exists for cross-checking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BadGate, BadIndex, DimMismatch, NonUnitaryGate
from .qmat import I2, SX, kron_all, n_qubits_of

UNITARY_TOL = 1e-10
MAX_QUBITS = 9

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class Gate:
    """A unitary on ``targets``, active when every control matches its polarity.

    ``controls`` holds ``(qubit, on_one)`` pairs; ``on_one=False`` is an open
    circle (acts when the control is |0>). ``phases``, when given, has one
    angle per control bit pattern (pattern read with the first listed
    control as most significant bit) and multiplies every amplitude with
    that pattern by ``exp(i*angle)``, active or not.
    """

    unitary: np.ndarray
    targets: tuple[int, ...]
    controls: tuple[tuple[int, bool], ...] = ()
    name: str = "U"
    phases: tuple[float, ...] | None = None

    def __post_init__(self):
        u = np.array(self.unitary, dtype=complex)
        targets = tuple(int(t) for t in self.targets)
        controls = tuple((int(q), bool(on)) for q, on in self.controls)
        if u.shape != (1 << len(targets), 1 << len(targets)):
            raise BadGate(f"{self.name}: unitary shape {u.shape} does not match {len(targets)} targets")
        qubits = list(targets) + [q for q, _ in controls]
        if len(set(qubits)) != len(qubits):
            raise BadGate(f"{self.name}: targets and controls overlap")
        if any(q < 0 for q in qubits):
            raise BadIndex(f"{self.name}: negative qubit index")
        err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if err > UNITARY_TOL:
            raise NonUnitaryGate(f"{self.name}: |U^dag U - I|_max = {err:.3g}")
        if self.phases is not None:
            phases = tuple(float(p) for p in self.phases)
            if len(phases) != 1 << len(controls):
                raise BadGate(f"{self.name}: need {1 << len(controls)} phases, got {len(phases)}")
            object.__setattr__(self, "phases", phases)
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.controls)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise BadGate(f"register size {self.n_qubits} outside 1..{MAX_QUBITS}")
        gates = tuple(self.gates)
        for g in gates:
            _check_fits(g, self.n_qubits)
        object.__setattr__(self, "gates", gates)

    def __add__(self, other: "Circuit | Gate | Iterable[Gate]") -> "Circuit":
        if isinstance(other, Circuit):
            if other.n_qubits != self.n_qubits:
                raise DimMismatch("circuits act on different register sizes")
            extra = other.gates
        elif isinstance(other, Gate):
            extra = (other,)
        else:
            extra = tuple(other)
        return Circuit(self.n_qubits, self.gates + tuple(extra))

    def __len__(self) -> int:
        return len(self.gates)


def _check_fits(gate: Gate, n: int) -> None:
    for q in gate.qubits:
        if q >= n:
            raise BadGate(f"{gate.name}: qubit {q} outside a {n}-qubit register")


# -- gate constructors --------------------------------------------------------

def single(u, qubit: int, name: str = "U") -> Gate:
    return Gate(u, (qubit,), name=name)


def controlled(u, targets: Sequence[int], controls: Sequence[tuple[int, bool]], name: str = "CU") -> Gate:
    return Gate(u, tuple(targets), tuple(controls), name=name)


def cnot(control: int, target: int, on_one: bool = True) -> Gate:
    return Gate(SX, (target,), ((control, on_one),), name="CNOT")


def toffoli3(controls: Sequence[int], target: int, polarities: Sequence[bool] = (True, True, True),
             phases: Sequence[float] | None = None) -> Gate:
    """Flip ``target`` iff the three controls match ``polarities`` (all |1> by default)."""
    qs = [int(c) for c in controls] + [int(target)]
    if len(controls) != 3 or len(set(qs)) != 4:
        raise BadIndex(f"toffoli3 needs 3 controls and a target, all distinct: {qs}")
    if any(q < 0 for q in qs):
        raise BadIndex("negative qubit index")
    ctrl = tuple(zip(qs[:3], (bool(p) for p in polarities)))
    return Gate(SX, (qs[3],), ctrl, name="TOFFOLI3", phases=None if phases is None else tuple(phases))


# -- fast path ------------------------------------------------------------------

def _bit(n: int, q: int) -> int:
    return n - 1 - q


def apply(state, gate: Gate) -> np.ndarray:
    """Apply ``gate`` to a state vector without building the full operator."""
    psi = np.array(state, dtype=complex).reshape(-1)
    n = n_qubits_of(psi.size)
    _check_fits(gate, n)
    idx = np.arange(psi.size)
    mask = np.ones(psi.size, dtype=bool)
    for q, on in gate.controls:
        mask &= ((idx >> _bit(n, q)) & 1) == int(on)
    for t in gate.targets:
        mask &= ((idx >> _bit(n, t)) & 1) == 0
    base = idx[mask]
    m = len(gate.targets)
    offsets = np.zeros(1 << m, dtype=np.int64)
    for local in range(1 << m):
        for k, t in enumerate(gate.targets):
            if (local >> (m - 1 - k)) & 1:
                offsets[local] += 1 << _bit(n, t)
    block = base[:, None] + offsets[None, :]
    psi[block] = psi[block] @ gate.unitary.T
    if gate.phases is not None:
        pattern = np.zeros(psi.size, dtype=np.int64)
        for q, _ in gate.controls:
            pattern = (pattern << 1) | ((idx >> _bit(n, q)) & 1)
        psi *= np.exp(1j * np.asarray(gate.phases))[pattern]
    return psi


def run(circuit: Circuit, initial=None, *, trace: list | None = None) -> np.ndarray:
    """Apply the gates of ``circuit`` in order; ``initial`` defaults to |0...0>.

    If ``trace`` is a list, the state after every gate is appended to it.
    """
    if initial is None:
        psi = np.zeros(1 << circuit.n_qubits, dtype=complex)
        psi[0] = 1
    else:
        psi = np.asarray(initial, dtype=complex).reshape(-1)
        if psi.size != 1 << circuit.n_qubits:
            raise DimMismatch(f"state of size {psi.size} for a {circuit.n_qubits}-qubit circuit")
    for g in circuit.gates:
        psi = apply(psi, g)
        if trace is not None:
            trace.append(psi)
    return psi


# -- slow path ------------------------------------------------------------------

_P = (np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex))


def _embed(u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """``u`` on ``targets`` tensored with identity elsewhere, via a qubit permutation."""
    rest = [q for q in range(n) if q not in targets]
    order = list(targets) + rest
    big = np.kron(u, np.eye(1 << len(rest), dtype=complex))
    dim = 1 << n
    perm = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        # position k of the reordered index holds qubit order[k]
        bits = [(i >> _bit(n, k)) & 1 for k in range(n)]
        j = 0
        for b, q in zip(bits, order):
            j |= b << _bit(n, q)
        perm[j, i] = 1
    return perm @ big @ perm.T


def expand(gate: Gate, n: int) -> np.ndarray:
    """Full operator of ``gate`` on ``n`` qubits as a projector sum over control patterns."""
    _check_fits(gate, n)
    dim = 1 << n
    ctrl = [q for q, _ in gate.controls]
    out = np.zeros((dim, dim), dtype=complex)
    active = _embed(gate.unitary, gate.targets, n)
    for pattern in range(1 << len(ctrl)):
        bits = [(pattern >> (len(ctrl) - 1 - k)) & 1 for k in range(len(ctrl))]
        proj = kron_all(_P[bits[ctrl.index(q)]] if q in ctrl else I2 for q in range(n))
        fires = all(b == int(on) for b, (_, on) in zip(bits, gate.controls))
        term = proj @ active if fires else proj
        if gate.phases is not None:
            term = term * np.exp(1j * gate.phases[pattern])
        out += term
    return out


def unitary_of(circuit: Circuit) -> np.ndarray:
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for g in circuit.gates:
        u = expand(g, circuit.n_qubits) @ u
    return u


# -- text format ----------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dump_gate(gate: Gate, with_matrix: bool = True) -> str:
    targets = ",".join(str(t) for t in gate.targets)
    controls = ",".join(f"({q},{'+' if on else '-'})" for q, on in gate.controls)
    line = f"{gate.name} targets=[{targets}] controls=[{controls}]"
    if with_matrix:
        flat = gate.unitary.reshape(-1)
        line += " matrix=[" + ",".join(f"[{_fmt(z.real)},{_fmt(z.imag)}]" for z in flat) + "]"
    if gate.phases is not None:
        line += " phases=[" + ",".join(_fmt(p) for p in gate.phases) + "]"
    return line


def dump_circuit(circuit: Circuit) -> str:
    header = f"# qubits={circuit.n_qubits}"
    return "\n".join([header] + [dump_gate(g) for g in circuit.gates]) + "\n"


_LINE = re.compile(
    r"^(?P<name>\S+) targets=\[(?P<t>[^\]]*)\] controls=\[(?P<c>[^\]]*)\]"
    r"(?: matrix=\[(?P<m>.*?)\])?(?: phases=\[(?P<p>[^\]]*)\])?$"
)


def parse_gate(line: str) -> Gate:
    m = _LINE.match(line.strip())
    if not m:
        raise BadGate(f"cannot parse gate line: {line!r}")
    targets = tuple(int(x) for x in m["t"].split(",") if x)
    controls = tuple(
        (int(q), s == "+") for q, s in re.findall(r"\((\d+),([+-])\)", m["c"])
    )
    name = m["name"]
    if m["m"]:
        pairs = re.findall(r"\[([^,\]]+),([^\]]+)\]", m["m"])
        vals = np.array([complex(float(r), float(i)) for r, i in pairs])
        d = int(round(np.sqrt(vals.size)))
        u = vals.reshape(d, d)
    elif name in ("CNOT", "TOFFOLI3", "X"):
        u = SX
    else:
        raise BadGate(f"{name}: no matrix given and no default for this name")
    phases = tuple(float(x) for x in m["p"].split(",")) if m["p"] else None
    return Gate(u, targets, controls, name=name, phases=phases)


def parse_circuit(text: str) -> Circuit:
    n = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            hit = re.search(r"qubits=(\d+)", line)
            if hit:
                n = int(hit.group(1))
            continue
        gates.append(parse_gate(line))
    if n is None:
        n = 1 + max((q for g in gates for q in g.qubits), default=0)
    return Circuit(n, tuple(gates))
