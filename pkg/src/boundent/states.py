"""The two three-qubit bound entangled families, built two independent ways.

``abls_*`` is the GHZ-plus-diagonal family with parameters a, b, c;
``dct_*`` is the GHZ-diagonal family with weights lambda. Each family has
a ``*_direct`` builder that writes the density matrix down and a
``*_network`` builder that runs the six-qubit purification circuit from
|000000> and traces out the three ancillas (qubits 3, 4, 5).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import circuit as qc
from .errors import BadParams, SchmidtFailure
from .qmat import basis_state, partial_trace, projector

SYSTEM = (0, 1, 2)


# -- ABLS family ------------------------------------------------------------------

@dataclass(frozen=True)
class ABLSParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for k in ("a", "b", "c"):
            v = float(getattr(self, k))
            if not math.isfinite(v) or v <= 0:
                raise BadParams(f"a,b,c > 0 violated: {k}={v}")
            object.__setattr__(self, k, v)
        if abs(self.a * self.b - self.c) <= 1e-9:
            raise BadParams(f"ab≠c violated: a*b={self.a * self.b:.12g}, c={self.c:.12g}")

    @classmethod
    def symmetric(cls, a: float) -> "ABLSParams":
        """The one-parameter slice a = b = 1/c."""
        return cls(a, a, 1 / a)

    @property
    def N(self) -> float:
        a, b, c = self.a, self.b, self.c
        return 2 + a + b + c + 1 / a + 1 / b + 1 / c

    def gate_constants(self) -> dict[str, float]:
        a, b, c = self.a, self.b, self.c
        n1 = math.sqrt(b / (1 + b))
        n2 = 1 / math.sqrt(1 + b)
        n3 = math.sqrt(c / (1 + a * c))
        n4 = math.sqrt(a / (a + c))
        # alpha*n1*n2 = beta*n3*n4 with alpha^2 + beta^2 = 1, positive root
        r = (n1 * n2) / (n3 * n4)
        alpha = 1 / math.sqrt(1 + r * r)
        beta = alpha * r
        return {"N1": n1, "N2": n2, "N3": n3, "N4": n4, "alpha": alpha, "beta": beta}


OPTIMAL_ABLS = ABLSParams.symmetric(0.3460)

_ABLS_DIAG = ("001", "010", "011", "100", "101", "110")


def _abls_weights(p: ABLSParams) -> tuple[float, ...]:
    return (p.a, p.b, p.c, 1 / p.c, 1 / p.b, 1 / p.a)


def abls_direct(p: ABLSParams) -> np.ndarray:
    ghz = (basis_state("000") + basis_state("111")) / math.sqrt(2)
    rho = 2 * projector(ghz)
    for bits, w in zip(_ABLS_DIAG, _abls_weights(p)):
        rho += w * projector(basis_state(bits))
    return rho / p.N


def abls_psi(p: ABLSParams) -> np.ndarray:
    """The three-qubit pure state reached at the end of the preparation stage."""
    amps = {"000": 1.0, "111": 1.0}
    for bits, w in zip(_ABLS_DIAG, _abls_weights(p)):
        amps[bits] = math.sqrt(w)
    psi = np.zeros(8, dtype=complex)
    for bits, v in amps.items():
        psi[int(bits, 2)] = v
    return psi / math.sqrt(p.N)


def abls_preparation(p: ABLSParams, n_qubits: int = 3) -> qc.Circuit:
    k = p.gate_constants()
    a, b, c = p.a, p.b, p.c
    n1, n2, n3, n4 = k["N1"], k["N2"], k["N3"], k["N4"]
    sb = math.sqrt(b)
    lu1 = n1 * np.array([[1, 1 / sb], [1 / sb, -1]])
    lu2 = n2 * np.array([[1, sb], [sb, -1]])
    # (alpha, beta) in the first column so that |0> -> alpha|0> + beta|1>
    lu3 = np.array([[k["alpha"], k["beta"]], [k["beta"], -k["alpha"]]])
    x = math.sqrt(a) - math.sqrt(1 / (b * c))
    y = math.sqrt(a / b) + math.sqrt(1 / c)
    cu31 = n1 * n3 * np.array([[x, y], [y, -x]])
    x = 1 - math.sqrt(b * c / a)
    y = math.sqrt(b) + math.sqrt(c / a)
    cu32 = n2 * n4 * np.array([[x, y], [y, -x]])
    gates = (
        qc.single(lu1, 0, "LU_1"),
        qc.single(lu2, 1, "LU_2"),
        qc.single(lu3, 2, "LU_3"),
        qc.controlled(cu31, (0,), ((2, True),), "CU_31"),
        qc.controlled(cu32, (1,), ((2, True),), "CU_32"),
        qc.cnot(0, 2),
    )
    return qc.Circuit(n_qubits, gates)


def abls_circuit(p: ABLSParams, toffoli_phases=None) -> qc.Circuit:
    """Full six-qubit purification network (preparation plus purification stage)."""
    purify = (
        qc.cnot(0, 3),
        qc.cnot(1, 4),
        qc.cnot(2, 5),
        qc.cnot(3, 4),
        qc.cnot(3, 5),
        qc.toffoli3((0, 1, 2), 3, phases=toffoli_phases),
    )
    return abls_preparation(p, 6) + purify


def abls_network_state(p: ABLSParams, toffoli_phases=None) -> np.ndarray:
    return qc.run(abls_circuit(p, toffoli_phases))


def abls_network(p: ABLSParams, toffoli_phases=None) -> np.ndarray:
    psi = abls_network_state(p, toffoli_phases)
    return partial_trace(projector(psi), SYSTEM)


# -- DCT family -----------------------------------------------------------------

@dataclass(frozen=True)
class DCTParams:
    lambda0_plus: float
    lambda0_minus: float
    lambda01: float
    lambda10: float
    lambda11: float

    def __post_init__(self):
        vals = []
        for name in ("lambda0_plus", "lambda0_minus", "lambda01", "lambda10", "lambda11"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise BadParams(f"non-negative weights violated: {name}={v}")
            object.__setattr__(self, name, v)
            vals.append(v)
        total = vals[0] + vals[1] + 2 * (vals[2] + vals[3] + vals[4])
        if abs(total - 1) > 1e-12:
            raise BadParams(f"normalization violated: sum = {total:.15g}")
        if self.delta < 0:
            raise BadParams("Δ = λ0+ - λ0- ≥ 0 violated")

    @classmethod
    def normalized(cls, l0p, l0m, l01, l10, l11) -> "DCTParams":
        s = l0p + l0m + 2 * (l01 + l10 + l11)
        return cls(l0p / s, l0m / s, l01 / s, l10 / s, l11 / s)

    @property
    def delta(self) -> float:
        return self.lambda0_plus - self.lambda0_minus

    @property
    def gamma(self) -> float:
        return math.sqrt(self.lambda0_plus + self.lambda0_minus)

    @property
    def lambdas(self) -> dict[str, float]:
        return {"01": self.lambda01, "10": self.lambda10, "11": self.lambda11}


EQ24_DCT = DCTParams(1 / 3, 0.0, 1 / 6, 0.0, 1 / 6)


def dct_basis(k: str, sign: int) -> np.ndarray:
    """GHZ-basis vector (|k1 k2 0> + sign |~k1 ~k2 1>)/sqrt(2) for ``k`` in {"00","01","10","11"}."""
    flipped = "".join("1" if ch == "0" else "0" for ch in k)
    return (basis_state(k + "0") + sign * basis_state(flipped + "1")) / math.sqrt(2)


def dct_direct(p: DCTParams) -> np.ndarray:
    """Explicit 8x8 matrix: diagonal (g, l11, l01, l10, l10, l01, l11, g), corners Δ/2."""
    g = (p.lambda0_plus + p.lambda0_minus) / 2
    rho = np.diag([g, p.lambda11, p.lambda01, p.lambda10, p.lambda10, p.lambda01, p.lambda11, g]).astype(complex)
    rho[0, 7] = rho[7, 0] = p.delta / 2
    return rho


def dct_spectral(p: DCTParams) -> np.ndarray:
    """The same state assembled from its GHZ-basis spectral decomposition."""
    rho = p.lambda0_plus * projector(dct_basis("00", +1)) + p.lambda0_minus * projector(dct_basis("00", -1))
    for k, lam in p.lambdas.items():
        rho += lam * (projector(dct_basis(k, +1)) + projector(dct_basis(k, -1)))
    return rho


def dct_psi(p: DCTParams) -> np.ndarray:
    amps = np.zeros(8, dtype=complex)
    h = p.gamma / math.sqrt(2)
    for bits, v in (
        ("000", h), ("100", h),
        ("010", math.sqrt(p.lambda01)), ("110", math.sqrt(p.lambda01)),
        ("011", math.sqrt(p.lambda10)), ("111", math.sqrt(p.lambda10)),
        ("001", math.sqrt(p.lambda11)), ("101", math.sqrt(p.lambda11)),
    ):
        amps[int(bits, 2)] = v
    return amps


def _unit_eigvec(m: np.ndarray, mu: float) -> np.ndarray:
    """Null vector of the symmetric 2x2 ``m - mu I``, first nonzero component positive."""
    p, q, r = m[0, 0], m[0, 1], m[1, 1]
    c1 = np.array([q, mu - p])
    c2 = np.array([mu - r, q])
    v = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
    nv = np.linalg.norm(v)
    if nv < 1e-300:
        # m is a multiple of the identity: any vector works
        v, nv = np.array([1.0, 0.0]), 1.0
    v = v / nv
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    return v


def schmidt(p: DCTParams) -> dict[str, np.ndarray | float]:
    """Schmidt data of gamma|00> + sqrt(2 l11)|01> + sqrt(2 l01)|10> + sqrt(2 l10)|11>.

    Returns alpha_plus, alpha_minus and orthogonal matrices V2 (qubit 1
    factor, columns v+, v-) and U2 (qubit 2 factor, columns u+, u-).
    """
    g = p.gamma
    s01, s10, s11 = (math.sqrt(2 * p.lambda01), math.sqrt(2 * p.lambda10), math.sqrt(2 * p.lambda11))
    C = np.array([[g, s11], [s01, s10]])
    det2 = (g * g + 2 * p.lambda01) * (2 * p.lambda10 + 2 * p.lambda11) - (
        g * s11 + 2 * math.sqrt(p.lambda01 * p.lambda10)
    ) ** 2
    disc = 1 - 4 * det2
    if disc < -1e-12:
        raise SchmidtFailure(f"negative discriminant {disc:.3g}")
    root = math.sqrt(max(disc, 0.0))
    ap2 = 0.5 * (1 + root)
    ap = math.sqrt(ap2)
    # alpha_plus * alpha_minus = |det C|; avoids cancellation in (1 - root)/2
    am = abs(g * s10 - s11 * s01) / ap
    CtC = C.T @ C
    u_plus = _unit_eigvec(CtC, ap2)
    if ap < 1e-12:
        raise SchmidtFailure("vanishing leading Schmidt coefficient")
    v_plus = C @ u_plus / ap
    u_minus = np.array([-u_plus[1], u_plus[0]])
    if am > 1e-9:
        v_minus = C @ u_minus / am
    else:
        v_minus = np.array([-v_plus[1], v_plus[0]])
    V2 = np.column_stack([v_plus, v_minus])
    U2 = np.column_stack([u_plus, u_minus])
    for name, M in (("V2", V2), ("U2", U2)):
        if np.max(np.abs(M.T @ M - np.eye(2))) > 1e-10:
            raise SchmidtFailure(f"{name} is not orthogonal")
    return {"alpha_plus": ap, "alpha_minus": am, "V2": V2, "U2": U2, "C": C}


def dct_preparation(p: DCTParams, n_qubits: int = 3) -> qc.Circuit:
    if p.gamma <= 1e-9:
        raise BadParams("γ > 1e-9 violated: λ0+ + λ0- is zero")
    sd = schmidt(p)
    ap, am = sd["alpha_plus"], sd["alpha_minus"]
    lu1 = np.array([[ap, am], [am, -ap]])
    gates = (
        qc.single(lu1, 1, "LU1"),
        qc.cnot(1, 2),
        qc.single(sd["V2"], 1, "LU2_V"),
        qc.single(sd["U2"], 2, "LU2_U"),
        qc.single(qc.H, 0, "H"),
    )
    return qc.Circuit(n_qubits, gates)


def dct_circuit(p: DCTParams) -> qc.Circuit:
    g = p.gamma
    sp, sm = math.sqrt(p.lambda0_plus), math.sqrt(p.lambda0_minus)
    u = np.array([[sm, sp], [sp, -sm]]) / g
    purify = (
        qc.cnot(0, 3),
        qc.cnot(1, 4),
        qc.cnot(2, 5),
        qc.controlled(u, (3,), ((1, False), (2, False)), "CCU"),
        qc.toffoli3((0, 1, 2), 3, polarities=(True, False, False)),
        qc.cnot(0, 1),
        qc.cnot(0, 2),
    )
    return dct_preparation(p, 6) + purify


def dct_network_state(p: DCTParams) -> np.ndarray:
    return qc.run(dct_circuit(p))


def dct_network(p: DCTParams) -> np.ndarray:
    return partial_trace(projector(dct_network_state(p)), SYSTEM)


# -- random parameter draws -----------------------------------------------------

def random_abls(rng: np.random.Generator, low: float = 0.05, high: float = 5.0) -> ABLSParams:
    while True:
        a, b, c = np.exp(rng.uniform(math.log(low), math.log(high), size=3))
        if abs(a * b - c) > 1e-6:
            return ABLSParams(a, b, c)


def random_dct(rng: np.random.Generator) -> DCTParams:
    w = rng.exponential(size=5)
    # sparse draws exercise rank-deficient states
    w[rng.random(5) < 0.15] = 0.0
    if w[0] + w[1] == 0:
        w[0] = 1.0
    hi, lo = max(w[0], w[1]), min(w[0], w[1])
    return DCTParams.normalized(hi, lo, w[2], w[3], w[4])
