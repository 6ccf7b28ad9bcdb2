"""Dense statevector simulation.

This is the slow, obviously-correct path: full 2^n amplitude vectors,
explicit gate matrices, and rotations applied as cos(t/2) I - i sin(t/2) P.
It exists to evaluate losses at arbitrary angles and to cross-check every
bit-mask shortcut in the rest of the package, so clarity beats speed.

Amplitude index convention: qubit q is bit (n - 1 - q) of the basis index,
i.e. qubit 0 is the most significant bit and |q0 q1 ... ⟩ reads left to
right like a Pauli label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import CliffordGate, CprCircuit, ParameterPoint, PauliRotation
from .pauli import PauliString
from .stabilizer import CliffordTableau, StabilizerState, apply_gate_forward

__all__ = [
    "ObservableSum",
    "zero_state",
    "apply_gate",
    "apply_pauli",
    "apply_rotation",
    "expectation",
    "evaluate_loss",
    "loss_matrix",
    "prepare_stabilizer",
]

_SQ2 = 1.0 / math.sqrt(2.0)

_GATE_MATRICES = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    # two-qubit basis order |c t⟩ = 00, 01, 10, 11; first qubit is control
    "CX": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}


def zero_state(n: int, max_qubits: int = 24) -> np.ndarray:
    """|0...0⟩ as a dense complex vector; guarded against runaway n."""
    if n < 1:
        raise ValueError("need at least one qubit")
    if n > max_qubits:
        raise ValueError(f"dense vectors are capped at {max_qubits} qubits")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return amps


def _qubit_count(arr: np.ndarray) -> int:
    size = arr.shape[-1]
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError("amplitude axis length must be a power of two")
    return n


def apply_gate(amps: np.ndarray, gate: str, *qubits: int) -> np.ndarray:
    """Named Clifford gate on the given qubits; batching over leading axes."""
    name = gate.upper()
    u = _GATE_MATRICES.get(name)
    if u is None:
        raise ValueError(f"unknown gate {gate!r}")
    n = _qubit_count(amps)
    k = u.shape[0].bit_length() - 1
    if len(qubits) != k:
        raise ValueError(f"gate {name} takes {k} qubit(s)")
    if len(set(qubits)) != len(qubits):
        raise ValueError("gate qubits must be distinct")
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range")
    batch = amps.shape[:-1]
    tensor = amps.reshape(*batch, *([2] * n))
    off = len(batch)
    src = [off + q for q in qubits]
    dst = list(range(tensor.ndim - k, tensor.ndim))
    tensor = np.moveaxis(tensor, src, dst)
    head = tensor.shape[:-k]
    out = tensor.reshape(*head, 1 << k) @ u.T
    out = np.moveaxis(out.reshape(*head, *([2] * k)), dst, src)
    return out.reshape(*batch, 1 << n)


def _reverse_mask(mask: int, n: int) -> int:
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def apply_pauli(amps: np.ndarray, p: PauliString) -> np.ndarray:
    """Exact action of a signed Pauli string, batched over leading axes."""
    n = _qubit_count(amps)
    if p.n != n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {n}")
    x_idx = _reverse_mask(p.x_mask, n)
    z_idx = _reverse_mask(p.z_mask, n)
    idx = np.arange(1 << n)
    phase = p.sign * (1j ** (p.x_mask & p.z_mask).bit_count())
    ph = phase * np.where(np.bitwise_count(idx & z_idx) & 1, -1.0, 1.0)
    return (amps * ph)[..., idx ^ x_idx]


def apply_rotation(amps: np.ndarray, axis: PauliString, theta) -> np.ndarray:
    """exp(-i theta P / 2) acting on the state.

    theta may be a scalar or one angle per batch row.
    """
    if axis.is_identity:
        raise ValueError("identity rotation axis")
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    if theta.ndim:
        c = c[..., None]
        s = s[..., None]
    return c * amps - 1j * s * apply_pauli(amps, axis)


def expectation(amps: np.ndarray, p: PauliString):
    """⟨s|P|s⟩, asserted real; returns a float (or an array over batches)."""
    val = np.sum(np.conj(amps) * apply_pauli(amps, p), axis=-1)
    assert np.all(np.abs(val.imag) < 1e-10), "Pauli expectation must be real"
    real = val.real
    return float(real) if real.ndim == 0 else real


@dataclass(frozen=True, slots=True)
class ObservableSum:
    """Real linear combination of Pauli strings."""

    terms: tuple[PauliString, ...]
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("observable needs at least one term")
        if len(self.terms) != len(self.coefficients):
            raise ValueError("one coefficient per term")
        n = self.terms[0].n
        for t in self.terms:
            if t.n != n:
                raise ValueError("term qubit count mismatch")

    @property
    def n(self) -> int:
        return self.terms[0].n


def _expect_observable(amps: np.ndarray, obs):
    if isinstance(obs, PauliString):
        return expectation(amps, obs)
    if isinstance(obs, ObservableSum):
        return sum(
            coef * expectation(amps, term)
            for term, coef in zip(obs.terms, obs.coefficients)
        )
    raise TypeError("observable must be a PauliString or ObservableSum")


def _run_circuit(c: CprCircuit, amps: np.ndarray, angles: np.ndarray) -> np.ndarray:
    for instr in c.instructions:
        if isinstance(instr, PauliRotation):
            amps = apply_rotation(amps, instr.axis, angles[..., instr.param_index])
        elif isinstance(instr, CliffordGate):
            amps = apply_gate(amps, instr.name, *instr.qubits)
        else:
            raise ValueError(f"unknown instruction {instr!r}")
    return amps


def _as_angle_array(point) -> np.ndarray:
    if isinstance(point, ParameterPoint):
        return np.asarray(point.angles, dtype=float)
    return np.asarray(point, dtype=float)


def evaluate_loss(c: CprCircuit, point, observable, init: np.ndarray | None = None):
    """L(theta) = ⟨psi(theta)| O |psi(theta)⟩ by dense simulation."""
    angles = _as_angle_array(point)
    if angles.shape[-1] != c.num_params:
        raise ValueError("angle count does not match num_params")
    amps = zero_state(c.n) if init is None else np.asarray(init, dtype=complex)
    if angles.ndim > 1:
        amps = np.broadcast_to(amps, (*angles.shape[:-1], amps.shape[-1])).copy()
    amps = _run_circuit(c, amps, angles)
    return _expect_observable(amps, observable)


def loss_matrix(
    c: CprCircuit,
    angles: np.ndarray,
    observables,
    init: np.ndarray | None = None,
) -> np.ndarray:
    """Losses for a (samples, num_params) batch of angle vectors.

    Returns shape (samples, len(observables)). The whole batch moves
    through the circuit together, one rotation at a time.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 2 or angles.shape[1] != c.num_params:
        raise ValueError("angles must have shape (samples, num_params)")
    base = zero_state(c.n) if init is None else np.asarray(init, dtype=complex)
    amps = np.tile(base, (angles.shape[0], 1))
    amps = _run_circuit(c, amps, angles)
    cols = [_expect_observable(amps, obs) for obs in observables]
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# Stabilizer state synthesis.


_PREP_INVERSE = {"S": "SDG", "SDG": "S"}


def prepare_stabilizer(obj) -> np.ndarray:
    """Dense vector of a stabilizer state (or of C|0...0⟩ for a tableau).

    The generators are driven to {+Z_q} by explicit gates plus row
    multiplications; undoing the gate list on |0...0⟩ then lands on the
    state, up to global phase. Verified by the stabilizer conditions
    P|psi⟩ = |psi⟩ for every generator.
    """
    if isinstance(obj, CliffordTableau):
        state = StabilizerState(obj.n, obj.z_images)
    elif isinstance(obj, StabilizerState):
        state = obj
    else:
        raise TypeError("expected a StabilizerState or CliffordTableau")
    n = state.n
    rows = list(state.generators)
    gates: list[tuple[str, tuple[int, ...]]] = []

    def push(name: str, *qubits: int) -> None:
        gates.append((name, qubits))
        rows[:] = [apply_gate_forward(r, name, *qubits) for r in rows]

    from .stabilizer import _signed_product  # row products share sign logic

    for q in range(n):
        bit = 1 << q
        if not any(rows[r].x_mask & bit for r in range(q, n)):
            # no X/Y at qubit q among the live rows: bring a Z up with H
            if not any(rows[r].z_mask & bit for r in range(q, n)):
                raise AssertionError("stabilizer group must act on every qubit")
            push("H", q)
        pivot = next(r for r in range(q, n) if rows[r].x_mask & bit)
        rows[q], rows[pivot] = rows[pivot], rows[q]
        if rows[q].z_mask & bit:
            push("SDG", q)  # Y at the pivot becomes X
        for r in range(n):
            if r != q and rows[r].x_mask & bit:
                rows[r] = _signed_product(rows[r], rows[q])
        for j in range(q + 1, n):
            jbit = 1 << j
            if rows[q].x_mask & jbit and rows[q].z_mask & jbit:
                push("SDG", j)
            if rows[q].x_mask & jbit:
                push("CX", q, j)
            elif rows[q].z_mask & jbit:
                push("CZ", q, j)
        assert rows[q].x_mask == bit and rows[q].z_mask == 0
        push("H", q)
        if rows[q].sign < 0:
            push("X", q)
    for q in range(n):
        assert rows[q].x_mask == 0 and rows[q].z_mask == (1 << q)
        assert rows[q].sign == 1

    amps = zero_state(n)
    for name, qubits in reversed(gates):
        amps = apply_gate(amps, _PREP_INVERSE.get(name, name), *qubits)
    return amps
