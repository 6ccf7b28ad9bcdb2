"""Clifford + Pauli-rotation circuits and their quarter-turn evaluator.

A circuit is an ordered list of named Clifford gates and Pauli rotations
exp(-i phi_k P_k / 2), one independent parameter per rotation. When every
angle is a multiple of pi/2 the whole circuit is Clifford, so a single
Pauli observable back-propagates to a single signed Pauli and the loss is
an exact stabilizer expectation in {-1, 0, +1}.

The hot loop of the discrete experiments lives here:
:func:`clifford_loss_matrix` propagates packed bit masks for a whole batch
of sampled points at once (one machine word per sample, so n <= 64).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import (
    PauliString,
    conjugate_by_gate,
    conjugate_by_quarter_rotation,
    ensure_rng,
    gate_arity,
    gate_table,
    pauli_from_label,
)
from .stabilizer import StabilizerState, stabilizer_expectation

__all__ = [
    "CliffordGate",
    "PauliRotation",
    "CprCircuit",
    "ParameterPoint",
    "CliffordPoint",
    "validate",
    "hea_circuit",
    "clifford_point_to_angles",
    "random_clifford_point",
    "eval_at_clifford_point",
    "nonzero_term_count",
    "clifford_loss_matrix",
    "circuit_to_text",
    "circuit_from_text",
]


@dataclass(frozen=True, slots=True)
class CliffordGate:
    name: str
    qubits: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class PauliRotation:
    axis: PauliString
    param_index: int


@dataclass(frozen=True, slots=True)
class CprCircuit:
    n: int
    instructions: tuple
    num_params: int


@dataclass(frozen=True, slots=True)
class ParameterPoint:
    angles: tuple[float, ...]


@dataclass(frozen=True, slots=True)
class CliffordPoint:
    quarters: tuple[int, ...]


def validate(c: CprCircuit) -> None:
    """Enforce the circuit invariants; raises ValueError on any breach."""
    seen = set()
    for instr in c.instructions:
        if isinstance(instr, PauliRotation):
            if instr.axis.n != c.n:
                raise ValueError("rotation axis qubit count mismatch")
            if instr.axis.is_identity:
                raise ValueError("rotation axis must not be the identity")
            if not 0 <= instr.param_index < c.num_params:
                raise ValueError(f"parameter index {instr.param_index} out of range")
            if instr.param_index in seen:
                raise ValueError(
                    f"correlated parameters: index {instr.param_index} reused"
                )
            seen.add(instr.param_index)
        elif isinstance(instr, CliffordGate):
            if gate_arity(instr.name) != len(instr.qubits):
                raise ValueError(f"gate {instr.name} has wrong qubit count")
            for q in instr.qubits:
                if not 0 <= q < c.n:
                    raise ValueError(f"qubit index {q} out of range")
            if len(set(instr.qubits)) != len(instr.qubits):
                raise ValueError("gate qubits must be distinct")
        else:
            raise ValueError(f"unknown instruction {instr!r}")
    if seen != set(range(c.num_params)):
        missing = sorted(set(range(c.num_params)) - seen)
        raise ValueError(f"missing parameter indices {missing}")


_AXIS_FOR = {0: "X", 1: "Y", 2: "Z"}


def hea_circuit(
    n: int,
    layers: int,
    rng,
    entangler: str = "cz",
    initial_hadamard: bool = False,
) -> CprCircuit:
    """Layered ansatz: random single-qubit rotation axes plus an
    entangling ladder on neighbouring pairs.

    Axes are drawn uniformly from {X, Y, Z}, one call per layer, so two
    builds from the same seed share the instruction prefix when only the
    layer count differs. num_params = n * layers.
    """
    if n < 2:
        raise ValueError("the ansatz needs at least two qubits")
    if layers < 1:
        raise ValueError("need at least one layer")
    gate = entangler.upper()
    if gate not in ("CZ", "CX"):
        raise ValueError("entangler must be cz or cx")
    rng = ensure_rng(rng)
    instructions = []
    if initial_hadamard:
        instructions.extend(CliffordGate("H", (q,)) for q in range(n))
    for layer in range(layers):
        axes = rng.integers(0, 3, size=n)
        for q in range(n):
            letter = _AXIS_FOR[int(axes[q])]
            x = (1 << q) if letter in ("X", "Y") else 0
            z = (1 << q) if letter in ("Y", "Z") else 0
            instructions.append(
                PauliRotation(PauliString(n, x, z, 1), layer * n + q)
            )
        for q in range(n - 1):
            instructions.append(CliffordGate(gate, (q, q + 1)))
    c = CprCircuit(n, tuple(instructions), n * layers)
    validate(c)
    return c


def clifford_point_to_angles(p: CliffordPoint) -> ParameterPoint:
    return ParameterPoint(tuple(k * (math.pi / 2) for k in p.quarters))


def random_clifford_point(c: CprCircuit, rng) -> CliffordPoint:
    """Uniform over the 4^num_params quarter-turn grid."""
    rng = ensure_rng(rng)
    quarters = rng.integers(0, 4, size=c.num_params)
    return CliffordPoint(tuple(int(k) for k in quarters))


def eval_at_clifford_point(
    c: CprCircuit,
    p: CliffordPoint,
    obs: PauliString,
    init: StabilizerState,
) -> int:
    """Exact Tr(init U† obs U) at a quarter-turn point.

    The observable is conjugated backwards through the instruction list,
    staying a single signed Pauli throughout, then met with a stabilizer
    expectation. Cost is linear in the instruction count.
    """
    if obs.n != c.n or init.n != c.n:
        raise ValueError("qubit count mismatch")
    if len(p.quarters) != c.num_params:
        raise ValueError("point length does not match num_params")
    cur = obs
    for instr in reversed(c.instructions):
        if isinstance(instr, PauliRotation):
            cur = conjugate_by_quarter_rotation(
                cur, instr.axis, p.quarters[instr.param_index]
            )
        else:
            cur = conjugate_by_gate(cur, instr.name, *instr.qubits)
    return stabilizer_expectation(init, cur)


def nonzero_term_count(
    c: CprCircuit, p: CliffordPoint, terms, init: StabilizerState
) -> int:
    """How many of the given Paulis have non-zero loss at the point."""
    return sum(1 for t in terms if eval_at_clifford_point(c, p, t, init) != 0)


# ---------------------------------------------------------------------------
# Vectorized quarter-turn kernel. One uint64 mask pair per sample.


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _stabilizer_expectations_vec(
    init: StabilizerState,
    xs: np.ndarray,
    zs: np.ndarray,
    signs: np.ndarray,
) -> np.ndarray:
    """Vectorized Tr(rho P) for a batch of signed mask pairs."""
    n = init.n
    rx = xs.copy()
    rz = zs.copy()
    ax = np.zeros_like(xs)
    az = np.zeros_like(zs)
    ae = np.zeros(xs.shape, dtype=np.int64)
    asign = np.ones(xs.shape, dtype=np.int64)
    for pivot, row in init.reduced:
        if pivot < n:
            sel = (rx >> np.uint64(pivot)) & np.uint64(1)
        else:
            sel = (rz >> np.uint64(pivot - n)) & np.uint64(1)
        sel = sel.astype(bool)
        if not sel.any():
            continue
        bx = np.uint64(row.x_mask)
        bz = np.uint64(row.z_mask)
        nx = ax[sel] ^ bx
        nz = az[sel] ^ bz
        ae[sel] += (
            _popcount(ax[sel] & az[sel])
            + (row.x_mask & row.z_mask).bit_count()
            + 2 * _popcount(az[sel] & bx)
            - _popcount(nx & nz)
        )
        asign[sel] *= row.sign
        ax[sel] = nx
        az[sel] = nz
        rx[sel] ^= bx
        rz[sel] ^= bz
    in_group = (rx == 0) & (rz == 0)
    e_mod = ae & 3
    assert not np.any(in_group & (e_mod & 1).astype(bool)), "group element not Hermitian"
    prod_sign = np.where(e_mod == 0, asign, -asign)
    out = np.zeros(xs.shape, dtype=np.int8)
    out[in_group] = (prod_sign * signs)[in_group]
    return out


def clifford_loss_matrix(
    c: CprCircuit,
    quarters: np.ndarray,
    observables,
    init: StabilizerState,
) -> np.ndarray:
    """Losses for a (samples, num_params) batch of quarter-turn points.

    Returns an int8 array of shape (samples, len(observables)) whose
    entries match eval_at_clifford_point exactly. Requires n <= 64 so a
    mask fits one machine word.
    """
    if c.n > 64:
        raise ValueError("the packed kernel is limited to 64 qubits")
    quarters = np.asarray(quarters)
    if quarters.ndim != 2 or quarters.shape[1] != c.num_params:
        raise ValueError("quarters must have shape (samples, num_params)")
    b = quarters.shape[0]
    out = np.zeros((b, len(observables)), dtype=np.int8)
    rev = list(reversed(c.instructions))
    one = np.uint64(1)
    for col, obs in enumerate(observables):
        if obs.n != c.n:
            raise ValueError("observable qubit count mismatch")
        xs = np.full(b, obs.x_mask, dtype=np.uint64)
        zs = np.full(b, obs.z_mask, dtype=np.uint64)
        signs = np.full(b, obs.sign, dtype=np.int64)
        for instr in rev:
            if isinstance(instr, PauliRotation):
                axx = np.uint64(instr.axis.x_mask)
                axz = np.uint64(instr.axis.z_mask)
                k = quarters[:, instr.param_index]
                anti = ((_popcount(xs & axz) + _popcount(zs & axx)) & 1).astype(bool)
                half = anti & (k == 2)
                signs[half] = -signs[half]
                odd = anti & ((k & 1) == 1)
                if odd.any():
                    xo = xs[odd]
                    zo = zs[odd]
                    nx = xo ^ axx
                    nz = zo ^ axz
                    e = (
                        (instr.axis.x_mask & instr.axis.z_mask).bit_count()
                        + _popcount(xo & zo)
                        + 2 * _popcount(axz & xo)
                        - _popcount(nx & nz)
                        + k[odd]
                    ) & 3
                    flip = np.where(e == 0, 1, -1) * instr.axis.sign
                    signs[odd] *= flip
                    xs[odd] = nx
                    zs[odd] = nz
            else:
                arity, tx, tz, tsgn = gate_table(instr.name)
                qs = instr.qubits
                idx = ((xs >> np.uint64(qs[0])) & one) | (
                    ((zs >> np.uint64(qs[0])) & one) << one
                )
                if arity == 2:
                    idx |= ((xs >> np.uint64(qs[1])) & one) << np.uint64(2)
                    idx |= ((zs >> np.uint64(qs[1])) & one) << np.uint64(3)
                idx = idx.astype(np.intp)
                nx = tx[idx].astype(np.uint64)
                nz = tz[idx].astype(np.uint64)
                clear = ~np.uint64(sum(1 << q for q in qs))
                xs &= clear
                zs &= clear
                for i, q in enumerate(qs):
                    xs |= ((nx >> np.uint64(i)) & one) << np.uint64(q)
                    zs |= ((nz >> np.uint64(i)) & one) << np.uint64(q)
                signs *= tsgn[idx]
        out[:, col] = _stabilizer_expectations_vec(
            init, xs, zs, signs
        )
    return out


# ---------------------------------------------------------------------------
# Line-oriented serialization, used by the golden-file tests.


def circuit_to_text(c: CprCircuit) -> str:
    lines = [f"CPR n={c.n} params={c.num_params}"]
    for instr in c.instructions:
        if isinstance(instr, PauliRotation):
            lines.append(f"ROT {instr.axis.label()} {instr.param_index}")
        else:
            lines.append(f"{instr.name.upper()} {' '.join(map(str, instr.qubits))}")
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> CprCircuit:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or not lines[0].startswith("CPR "):
        raise ValueError("missing CPR header line")
    header = lines[0].split()
    try:
        n = int(header[1].removeprefix("n="))
        num_params = int(header[2].removeprefix("params="))
    except (IndexError, ValueError):
        raise ValueError(f"bad header {lines[0]!r}") from None
    instructions = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "ROT":
            if len(parts) != 3:
                raise ValueError(f"bad rotation line {ln!r}")
            instructions.append(
                PauliRotation(pauli_from_label(parts[1]), int(parts[2]))
            )
        else:
            instructions.append(
                CliffordGate(parts[0].upper(), tuple(int(q) for q in parts[1:]))
            )
    c = CprCircuit(n, tuple(instructions), num_params)
    validate(c)
    return c
