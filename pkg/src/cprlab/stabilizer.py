"""Clifford tableaux and stabilizer states.

A tableau stores the forward images C X_j C† and C Z_j C† of every
generator as signed Pauli strings, which keeps composition and inversion
straightforward. Stabilizer states are n independent commuting signed
generators; expectations reduce against a canonical row-echelon basis so
membership of the stabilizer group is a pure GF(2) question with the sign
tracked exactly through Pauli products.

Random Clifford elements come from the transvection decomposition of the
symplectic group, which indexes group elements bijectively and therefore
samples exactly uniformly. Sign bits are drawn independently, one per
generator image.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import (
    PauliString,
    commutes,
    conjugate_by_gate,
    ensure_rng,
    gate_arity,
    multiply,
)

__all__ = [
    "CliffordTableau",
    "StabilizerState",
    "identity_tableau",
    "tableau_from_gates",
    "apply_gate_forward",
    "conjugate_pauli",
    "compose",
    "inverse",
    "random_clifford",
    "random_stabilizer_state",
    "stabilizer_expectation",
    "enumerate_stabilizer_states",
    "tableau_to_text",
]

# Applying gate G to a state maps each stabilizer generator P to G P G†,
# i.e. conjugation by the inverse gate in the G† P G convention.
_INVERSE_NAME = {"S": "SDG", "SDG": "S"}


def apply_gate_forward(p: PauliString, gate: str, *qubits: int) -> PauliString:
    """G p G† for a named gate (the direction a state update needs)."""
    name = gate.upper()
    return conjugate_by_gate(p, _INVERSE_NAME.get(name, name), *qubits)


@dataclass(frozen=True, slots=True)
class CliffordTableau:
    """Forward conjugation images of all 2n Pauli generators."""

    n: int
    x_images: tuple[PauliString, ...]
    z_images: tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise ValueError("tableau needs n X images and n Z images")
        for img in self.x_images + self.z_images:
            if img.n != self.n:
                raise ValueError("image qubit count mismatch")


def identity_tableau(n: int) -> CliffordTableau:
    if n < 1:
        raise ValueError("need at least one qubit")
    xs = tuple(PauliString(n, 1 << q, 0, 1) for q in range(n))
    zs = tuple(PauliString(n, 0, 1 << q, 1) for q in range(n))
    return CliffordTableau(n, xs, zs)


def tableau_from_gates(n: int, gates) -> CliffordTableau:
    """Tableau of the left-to-right gate sequence.

    Each entry is (name, *qubits); the first entry acts first on states.
    """
    t = identity_tableau(n)
    xs = list(t.x_images)
    zs = list(t.z_images)
    for entry in gates:
        name, *qubits = entry
        if gate_arity(name) != len(qubits):
            raise ValueError(f"gate {name} got {len(qubits)} qubit(s)")
        xs = [apply_gate_forward(img, name, *qubits) for img in xs]
        zs = [apply_gate_forward(img, name, *qubits) for img in zs]
    return CliffordTableau(n, tuple(xs), tuple(zs))


def conjugate_pauli(t: CliffordTableau, p: PauliString) -> PauliString:
    """Exact signed image C p C† of a Pauli under the tableau."""
    if t.n != p.n:
        raise ValueError(f"qubit count mismatch: {t.n} vs {p.n}")
    acc = PauliString.identity(t.n)
    e = 0
    for q in range(t.n):
        if (p.x_mask >> q) & 1:
            pp = multiply(acc, t.x_images[q])
            acc, e = pp.pauli, e + pp.i_power
    for q in range(t.n):
        if (p.z_mask >> q) & 1:
            pp = multiply(acc, t.z_images[q])
            acc, e = pp.pauli, e + pp.i_power
    e = (e + (p.x_mask & p.z_mask).bit_count()) % 4
    if e % 2:
        raise AssertionError("Clifford image of a Hermitian Pauli must be Hermitian")
    sign = p.sign * acc.sign * (1 if e == 0 else -1)
    return acc.with_sign(sign)


def compose(outer: CliffordTableau, inner: CliffordTableau) -> CliffordTableau:
    """Tableau of outer . inner (inner acts first)."""
    if outer.n != inner.n:
        raise ValueError("qubit count mismatch")
    xs = tuple(conjugate_pauli(outer, img) for img in inner.x_images)
    zs = tuple(conjugate_pauli(outer, img) for img in inner.z_images)
    return CliffordTableau(outer.n, xs, zs)


def _row_vector(p: PauliString, n: int) -> int:
    # x bits occupy 0..n-1, z bits occupy n..2n-1
    return p.x_mask | (p.z_mask << n)


def inverse(t: CliffordTableau) -> CliffordTableau:
    """Tableau of C†.

    The symplectic matrix inverts as J M^T J over GF(2); signs follow by
    requiring that each candidate image maps back onto its generator.
    """
    n = t.n
    rows = [_row_vector(img, n) for img in t.x_images + t.z_images]
    # transpose of the 2n x 2n bit matrix
    cols = [0] * (2 * n)
    for r, vec in enumerate(rows):
        for c in range(2 * n):
            if (vec >> c) & 1:
                cols[c] |= 1 << r
    full = (1 << n) - 1

    def swap_halves(v: int) -> int:
        return ((v >> n) & full) | ((v & full) << n)

    inv_rows = [swap_halves(cols[(c + n) % (2 * n)]) for c in range(2 * n)]
    xs = []
    zs = []
    for j in range(2 * n):
        vec = inv_rows[j]
        cand = PauliString(n, vec & full, vec >> n, 1)
        image = conjugate_pauli(t, cand)
        want_x = (1 << j) if j < n else 0
        want_z = (1 << (j - n)) if j >= n else 0
        if image.x_mask != want_x or image.z_mask != want_z:
            raise AssertionError("tableau is not symplectic")
        fixed = cand.with_sign(image.sign)
        (xs if j < n else zs).append(fixed)
    return CliffordTableau(n, tuple(xs), tuple(zs))


# ---------------------------------------------------------------------------
# Exact-uniform random Clifford sampling.
#
# Vectors live in F_2^{2n} with the qubit-q coordinates at positions
# (2q, 2q+1); the symplectic form pairs those two positions. Transvections
# Z_h(v) = v + <h, v> h decompose every group element, and drawing the
# per-level indices uniformly makes the resulting matrix exactly uniform
# over Sp(2n, F_2). Rejection over random candidates is deliberately not
# used anywhere here.


def _inner(v: np.ndarray, w: np.ndarray) -> int:
    pairs = v.reshape(-1, 2)
    qairs = w.reshape(-1, 2)
    return int(np.sum(pairs[:, 0] * qairs[:, 1] + pairs[:, 1] * qairs[:, 0]) % 2)


def _transvection(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    if _inner(h, v):
        return (v + h) % 2
    return v


def _find_transvection(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectors (h1, h2) with Z_h1 Z_h2 x = y; either may be zero."""
    nn = x.size
    zero = np.zeros(nn, dtype=np.int8)
    if np.array_equal(x, y):
        return zero, zero
    if _inner(x, y) == 1:
        return (x + y) % 2, zero
    z = np.zeros(nn, dtype=np.int8)
    for i in range(nn // 2):
        ii = 2 * i
        if (x[ii] or x[ii + 1]) and (y[ii] or y[ii + 1]):
            z[ii] = (x[ii] + y[ii]) % 2
            z[ii + 1] = (x[ii + 1] + y[ii + 1]) % 2
            if z[ii] == 0 and z[ii + 1] == 0:
                z[ii + 1] = 1
                if x[ii] != x[ii + 1]:
                    z[ii] = 1
            return (x + z) % 2, (y + z) % 2
    for i in range(nn // 2):
        ii = 2 * i
        if (x[ii] or x[ii + 1]) and not (y[ii] or y[ii + 1]):
            if x[ii] == x[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = x[ii]
                z[ii] = x[ii + 1]
            break
    for i in range(nn // 2):
        ii = 2 * i
        if not (x[ii] or x[ii + 1]) and (y[ii] or y[ii + 1]):
            if y[ii] == y[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = y[ii]
                z[ii] = y[ii + 1]
            break
    return (x + z) % 2, (y + z) % 2


def _bits_of(k: int, nn: int) -> np.ndarray:
    return np.array([(k >> j) & 1 for j in range(nn)], dtype=np.int8)


def _random_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of Sp(2n, F_2) as a 2n x 2n bit matrix of rows."""
    nn = 2 * n
    # nonzero first column image, uniform over 2^{2n}-1 values
    if nn <= 62:
        k = int(rng.integers(1, 1 << nn))
    else:  # keep exact uniformity for very wide registers
        while True:
            bits = rng.integers(0, 2, size=nn, dtype=np.int8)
            if bits.any():
                break
            # all-zero redraw keeps the nonzero distribution uniform
        k = int(sum(int(b) << j for j, b in enumerate(bits)))
    f1 = _bits_of(k, nn)

    e1 = np.zeros(nn, dtype=np.int8)
    e1[0] = 1
    t0, t1 = _find_transvection(e1, f1)

    bits = rng.integers(0, 2, size=nn - 1, dtype=np.int8)
    eprime = e1.copy()
    for j in range(2, nn):
        eprime[j] = bits[j - 1]
    h0 = _transvection(t0, eprime)
    h0 = _transvection(t1, h0)
    if bits[0] == 1:
        f1 = np.zeros(nn, dtype=np.int8)

    if n == 1:
        g = np.identity(2, dtype=np.int8)
    else:
        g = np.zeros((nn, nn), dtype=np.int8)
        g[0, 0] = 1
        g[1, 1] = 1
        g[2:, 2:] = _random_symplectic(n - 1, rng)
    for j in range(nn):
        row = _transvection(t0, g[j])
        row = _transvection(t1, row)
        row = _transvection(h0, row)
        row = _transvection(f1, row)
        g[j] = row
    return g


def random_clifford(n: int, rng) -> CliffordTableau:
    """Uniform Clifford tableau modulo global phase.

    Uniform symplectic matrix first, then one independent sign bit per
    generator image.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = ensure_rng(rng)
    g = _random_symplectic(n, rng)
    sign_bits = rng.integers(0, 2, size=2 * n)

    def to_pauli(row: np.ndarray, bit: int) -> PauliString:
        x = 0
        z = 0
        for q in range(n):
            x |= int(row[2 * q]) << q
            z |= int(row[2 * q + 1]) << q
        return PauliString(n, x, z, -1 if bit else 1)

    xs = tuple(to_pauli(g[2 * q], int(sign_bits[q])) for q in range(n))
    zs = tuple(to_pauli(g[2 * q + 1], int(sign_bits[n + q])) for q in range(n))
    return CliffordTableau(n, xs, zs)


# ---------------------------------------------------------------------------
# Stabilizer states.


def _reduce_rows(generators) -> tuple[tuple[int, PauliString], ...]:
    """Canonical reduced row-echelon basis of the stabilizer group.

    Rows are (pivot, generator) with pivots strictly increasing; the sign
    of every row is the exact sign of that group element, so the reduced
    basis is a canonical fingerprint of the state.
    """
    n = generators[0].n
    rows: list[PauliString] = list(generators)
    basis: list[tuple[int, PauliString]] = []
    for pivot in range(2 * n):
        hit = None
        for i, row in enumerate(rows):
            if (_row_vector(row, n) >> pivot) & 1:
                hit = i
                break
        if hit is None:
            continue
        lead = rows.pop(hit)
        rows = [
            _signed_product(row, lead) if (_row_vector(row, n) >> pivot) & 1 else row
            for row in rows
        ]
        basis = [
            (pv, _signed_product(row, lead) if (_row_vector(row, n) >> pivot) & 1 else row)
            for pv, row in basis
        ]
        basis.append((pivot, lead))
    if rows:
        raise ValueError("stabilizer generators are not independent")
    basis.sort(key=lambda item: item[0])
    return tuple(basis)


def _signed_product(a: PauliString, b: PauliString) -> PauliString:
    pp = multiply(a, b)
    if pp.i_power % 2:
        raise ValueError("stabilizer generators must commute")
    sign = pp.pauli.sign * (1 if pp.i_power == 0 else -1)
    return pp.pauli.with_sign(sign)


@dataclass(frozen=True)
class StabilizerState:
    """Joint +1 eigenstate of n independent commuting signed generators."""

    n: int
    generators: tuple[PauliString, ...]
    reduced: tuple[tuple[int, PauliString], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if len(self.generators) != self.n:
            raise ValueError("need exactly n generators")
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("generator qubit count mismatch")
        for i, g in enumerate(self.generators):
            for h in self.generators[i + 1 :]:
                if not commutes(g, h):
                    raise ValueError("stabilizer generators must commute")
        object.__setattr__(self, "reduced", _reduce_rows(self.generators))

    @classmethod
    def zero(cls, n: int) -> "StabilizerState":
        return cls(n, tuple(PauliString(n, 0, 1 << q, 1) for q in range(n)))

    def key(self) -> tuple:
        """Canonical fingerprint; equal iff the states are equal."""
        return tuple((_row_vector(p, self.n), p.sign) for _, p in self.reduced)


def random_stabilizer_state(n: int, rng) -> StabilizerState:
    """Image of the all-zero state under a uniform random Clifford."""
    t = random_clifford(n, rng)
    return StabilizerState(n, t.z_images)


def stabilizer_expectation(s: StabilizerState, p: PauliString) -> int:
    """Exact Tr(rho P) for a stabilizer state: one of -1, 0, +1."""
    if s.n != p.n:
        raise ValueError(f"qubit count mismatch: {s.n} vs {p.n}")
    n = s.n
    target = _row_vector(p, n)
    acc = None
    for pivot, row in s.reduced:
        if (target >> pivot) & 1:
            target ^= _row_vector(row, n)
            acc = row if acc is None else _signed_product(acc, row)
    if target:
        return 0
    if acc is None:  # identity component, only the sign can differ
        return p.sign
    return p.sign * acc.sign


def enumerate_stabilizer_states(n: int) -> list[StabilizerState]:
    """Every stabilizer state exactly once, by gate closure from zero.

    Breadth-first orbit of the all-zero state under {H_q, S_q, CX_qr}
    with canonical de-duplication. The count is 2^n prod_k (2^k + 1),
    which the tests pin for n up to 3.
    """
    if n > 3:
        raise ValueError("enumeration is guarded to n <= 3")
    moves: list[tuple[str, tuple[int, ...]]] = []
    for q in range(n):
        moves.append(("H", (q,)))
        moves.append(("S", (q,)))
    for q in range(n):
        for r in range(n):
            if q != r:
                moves.append(("CX", (q, r)))
    start = StabilizerState.zero(n)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            for name, qubits in moves:
                gens = tuple(
                    apply_gate_forward(g, name, *qubits) for g in state.generators
                )
                cand = StabilizerState(n, gens)
                k = cand.key()
                if k not in seen:
                    seen[k] = cand
                    nxt.append(cand)
        frontier = nxt
    return list(seen.values())


def tableau_to_text(t: CliffordTableau) -> str:
    """2n generator-image labels, X images then Z images, one per line."""
    lines = [img.label() for img in t.x_images]
    lines += [img.label() for img in t.z_images]
    return "\n".join(lines) + "\n"
