"""Signed Pauli strings on packed bit masks.

A Pauli string is stored as an (x, z) pair of integer bit masks plus a
sign. Bit q of each mask belongs to qubit q, and qubit 0 is the leftmost
character of the text label. The operator represented is

    sign * tensor_q sigma(x_q, z_q)

with sigma(0,0)=I, sigma(1,0)=X, sigma(1,1)=Y, sigma(0,1)=Z. This
canonical form is always Hermitian with eigenvalues +-1; the extra i^k
phases that show up in intermediate operator products are carried
separately by :class:`PhasedProduct` so stored observables never stop
being Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian

import numpy as np

__all__ = [
    "PauliString",
    "PhasedProduct",
    "pauli_from_label",
    "multiply",
    "commutes",
    "expectation_in_zero",
    "random_pauli",
    "two_body_nn_paulis",
    "conjugate_by_gate",
    "conjugate_by_quarter_rotation",
    "gate_arity",
    "gate_table",
    "ensure_rng",
    "GATE_NAMES",
]

_AXIS_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_AXIS = {bits: axis for axis, bits in _AXIS_BITS.items()}


def ensure_rng(rng) -> np.random.Generator:
    """Accept either a seed or a Generator and return a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True, slots=True)
class PauliString:
    """A signed n-qubit Pauli operator in symplectic (x, z) form."""

    n: int
    x_mask: int
    z_mask: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        full = (1 << self.n) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits outside the qubit range")
        if self.x_mask < 0 or self.z_mask < 0:
            raise ValueError("masks must be non-negative")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 1)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def axis(self, q: int) -> str:
        """Single-qubit letter at qubit q."""
        return _BITS_AXIS[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)]

    def label(self) -> str:
        body = "".join(self.axis(q) for q in range(self.n))
        return ("+" if self.sign > 0 else "-") + body

    def with_sign(self, sign: int) -> "PauliString":
        return PauliString(self.n, self.x_mask, self.z_mask, sign)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True, slots=True)
class PhasedProduct:
    """A Pauli string together with an extra phase i**i_power.

    The represented operator is (i ** i_power) * pauli, which is how exact
    operator products get reported before any Hermitian reduction.
    """

    pauli: PauliString
    i_power: int


def pauli_from_label(label: str) -> PauliString:
    """Parse a text label such as "-XIZY" into a PauliString.

    The optional sign prefix defaults to '+'; qubit 0 is the leftmost
    body character.
    """
    if not label:
        raise ValueError("empty label")
    sign = 1
    body = label
    if body[0] in "+-":
        sign = 1 if body[0] == "+" else -1
        body = body[1:]
    if not body:
        raise ValueError("empty label body")
    x = z = 0
    for q, ch in enumerate(body):
        try:
            bx, bz = _AXIS_BITS[ch]
        except KeyError:
            raise ValueError(f"unknown character {ch!r} in Pauli label") from None
        x |= bx << q
        z |= bz << q
    return PauliString(len(body), x, z, sign)


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def multiply(p: PauliString, q: PauliString) -> PhasedProduct:
    """Exact operator product p*q, phase included.

    Writing each factor as sign * i^{|x&z|} * X^x Z^z and commuting the
    inner Z^z1 X^x2 block costs (-1)^{z1.x2}, so the product carries

        i_power = |x1&z1| + |x2&z2| + 2*|z1&x2| - |x3&z3|   (mod 4)

    relative to the canonical Hermitian form of the result.
    """
    _check_same_n(p, q)
    x3 = p.x_mask ^ q.x_mask
    z3 = p.z_mask ^ q.z_mask
    e = (
        (p.x_mask & p.z_mask).bit_count()
        + (q.x_mask & q.z_mask).bit_count()
        + 2 * (p.z_mask & q.x_mask).bit_count()
        - (x3 & z3).bit_count()
    ) % 4
    return PhasedProduct(PauliString(p.n, x3, z3, p.sign * q.sign), e)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff p and q commute; signs never matter."""
    _check_same_n(p, q)
    a = (p.x_mask & q.z_mask).bit_count()
    b = (q.x_mask & p.z_mask).bit_count()
    return (a + b) % 2 == 0


def expectation_in_zero(p: PauliString) -> int:
    """Exact <0...0|p|0...0>: the sign for pure Z-type strings, else 0."""
    if p.x_mask:
        return 0
    return p.sign


def random_pauli(n: int, rng, include_identity: bool = True) -> PauliString:
    """Uniform sign-positive Pauli on n qubits.

    With include_identity=False the identity is excluded by redrawing,
    which keeps the distribution exactly uniform on the remaining 4^n - 1
    strings.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = ensure_rng(rng)
    nbytes = (n + 7) // 8
    full = (1 << n) - 1
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "little") & full
        z = int.from_bytes(rng.bytes(nbytes), "little") & full
        if include_identity or x or z:
            return PauliString(n, x, z, 1)


def two_body_nn_paulis(n: int) -> list[PauliString]:
    """All weight-two nearest-neighbour strings, 9 per adjacent pair.

    Ordering is pair-index major, axis pair minor, so the first entry is
    X on qubits (0, 1).
    """
    if n < 2:
        raise ValueError("need at least two qubits for two-body strings")
    out = []
    for i in range(n - 1):
        for a, b in _cartesian("XYZ", repeat=2):
            ax, az = _AXIS_BITS[a]
            bx, bz = _AXIS_BITS[b]
            x = (ax << i) | (bx << (i + 1))
            z = (az << i) | (bz << (i + 1))
            out.append(PauliString(n, x, z, 1))
    return out


# ---------------------------------------------------------------------------
# Clifford gate conjugation, G† P G.
#
# Each gate is defined by the images of its local X_i and Z_i generators.
# Everything else follows by multiplying images, so a sign slip here would
# be caught by the dense-matrix oracle tests on all local configurations.

def _p(label: str) -> PauliString:
    return pauli_from_label(label)


_GATE_GENERATORS: dict[str, tuple[PauliString, ...]] = {
    # arity 1: images of (X, Z)
    "H": (_p("Z"), _p("X")),
    "S": (_p("-Y"), _p("Z")),
    "SDG": (_p("Y"), _p("Z")),
    "X": (_p("X"), _p("-Z")),
    "Y": (_p("-X"), _p("-Z")),
    "Z": (_p("-X"), _p("Z")),
    # arity 2: images of (X0, Z0, X1, Z1); qubit 0 is control where relevant
    "CX": (_p("XX"), _p("ZI"), _p("IX"), _p("ZZ")),
    "CZ": (_p("XZ"), _p("ZI"), _p("ZX"), _p("IZ")),
    "SWAP": (_p("IX"), _p("IZ"), _p("XI"), _p("ZI")),
}

GATE_NAMES = frozenset(_GATE_GENERATORS)


def gate_arity(name: str) -> int:
    gens = _GATE_GENERATORS.get(name.upper())
    if gens is None:
        raise ValueError(f"unknown gate {name!r}")
    return len(gens) // 2


def _local_image(name: str, xbits: int, zbits: int) -> tuple[int, int, int]:
    """Image of the local canonical Pauli (xbits, zbits) under G† . G."""
    gens = _GATE_GENERATORS[name]
    k = len(gens) // 2
    acc = PauliString.identity(k)
    e = 0
    for i in range(k):
        if (xbits >> i) & 1:
            pp = multiply(acc, gens[2 * i])
            acc, e = pp.pauli, e + pp.i_power
    for i in range(k):
        if (zbits >> i) & 1:
            pp = multiply(acc, gens[2 * i + 1])
            acc, e = pp.pauli, e + pp.i_power
    e = (e + (xbits & zbits).bit_count()) % 4
    if e % 2:
        raise AssertionError(f"non-Hermitian image for gate {name}")
    sign = acc.sign * (1 if e == 0 else -1)
    return acc.x_mask, acc.z_mask, sign


def _build_table(name: str):
    """Lookup over local (x, z) configurations.

    Index layout: bit 2i is x of local qubit i, bit 2i+1 is z of local
    qubit i.
    """
    k = gate_arity(name)
    size = 1 << (2 * k)
    nx = np.zeros(size, dtype=np.uint8)
    nz = np.zeros(size, dtype=np.uint8)
    sg = np.zeros(size, dtype=np.int8)
    for idx in range(size):
        xb = 0
        zb = 0
        for i in range(k):
            xb |= ((idx >> (2 * i)) & 1) << i
            zb |= ((idx >> (2 * i + 1)) & 1) << i
        ix, iz, s = _local_image(name, xb, zb)
        nx[idx] = ix
        nz[idx] = iz
        sg[idx] = s
    return nx, nz, sg


_GATE_TABLES = {name: _build_table(name) for name in _GATE_GENERATORS}


def gate_table(name: str):
    """(arity, new_x, new_z, sign) lookup arrays for a named gate."""
    name = name.upper()
    if name not in _GATE_TABLES:
        raise ValueError(f"unknown gate {name!r}")
    return (gate_arity(name), *_GATE_TABLES[name])


def conjugate_by_gate(p: PauliString, gate: str, *qubits: int) -> PauliString:
    """G† p G for a named Clifford gate acting on the given qubits."""
    name = gate.upper()
    if name not in _GATE_TABLES:
        raise ValueError(f"unknown gate {gate!r}")
    k = gate_arity(name)
    if len(qubits) != k:
        raise ValueError(f"gate {name} takes {k} qubit(s), got {len(qubits)}")
    for q in qubits:
        if not 0 <= q < p.n:
            raise ValueError(f"qubit index {q} out of range for n={p.n}")
    if k == 2 and qubits[0] == qubits[1]:
        raise ValueError("two-qubit gate needs distinct qubits")
    nx_t, nz_t, sg_t = _GATE_TABLES[name]
    idx = 0
    for i, q in enumerate(qubits):
        idx |= ((p.x_mask >> q) & 1) << (2 * i)
        idx |= ((p.z_mask >> q) & 1) << (2 * i + 1)
    nx = int(nx_t[idx])
    nz = int(nz_t[idx])
    x = p.x_mask
    z = p.z_mask
    for i, q in enumerate(qubits):
        bit = 1 << q
        x = (x & ~bit) | (((nx >> i) & 1) << q)
        z = (z & ~bit) | (((nz >> i) & 1) << q)
    return PauliString(p.n, x, z, p.sign * int(sg_t[idx]))


def conjugate_by_quarter_rotation(
    q: PauliString, axis: PauliString, k: int
) -> PauliString:
    """exp(i phi P/2) Q exp(-i phi P/2) at phi = k*pi/2 for axis P.

    Commuting axes leave Q alone. For anticommuting axes the image is Q,
    the Hermitian form of iPQ, -Q, or that of -iPQ as k runs 0..3.
    """
    _check_same_n(q, axis)
    if axis.is_identity:
        raise ValueError("identity rotation axis")
    k = k % 4
    if k == 0 or commutes(axis, q):
        return q
    if k == 2:
        return q.with_sign(-q.sign)
    pp = multiply(axis, q)
    e = (pp.i_power + k) % 4  # i^k from the rotation times the product phase
    assert e % 2 == 0, "anticommuting quarter turn must stay Hermitian"
    sign = pp.pauli.sign * (1 if e == 0 else -1)
    return pp.pauli.with_sign(sign)
