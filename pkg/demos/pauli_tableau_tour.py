"""A quick tour of the exact machinery: signed Pauli strings, Clifford
tableaux, and the stabilizer-state samplers.

Everything printed here is computed with bit masks and GF(2) algebra;
no matrix is ever built. Run it with:

    python3 demos/pauli_tableau_tour.py
"""

import numpy as np

from cprlab import (
    commutes,
    conjugate_pauli,
    enumerate_stabilizer_states,
    inverse,
    compose,
    multiply,
    pauli_from_label,
    random_clifford,
    stabilizer_expectation,
    tableau_from_gates,
    tableau_to_text,
)


def section(title):
    print()
    print(f"== {title} ==")


section("Pauli multiplication carries phases")
x = pauli_from_label("+X")
z = pauli_from_label("+Z")
for a, b in [(x, z), (z, x)]:
    prod = multiply(a, b)
    print(f"  {a.label()} * {b.label()} = i^{prod.i_power} {prod.pauli.label()}")
print("  X and Z anticommute:", not commutes(x, z))

xx = pauli_from_label("+XX")
zz = pauli_from_label("+ZZ")
print("  XX and ZZ commute:", commutes(xx, zz), "(two sign flips cancel)")

section("Conjugation by a Clifford circuit, no matrices")
# H on qubit 0 then CX(0,1): the textbook Bell-pair preparation
bell = tableau_from_gates(2, [("H", 0), ("CX", 0, 1)])
print(tableau_to_text(bell), end="")
for label in ("+ZI", "+IZ", "+XI"):
    img = conjugate_pauli(bell, pauli_from_label(label))
    print(f"  U {label} U^dag = {img.label()}")

section("Tableau composition and inverses")
g = random_clifford(3, np.random.default_rng(7))
gi = inverse(g)
round_trip = compose(gi, g)
print("  g^-1 g fixes every Pauli:", all(
    conjugate_pauli(round_trip, p).label() == p.label()
    for p in map(pauli_from_label, ["+XII", "+IZI", "+IIY"])
))

section("Uniform sampling visits the whole orbit")
rng = np.random.default_rng(20240817)
fixed = pauli_from_label("+XI")
counts = {}
draws = 6000
for _ in range(draws):
    img = conjugate_pauli(random_clifford(2, rng), fixed)
    counts[(img.x_mask, img.z_mask)] = counts.get((img.x_mask, img.z_mask), 0) + 1
print(f"  orbit of +XI under random 2-qubit Cliffords: {len(counts)} distinct")
print(f"  expected 15 non-identity Paulis, {draws/15:.0f} hits each; "
      f"observed min {min(counts.values())}, max {max(counts.values())}")

section("All 60 two-qubit stabilizer states")
states = enumerate_stabilizer_states(2)
print(f"  enumerated {len(states)} states")
vals = sorted({stabilizer_expectation(s, xx) for s in states})
print(f"  <XX> over the family takes values {vals}")
nonzero = sum(1 for s in states if stabilizer_expectation(s, xx) != 0)
print(f"  <XX> is non-zero on {nonzero}/60 states, "
      f"so the average of <XX>^2 is {nonzero}/60 = 1/5")
