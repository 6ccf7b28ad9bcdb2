"""Tableau algebra and stabilizer-state machinery against dense oracles."""

import numpy as np
import pytest

from cprlab.pauli import PauliString, commutes, pauli_from_label, random_pauli
from cprlab.stabilizer import (
    CliffordTableau,
    StabilizerState,
    apply_gate_forward,
    compose,
    conjugate_pauli,
    enumerate_stabilizer_states,
    identity_tableau,
    inverse,
    random_clifford,
    random_stabilizer_state,
    stabilizer_expectation,
    tableau_from_gates,
    tableau_to_text,
)

from oracles import GATES, embed, pauli_matrix, stabilizer_vector

GATE_POOL = (
    ("H", 1), ("S", 1), ("SDG", 1), ("X", 1), ("Y", 1), ("Z", 1),
    ("CX", 2), ("CZ", 2), ("SWAP", 2),
)


def _random_gates(n, rng, count=8):
    gates = []
    for _ in range(count):
        name, arity = GATE_POOL[int(rng.integers(0, len(GATE_POOL)))]
        if arity > n:
            continue
        qs = tuple(int(q) for q in rng.permutation(n)[:arity])
        gates.append((name, *qs))
    return gates


def _gates_unitary(n, gates):
    u = np.eye(1 << n, dtype=complex)
    for name, *qs in gates:
        u = embed(GATES[name], tuple(qs), n) @ u
    return u


def _single(n, q, ch):
    return pauli_from_label("+" + "I" * q + ch + "I" * (n - q - 1))


def test_tableau_images_are_forward_conjugates(rng):
    for _ in range(25):
        n = int(rng.integers(1, 4))
        gates = _random_gates(n, rng)
        t = tableau_from_gates(n, gates)
        u = _gates_unitary(n, gates)
        for q in range(n):
            for images, ch in ((t.x_images, "X"), (t.z_images, "Z")):
                dense = u @ pauli_matrix(_single(n, q, ch).label()) @ u.conj().T
                assert np.allclose(dense, pauli_matrix(images[q].label()), atol=1e-12)


def test_conjugate_pauli_matches_dense(rng):
    for _ in range(25):
        n = int(rng.integers(1, 4))
        gates = _random_gates(n, rng)
        t = tableau_from_gates(n, gates)
        u = _gates_unitary(n, gates)
        p = random_pauli(n, rng)
        if rng.integers(0, 2):
            p = PauliString(n, p.x_mask, p.z_mask, -1)
        img = conjugate_pauli(t, p)
        dense = u @ pauli_matrix(p.label()) @ u.conj().T
        assert np.allclose(dense, pauli_matrix(img.label()), atol=1e-12)


def test_apply_gate_forward_matches_dense(rng):
    for name, arity in GATE_POOL:
        n = arity + 1
        u = embed(GATES[name], tuple(range(arity)), n)
        for _ in range(10):
            p = random_pauli(n, rng)
            out = apply_gate_forward(p, name, *range(arity))
            dense = u @ pauli_matrix(p.label()) @ u.conj().T
            assert np.allclose(dense, pauli_matrix(out.label()), atol=1e-12)


def test_compose_order(rng):
    for _ in range(10):
        n = int(rng.integers(1, 4))
        g1 = _random_gates(n, rng, count=5)
        g2 = _random_gates(n, rng, count=5)
        t1 = tableau_from_gates(n, g1)
        t2 = tableau_from_gates(n, g2)
        # compose(outer, inner) is the circuit that runs inner first
        assert compose(t2, t1) == tableau_from_gates(n, g1 + g2)


def test_inverse_both_sides(rng):
    for _ in range(15):
        n = int(rng.integers(1, 5))
        t = random_clifford(n, rng)
        ident = identity_tableau(n)
        assert compose(inverse(t), t) == ident
        assert compose(t, inverse(t)) == ident


def test_random_clifford_is_valid_tableau(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        t = random_clifford(n, rng)
        for i in range(n):
            assert not commutes(t.x_images[i], t.z_images[i])
            for j in range(n):
                if j != i:
                    assert commutes(t.x_images[i], t.z_images[j])
                    assert commutes(t.x_images[i], t.x_images[j])
                    assert commutes(t.z_images[i], t.z_images[j])


def test_random_clifford_uniform_on_single_qubit(rng):
    # the 1-qubit Clifford group has exactly 24 distinct tableaux
    counts = {}
    draws = 4800
    for _ in range(draws):
        t = random_clifford(1, rng)
        key = (t.x_images[0], t.z_images[0])
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 24
    expected = draws / 24
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # 99.9% quantile of chi2 with 23 dof
    assert chi2 < 49.73


def test_random_clifford_seeded_reproducible():
    a = random_clifford(3, np.random.default_rng(7))
    b = random_clifford(3, np.random.default_rng(7))
    assert a == b


def test_enumeration_counts():
    assert len(enumerate_stabilizer_states(1)) == 6
    assert len(enumerate_stabilizer_states(2)) == 60
    assert len(enumerate_stabilizer_states(3)) == 1080


def test_enumeration_states_are_distinct_and_valid():
    states = enumerate_stabilizer_states(2)
    keys = {s.key() for s in states}
    assert len(keys) == 60
    vecs = [stabilizer_vector(s) for s in states]
    for i, v in enumerate(vecs):
        for w in vecs[i + 1 :]:
            assert abs(np.vdot(v, w)) < 1 - 1e-9  # no duplicated physical state


def test_stabilizer_expectation_matches_dense_n2(rng):
    labels = [
        s + a + b for s in "+-" for a in "IXYZ" for b in "IXYZ"
    ]
    for state in enumerate_stabilizer_states(2):
        vec = stabilizer_vector(state)
        for label in labels:
            p = pauli_from_label(label)
            dense = np.vdot(vec, pauli_matrix(label) @ vec).real
            assert stabilizer_expectation(state, p) == int(round(dense))


def test_stabilizer_expectation_matches_dense_n3(rng):
    for _ in range(25):
        state = random_stabilizer_state(3, rng)
        vec = stabilizer_vector(state)
        for _ in range(12):
            p = random_pauli(3, rng)
            dense = np.vdot(vec, pauli_matrix(p.label()) @ vec).real
            assert stabilizer_expectation(state, p) == int(round(dense))


def test_random_stabilizer_state_covers_orbit(rng):
    seen = {random_stabilizer_state(2, rng).key() for _ in range(3000)}
    assert len(seen) == 60


def test_state_requires_commuting_independent_generators():
    with pytest.raises(ValueError):
        StabilizerState(2, (pauli_from_label("+XI"), pauli_from_label("+ZI")))
    with pytest.raises(ValueError):
        StabilizerState(2, (pauli_from_label("+ZI"), pauli_from_label("+ZI")))
    with pytest.raises(ValueError):
        StabilizerState(2, (pauli_from_label("+ZI"),))


def test_reduced_form_is_canonical(rng):
    # two generator sets for the same group reduce identically
    for _ in range(20):
        s = random_stabilizer_state(3, rng)
        g = list(s.generators)
        from cprlab.stabilizer import _signed_product

        g[0] = _signed_product(g[0], g[1])
        alt = StabilizerState(3, tuple(g))
        assert alt.key() == s.key()
        assert alt.reduced == s.reduced


def test_tableau_text_golden():
    t = tableau_from_gates(2, [("H", 0), ("CX", 0, 1)])
    assert tableau_to_text(t) == "+ZI\n+IX\n+XX\n+ZZ\n"


def test_zero_state_expectations():
    zero = StabilizerState(2, (pauli_from_label("+ZI"), pauli_from_label("+IZ")))
    assert stabilizer_expectation(zero, pauli_from_label("+ZZ")) == 1
    assert stabilizer_expectation(zero, pauli_from_label("-ZI")) == -1
    assert stabilizer_expectation(zero, pauli_from_label("+XX")) == 0
