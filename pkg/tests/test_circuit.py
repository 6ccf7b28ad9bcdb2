"""Circuit containers, the HEA builder, and the Clifford-point fast path."""

import numpy as np
import pytest

from cprlab.circuit import (
    CliffordGate,
    CliffordPoint,
    CprCircuit,
    PauliRotation,
    circuit_from_text,
    circuit_to_text,
    clifford_loss_matrix,
    clifford_point_to_angles,
    eval_at_clifford_point,
    hea_circuit,
    nonzero_term_count,
    random_clifford_point,
    validate,
)
from cprlab.pauli import PauliString, pauli_from_label, random_pauli, two_body_nn_paulis
from cprlab.stabilizer import StabilizerState, random_stabilizer_state
from cprlab.statevector import prepare_stabilizer

from oracles import circuit_unitary, dense_expectation, pauli_matrix, zero_vector


def _zero_state(n):
    gens = tuple(
        pauli_from_label("+" + "I" * q + "Z" + "I" * (n - q - 1)) for q in range(n)
    )
    return StabilizerState(n, gens)


def _random_circuit(rng, max_n=3, max_params=5):
    n = int(rng.integers(1, max_n + 1))
    num_params = int(rng.integers(1, max_params + 1))
    names = ["H", "S", "SDG", "X", "Y", "Z", "CX", "CZ", "SWAP"]
    instructions = []
    for _ in range(int(rng.integers(2, 8))):
        name = names[int(rng.integers(0, len(names)))]
        arity = 2 if name in ("CX", "CZ", "SWAP") else 1
        if arity > n:
            continue
        qs = tuple(int(q) for q in rng.permutation(n)[:arity])
        instructions.append(CliffordGate(name, qs))
    for k in range(num_params):
        axis = random_pauli(n, rng, include_identity=False)
        pos = int(rng.integers(0, len(instructions) + 1))
        instructions.insert(pos, PauliRotation(axis, k))
    return CprCircuit(n, tuple(instructions), num_params)


# ---------------------------------------------------------------------------
# validation


def test_validate_accepts_hea(rng):
    validate(hea_circuit(3, 4, rng))


def test_validate_rejects_bad_circuits():
    x = pauli_from_label("+X")
    xx = pauli_from_label("+XX")
    ident = PauliString(2, 0, 0, 1)
    with pytest.raises(ValueError):
        validate(CprCircuit(2, (PauliRotation(x, 0),), 1))  # axis width
    with pytest.raises(ValueError):
        validate(CprCircuit(2, (PauliRotation(ident, 0),), 1))  # identity axis
    with pytest.raises(ValueError):
        validate(CprCircuit(2, (PauliRotation(xx, 1),), 1))  # index out of range
    with pytest.raises(ValueError):
        validate(
            CprCircuit(2, (PauliRotation(xx, 0), PauliRotation(xx, 0)), 2)
        )  # duplicate index, missing index 1
    with pytest.raises(ValueError):
        validate(CprCircuit(2, (CliffordGate("CX", (0,)), PauliRotation(xx, 0)), 1))
    with pytest.raises(ValueError):
        validate(CprCircuit(2, (CliffordGate("CX", (1, 1)), PauliRotation(xx, 0)), 1))
    with pytest.raises(ValueError):
        validate(CprCircuit(2, (CliffordGate("H", (5,)), PauliRotation(xx, 0)), 1))


# ---------------------------------------------------------------------------
# the HEA builder


def test_hea_shape_and_indexing(rng):
    n, layers = 4, 3
    c = hea_circuit(n, layers, rng)
    validate(c)
    assert c.n == n and c.num_params == n * layers
    per_layer = n + (n - 1)
    assert len(c.instructions) == layers * per_layer
    for layer in range(layers):
        block = c.instructions[layer * per_layer : (layer + 1) * per_layer]
        for q in range(n):
            instr = block[q]
            assert isinstance(instr, PauliRotation)
            assert instr.param_index == layer * n + q
            body = instr.axis.label()[1:]
            assert body[q] in "XYZ"
            assert all(ch == "I" for j, ch in enumerate(body) if j != q)
        for q, instr in enumerate(block[n:]):
            assert instr == CliffordGate("CZ", (q, q + 1))


def test_hea_entangler_and_hadamard_options(rng):
    c = hea_circuit(2, 1, rng, entangler="cx", initial_hadamard=True)
    assert c.instructions[0] == CliffordGate("H", (0,))
    assert c.instructions[1] == CliffordGate("H", (1,))
    assert c.instructions[-1] == CliffordGate("CX", (0, 1))
    with pytest.raises(ValueError):
        hea_circuit(2, 1, rng, entangler="cnotz")
    with pytest.raises(ValueError):
        hea_circuit(1, 1, rng)
    with pytest.raises(ValueError):
        hea_circuit(2, 0, rng)


def test_hea_layer_prefix_sharing():
    # one axis draw per layer: a shorter ansatz is a prefix of a longer one
    a = hea_circuit(3, 2, np.random.default_rng(11))
    b = hea_circuit(3, 4, np.random.default_rng(11))
    assert b.instructions[: len(a.instructions)] == a.instructions


# ---------------------------------------------------------------------------
# text round trip


def test_circuit_text_golden(rng):
    c = CprCircuit(
        2,
        (
            PauliRotation(pauli_from_label("+XI"), 0),
            CliffordGate("CZ", (0, 1)),
            PauliRotation(pauli_from_label("-YZ"), 1),
        ),
        2,
    )
    text = circuit_to_text(c)
    assert text == "CPR n=2 params=2\nROT +XI 0\nCZ 0 1\nROT -YZ 1\n"
    assert circuit_from_text(text) == c


def test_circuit_text_roundtrip_random(rng):
    for _ in range(25):
        c = _random_circuit(rng)
        assert circuit_from_text(circuit_to_text(c)) == c


def test_circuit_from_text_rejects_garbage():
    for bad in ("", "CPR n=2", "CPR n=2 params=1\nROT +X 0\nBOGUS 1\n"):
        with pytest.raises(ValueError):
            circuit_from_text(bad)


# ---------------------------------------------------------------------------
# Clifford points


def test_point_to_angles():
    pt = CliffordPoint((0, 1, 2, 3))
    angles = clifford_point_to_angles(pt).angles
    assert np.allclose(angles, [0, np.pi / 2, np.pi, 3 * np.pi / 2])


def test_random_clifford_point_range(rng):
    c = hea_circuit(2, 3, rng)
    pt = random_clifford_point(c, np.random.default_rng(3))
    assert len(pt.quarters) == c.num_params
    assert all(0 <= q <= 3 for q in pt.quarters)
    again = random_clifford_point(c, np.random.default_rng(3))
    assert pt == again


def test_eval_at_clifford_point_matches_dense(rng):
    for _ in range(30):
        c = _random_circuit(rng)
        state = _zero_state(c.n)
        pt = random_clifford_point(c, rng)
        obs = random_pauli(c.n, rng, include_identity=False)
        got = eval_at_clifford_point(c, pt, obs, state)
        assert got in (-1, 0, 1)
        u = circuit_unitary(c, clifford_point_to_angles(pt).angles)
        vec = u @ zero_vector(c.n)
        want = dense_expectation(vec, pauli_matrix(obs.label()))
        assert abs(got - want) < 1e-9


def test_eval_with_nontrivial_initial_state(rng):
    from oracles import stabilizer_vector

    for _ in range(15):
        c = _random_circuit(rng, max_n=3)
        state = random_stabilizer_state(c.n, rng)
        pt = random_clifford_point(c, rng)
        obs = random_pauli(c.n, rng, include_identity=False)
        got = eval_at_clifford_point(c, pt, obs, state)
        u = circuit_unitary(c, clifford_point_to_angles(pt).angles)
        vec = u @ stabilizer_vector(state)
        want = dense_expectation(vec, pauli_matrix(obs.label()))
        assert abs(got - want) < 1e-9


def test_loss_matrix_matches_scalar_eval(rng):
    for _ in range(8):
        c = _random_circuit(rng)
        state = random_stabilizer_state(c.n, rng)
        observables = [
            random_pauli(c.n, rng, include_identity=False) for _ in range(4)
        ]
        quarters = rng.integers(0, 4, size=(20, c.num_params))
        mat = clifford_loss_matrix(c, quarters, observables, state)
        assert mat.dtype == np.int8
        for i in range(quarters.shape[0]):
            pt = CliffordPoint(tuple(int(q) for q in quarters[i]))
            for j, obs in enumerate(observables):
                assert mat[i, j] == eval_at_clifford_point(c, pt, obs, state)


def test_loss_matrix_shape_guard(rng):
    c = hea_circuit(2, 1, rng)
    state = _zero_state(2)
    with pytest.raises(ValueError):
        clifford_loss_matrix(c, np.zeros((3,), dtype=np.int64), [_zero_state(2).generators[0]], state)


def test_nonzero_term_count(rng):
    c = hea_circuit(3, 2, rng)
    state = _zero_state(3)
    observables = two_body_nn_paulis(3)
    pt = random_clifford_point(c, rng)
    direct = sum(
        1 for p in observables if eval_at_clifford_point(c, pt, p, state) != 0
    )
    assert nonzero_term_count(c, pt, observables, state) == direct


def test_wide_register_guard():
    n = 70
    axis = PauliString(n, 1, 0, 1)
    c = CprCircuit(n, (PauliRotation(axis, 0),), 1)
    gens = tuple(PauliString(n, 0, 1 << q, 1) for q in range(n))
    state = StabilizerState(n, gens)
    with pytest.raises(ValueError):
        clifford_loss_matrix(c, np.zeros((1, 1), dtype=np.int64), [axis], state)
