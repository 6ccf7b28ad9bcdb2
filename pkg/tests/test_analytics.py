"""Closed-form reference values, pinned as exact rationals."""

from fractions import Fraction

import pytest

from cprlab.analytics import (
    ReferenceValue,
    bp_threshold_check,
    clifford_ratio,
    continuous_pair_leading,
    random_pauli_pair_moment,
    random_pauli_second_moment,
    stabilizer_pair_moment,
    two_design_variance,
    wg4_identity,
)
from cprlab.pauli import pauli_from_label
from cprlab.stabilizer import enumerate_stabilizer_states, stabilizer_expectation


def test_pinned_rationals():
    assert random_pauli_second_moment(8).exact == Fraction(1, 256)
    assert random_pauli_pair_moment(6).exact == Fraction(1, 4096)
    assert clifford_ratio(4).exact == Fraction(1, 17)
    assert clifford_ratio(2).exact == Fraction(1, 5)
    assert stabilizer_pair_moment(2, commuting=True).exact == Fraction(1, 15)
    assert stabilizer_pair_moment(4, commuting=True).exact == Fraction(1, 153)
    assert stabilizer_pair_moment(3, commuting=False).exact == 0
    assert wg4_identity(2).exact == Fraction(134, 20160)
    assert continuous_pair_leading(2).exact == Fraction(2144, 20160)
    assert two_design_variance(2, 1, 1, 4).exact == Fraction(1, 5)


def test_float_matches_exact():
    for rv in (
        random_pauli_second_moment(5),
        clifford_ratio(3),
        stabilizer_pair_moment(5, commuting=True),
        wg4_identity(6),
        continuous_pair_leading(4),
        two_design_variance(3, 1, 1, 8),
    ):
        assert rv.exact is not None
        assert float(rv) == rv.value
        assert abs(rv.value - float(rv.exact)) < 1e-15
        assert rv.validity


def test_stabilizer_pair_factorization():
    # the commuting pair moment is the single moment times the conditional
    # second-draw factor
    for n in (2, 3, 4, 6):
        single = clifford_ratio(n).exact
        pair = stabilizer_pair_moment(n, commuting=True).exact
        cond = Fraction(2**n - 2, 2 ** (2 * n - 1) - 2)
        assert pair == single * cond


def test_two_design_variance_general_arguments():
    # mixed state: tr rho^2 < 1 lowers the variance
    pure = two_design_variance(3, 1, 1, 8).exact
    mixed = two_design_variance(3, 1, Fraction(1, 2), 8).exact
    assert mixed > pure  # smaller purity subtracts less
    with pytest.raises(ValueError):
        two_design_variance(3, 1, 2, 8)
    with pytest.raises(ValueError):
        two_design_variance(3, 1, 0, 8)
    with pytest.raises(ValueError):
        two_design_variance(0, 1, 1, 2)


def test_wg4_identity_closed_form():
    # (N^4 - 8 N^2 + 6) / (N^2 (N^2-1) (N^2-4) (N^2-9)) with N = 2^n
    for n in (2, 3, 5, 8):
        N = 2**n
        want = Fraction(N**4 - 8 * N**2 + 6, N**2 * (N**2 - 1) * (N**2 - 4) * (N**2 - 9))
        assert wg4_identity(n).exact == want
    with pytest.raises(ValueError):
        wg4_identity(1)  # N = 2 zeroes the (N^2 - 4) factor


def test_wg4_scaled_limit_from_above():
    # 16^n wg4(n) approaches 1 from above, monotonically
    prev = None
    for n in range(2, 11):
        scaled = Fraction(16**n) * wg4_identity(n).exact
        assert scaled > 1
        if prev is not None:
            assert scaled < prev
        prev = scaled
    assert abs(float(Fraction(16**8) * wg4_identity(8).exact) - 1.0) < 0.01


def test_continuous_pair_leading_is_4n_scaled():
    for n in (2, 3, 6):
        assert continuous_pair_leading(n).exact == Fraction(4**n) * wg4_identity(n).exact


def test_against_enumeration():
    # the 2-design variance for a pure state and a single Pauli equals the
    # stabilizer-orbit average of <P>^2, exactly
    states = enumerate_stabilizer_states(2)
    p = pauli_from_label("+XY")
    total = Fraction(sum(stabilizer_expectation(s, p) ** 2 for s in states), len(states))
    assert total == two_design_variance(2, 1, 1, 4).exact
    assert total == clifford_ratio(2).exact


def test_reference_value_consistency_guard():
    with pytest.raises(ValueError):
        ReferenceValue(0.5, Fraction(1, 3), "n >= 1")


def test_domain_guards():
    with pytest.raises(ValueError):
        stabilizer_pair_moment(1, commuting=True)
    with pytest.raises(ValueError):
        random_pauli_second_moment(0)
    with pytest.raises(ValueError):
        clifford_ratio(0)


def test_bp_threshold_check():
    assert bp_threshold_check(0.2, 4) == "consistent-with-bp"  # 0.2 < 4/16
    assert bp_threshold_check(0.5, 4) == "not-consistent"
    assert bp_threshold_check(0.26, 4, stderr=0.02) == "inconclusive"
    assert bp_threshold_check(0.01, 8, stderr=0.001) == "consistent-with-bp"
    with pytest.raises(ValueError):
        bp_threshold_check(0.1, 4, stderr=-1.0)
    with pytest.raises(ValueError):
        bp_threshold_check(0.1, 0)
