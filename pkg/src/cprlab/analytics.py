"""Closed-form reference scalars, exact where the formulas are exact.

Everything here is a pure function of small integers, kept in one place so
estimator tests compare against a single authority. Values carry both an
exact rational and its float rendering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "ReferenceValue",
    "random_pauli_second_moment",
    "random_pauli_pair_moment",
    "clifford_ratio",
    "stabilizer_pair_moment",
    "two_design_variance",
    "wg4_identity",
    "continuous_pair_leading",
    "bp_threshold_check",
]


@dataclass(frozen=True, slots=True)
class ReferenceValue:
    """A reference scalar with its exact rational form when one exists."""

    value: float
    exact: Fraction | None
    validity: str

    def __post_init__(self):
        if self.exact is not None:
            scale = max(1.0, abs(self.value))
            if abs(float(self.exact) - self.value) > 1e-15 * scale:
                raise ValueError("float rendering disagrees with the exact value")

    def __float__(self) -> float:
        return self.value


def _from_fraction(f: Fraction, validity: str) -> ReferenceValue:
    return ReferenceValue(float(f), f, validity)


def _require(n: int, least: int, what: str) -> None:
    if n < least:
        raise ValueError(f"{what} needs n >= {least}, got {n}")


def random_pauli_second_moment(n: int) -> ReferenceValue:
    """Average of (Tr rho P)^2 over all 4^n Paulis, any stabilizer rho: 2^-n."""
    _require(n, 1, "random_pauli_second_moment")
    return _from_fraction(Fraction(1, 2**n), "n >= 1")


def random_pauli_pair_moment(n: int) -> ReferenceValue:
    """Product moment for two independent random Paulis: 4^-n."""
    _require(n, 1, "random_pauli_pair_moment")
    return _from_fraction(Fraction(1, 4**n), "n >= 1")


def clifford_ratio(n: int) -> ReferenceValue:
    """(2^n - 1)/(4^n - 1): the chance a random stabilizer group hits a
    fixed non-identity Pauli up to sign."""
    _require(n, 1, "clifford_ratio")
    return _from_fraction(Fraction(2**n - 1, 4**n - 1), "n >= 1")


def stabilizer_pair_moment(n: int, commuting: bool) -> ReferenceValue:
    """Average of (Tr rho P1)^2 (Tr rho P2)^2 over random stabilizer rho
    for fixed distinct non-identity P1, P2.

    Anticommuting pairs average to exactly zero: no stabilizer group
    contains two anticommuting elements.
    """
    _require(n, 2, "stabilizer_pair_moment")
    if not commuting:
        return ReferenceValue(0.0, Fraction(0), "n >= 2")
    f = Fraction(2**n - 1, 4**n - 1) * Fraction(2**n - 2, 2 ** (2 * n - 1) - 2)
    return _from_fraction(f, "n >= 2")


def two_design_variance(n: int, tr_rho: float, tr_rho2: float, tr_O2: float) -> ReferenceValue:
    """Loss variance under a unitary 2-design:
    Tr O^2 ((Tr rho)^2/(4^n - 1) - Tr rho^2/(2^n (4^n - 1))).

    For a pure state and a single Pauli observable this is 1/(2^n + 1).
    """
    _require(n, 1, "two_design_variance")
    if not 0 < tr_rho2 <= tr_rho:
        raise ValueError("need 0 < tr_rho2 <= tr_rho")
    d2 = Fraction(4**n - 1)
    f = Fraction(tr_O2) * (
        Fraction(tr_rho) ** 2 / d2 - Fraction(tr_rho2) / (Fraction(2**n) * d2)
    )
    return _from_fraction(f, "n >= 1")


def wg4_identity(n: int) -> ReferenceValue:
    """Weingarten coefficient of the identity permutation at k=2,
    (N^4 - 8N^2 + 6) / (N^2 (N^2-1)(N^2-4)(N^2-9)) with N = 2^n.

    N = 2 sits on a pole, so n = 1 is rejected.
    """
    _require(n, 2, "wg4_identity")
    N = 2**n
    f = Fraction(N**4 - 8 * N**2 + 6, N**2 * (N**2 - 1) * (N**2 - 4) * (N**2 - 9))
    return _from_fraction(f, "n >= 2")


def continuous_pair_leading(n: int) -> ReferenceValue:
    """Leading term of the continuous pair correlator for deep circuits:
    Tr P1^2 Tr P2^2 (Tr rho^2)^2 Wg(id) = 4^n * wg4_identity(n) for a
    pure state and Pauli observables (Tr P^2 = 2^n each).

    Approaches 4^-n from above as n grows; at n = 2 the finite-size
    excess is still a factor of about 1.7.
    """
    _require(n, 2, "continuous_pair_leading")
    f = Fraction(4**n) * wg4_identity(n).exact
    return _from_fraction(f, "n >= 2")


def bp_threshold_check(
    variance_estimate: float,
    n: int,
    stderr: float = 0.0,
    kappa: float = 4.0,
) -> str:
    """Classify a variance estimate against the kappa * 2^-n threshold.

    Returns one of "consistent-with-bp", "not-consistent", or
    "inconclusive" when the estimate sits within one stderr of the line.
    """
    _require(n, 1, "bp_threshold_check")
    if stderr < 0:
        raise ValueError("stderr must be non-negative")
    threshold = kappa * 2.0 ** (-n)
    if abs(variance_estimate - threshold) <= stderr:
        return "inconclusive"
    return "consistent-with-bp" if variance_estimate <= threshold else "not-consistent"
