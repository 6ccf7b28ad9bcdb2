"""Monte Carlo and exact-quadrature estimators for loss statistics.

Sampling layout: samples are split into fixed chunks of 1024 and every
chunk gets its own counter-based bit stream (Philox keyed by the run seed,
counter advanced by 2^192 per chunk). Workers may compute chunks in any
order or in parallel; results are reassembled by chunk index, so the
output is bit-identical for any thread count. The Estimate a run returns
is therefore a pure function of (seed, samples, config).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from hashlib import sha256

import numpy as np

from .circuit import (
    CliffordPoint,
    CprCircuit,
    clifford_loss_matrix,
    eval_at_clifford_point,
    nonzero_term_count,
    random_clifford_point,
)
from .circuit import _stabilizer_expectations_vec as _stab_expect_vec
from .pauli import PauliString, pauli_from_label, random_pauli, two_body_nn_paulis
from .stabilizer import (
    CliffordTableau,
    StabilizerState,
    conjugate_pauli,
    enumerate_stabilizer_states,
    random_clifford,
    random_stabilizer_state,
    stabilizer_expectation,
)
from .statevector import ObservableSum, loss_matrix, prepare_stabilizer, zero_state

__all__ = [
    "CHUNK",
    "Estimate",
    "ExperimentConfig",
    "derive_seed",
    "estimate_from_stream",
    "loss_samples_uniform",
    "loss_samples_clifford",
    "variance_uniform",
    "variance_clifford",
    "discrete_correlator",
    "continuous_correlator",
    "exact_grid_moment",
    "ensemble_second_moment",
    "ensemble_pair_moment",
    "warmstart_search",
]

CHUNK = 1024

_ENSEMBLE_MODELS = ("random_pauli", "random_stabilizer", "random_clifford_prefix")


@dataclass(frozen=True, slots=True)
class Estimate:
    """Summary statistics of one sampled value stream.

    mean/variance/stderr describe the stream itself; second_moment and its
    stderr come along because several quantities of interest are means of
    squares. constant flags a stream with zero spread.
    """

    mean: float
    second_moment: float
    variance: float
    stderr: float
    samples: int
    seed: int
    second_moment_stderr: float = 0.0
    constant: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("an estimate needs at least one sample")
        if self.variance < -1e-12:
            raise ValueError("negative variance beyond rounding slack")


def derive_seed(master: int, *tags) -> int:
    """Stable 63-bit child seed for a named sub-stream of a master seed."""
    entropy = [int(master) & (2**63 - 1)]
    for tag in tags:
        digest = sha256(str(tag).encode()).digest()
        entropy.append(int.from_bytes(digest[:8], "little"))
    seq = np.random.SeedSequence(entropy)
    return int(seq.generate_state(1, np.uint64)[0] & (2**63 - 1))


def _resolve_seed(rng) -> int:
    if rng is None:
        rng = np.random.default_rng()
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63))
    return int(rng) & (2**63 - 1)


def _chunk_generator(seed: int, index: int) -> np.random.Generator:
    # 2^192 draw separation between chunks; no stream can run into the next
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))


def _chunk_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _map_chunks(fn, samples: int, threads: int):
    """Evaluate fn(chunk_index, count) for every chunk, in index order."""
    sizes = _chunk_sizes(samples)
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(len(sizes)), sizes))
    return [fn(i, count) for i, count in enumerate(sizes)]


def _as_amplitudes(init, n: int) -> np.ndarray:
    if init is None:
        return zero_state(n)
    if isinstance(init, (StabilizerState, CliffordTableau)):
        return prepare_stabilizer(init)
    amps = np.asarray(init, dtype=complex)
    if amps.shape != (1 << n,):
        raise ValueError("initial amplitudes have the wrong length")
    return amps


def _as_stabilizer(init, n: int) -> StabilizerState:
    if init is None:
        return StabilizerState.zero(n)
    if isinstance(init, StabilizerState):
        if init.n != n:
            raise ValueError("initial state qubit count mismatch")
        return init
    if isinstance(init, CliffordTableau):
        return StabilizerState(init.n, init.z_images)
    raise TypeError("discrete sampling needs a stabilizer initial state")


def estimate_from_stream(values: np.ndarray, seed: int) -> Estimate:
    """Summarize an already-materialized value stream.

    Rebuilding an estimator's Estimate from its stream (same values, same
    seed tag) gives a bit-identical result, which is what lets the runner
    share one sampled loss matrix across many observables.
    """
    values = np.asarray(values, dtype=float).ravel()
    n = values.size
    if n == 0:
        raise ValueError("zero samples")
    if float(values.min()) == float(values.max()):
        v = float(values[0])
        return Estimate(v, v * v, 0.0, 0.0, n, seed, 0.0, True)
    mean = float(values.mean())
    sq = values * values
    m2 = float(sq.mean())
    var = max(m2 - mean * mean, 0.0)
    m4 = float((sq * sq).mean())
    m2_var = max(m4 - m2 * m2, 0.0)
    return Estimate(
        mean=mean,
        second_moment=m2,
        variance=var,
        stderr=math.sqrt(var / n),
        samples=n,
        seed=seed,
        second_moment_stderr=math.sqrt(m2_var / n),
        constant=False,
    )


def _exact_estimate(values: np.ndarray, seed: int) -> Estimate:
    # population moments of a fully enumerated ensemble: no sampling error
    est = estimate_from_stream(values, seed)
    return replace(est, stderr=0.0, second_moment_stderr=0.0)


# ---------------------------------------------------------------------------
# Shared sample streams. All observables see the same parameter points.


def loss_samples_uniform(
    c: CprCircuit, observables, init, samples: int, seed: int, threads: int = 1
) -> np.ndarray:
    """(samples, len(observables)) losses at uniform angles in [0, 2pi)."""
    if samples < 1:
        raise ValueError("zero samples")
    amps = _as_amplitudes(init, c.n)

    def run(index: int, count: int) -> np.ndarray:
        rng = _chunk_generator(seed, index)
        angles = rng.uniform(0.0, 2.0 * math.pi, size=(count, c.num_params))
        return loss_matrix(c, angles, observables, amps)

    return np.concatenate(_map_chunks(run, samples, threads), axis=0)


def loss_samples_clifford(
    c: CprCircuit, observables, init, samples: int, seed: int, threads: int = 1
) -> np.ndarray:
    """(samples, len(observables)) exact losses at uniform Clifford points."""
    if samples < 1:
        raise ValueError("zero samples")
    state = _as_stabilizer(init, c.n)

    def run(index: int, count: int) -> np.ndarray:
        rng = _chunk_generator(seed, index)
        quarters = rng.integers(0, 4, size=(count, c.num_params))
        return clifford_loss_matrix(c, quarters, observables, state)

    return np.concatenate(_map_chunks(run, samples, threads), axis=0)


def _all_quarter_points(num_params: int, batch: int = 4096):
    """Mixed-radix sweep of the whole 4^num_params grid, in index order."""
    total = 4**num_params
    for start in range(0, total, batch):
        ids = np.arange(start, min(start + batch, total), dtype=np.int64)
        quarters = np.zeros((ids.size, num_params), dtype=np.int64)
        rem = ids.copy()
        for j in range(num_params):
            quarters[:, j] = rem & 3
            rem >>= 2
        yield quarters


# ---------------------------------------------------------------------------
# The four loss statistics.


def variance_uniform(
    c: CprCircuit, obs, init=None, samples: int = 500, rng=None, threads: int = 1
) -> Estimate:
    """Loss variance over uniformly random angles.

    The stream is L itself, so .mean and .variance are E[L] and V[L]; the
    second-moment fields cover E[L^2]. A constant loss comes back with
    variance exactly zero and constant=True.
    """
    if not isinstance(obs, (PauliString, ObservableSum)):
        raise TypeError("observable must be a PauliString or ObservableSum")
    seed = _resolve_seed(rng)
    vals = loss_samples_uniform(c, [obs], init, samples, seed, threads)[:, 0]
    return estimate_from_stream(vals, seed)


def variance_clifford(
    c: CprCircuit,
    obs: PauliString,
    init=None,
    samples: int = 500,
    rng=None,
    exhaustive: bool = False,
    threads: int = 1,
) -> Estimate:
    """Mean of L^2 over Clifford points, which equals the uniform variance.

    The stream is L^2 in {0, 1}; .mean is the variance estimate.
    exhaustive=True averages the whole 4^num_params grid instead of
    sampling (guarded by size).
    """
    if not isinstance(obs, PauliString):
        raise TypeError("Clifford sampling needs a single Pauli observable")
    if obs.is_identity:
        raise ValueError("identity observable gives a constant loss")
    state = _as_stabilizer(init, c.n)
    if exhaustive:
        vals, _ = _exhaustive_grid_values(c, [obs], state)
        return _exact_estimate(vals, _resolve_seed(rng if rng is not None else 0))
    seed = _resolve_seed(rng)
    losses = loss_samples_clifford(c, [obs], state, samples, seed, threads)[:, 0]
    vals = losses.astype(np.float64) ** 2
    return estimate_from_stream(vals, seed)


def _exhaustive_grid_values(c: CprCircuit, observables, state, guard: int = 10**7):
    total = 4**c.num_params
    if total > guard:
        raise ValueError(f"grid of {total} points exceeds the guard {guard}")
    parts = [
        clifford_loss_matrix(c, quarters, observables, state)
        for quarters in _all_quarter_points(c.num_params)
    ]
    mat = np.concatenate(parts, axis=0).astype(np.float64)
    vals = np.prod(mat**2, axis=1)
    return vals, total


def discrete_correlator(
    c: CprCircuit,
    p1: PauliString,
    p2: PauliString,
    init=None,
    samples: int = 500,
    rng=None,
    exhaustive: bool = False,
    threads: int = 1,
) -> Estimate:
    """Fraction of Clifford points where both losses are non-zero.

    With p1 = p2 this reduces to variance_clifford bit-exactly on the same
    seed: the parameter points drawn are identical.
    """
    for p in (p1, p2):
        if not isinstance(p, PauliString):
            raise TypeError("correlator observables must be Pauli strings")
        if p.is_identity:
            raise ValueError("identity observable gives a constant loss")
    state = _as_stabilizer(init, c.n)
    if exhaustive:
        vals, _ = _exhaustive_grid_values(c, [p1, p2], state)
        return _exact_estimate(vals, _resolve_seed(rng if rng is not None else 0))
    seed = _resolve_seed(rng)
    losses = loss_samples_clifford(c, [p1, p2], state, samples, seed, threads)
    losses = losses.astype(np.float64)
    vals = (losses[:, 0] ** 2) * (losses[:, 1] ** 2)
    return estimate_from_stream(vals, seed)


def continuous_correlator(
    c: CprCircuit,
    p1: PauliString,
    p2: PauliString,
    init=None,
    samples: int = 500,
    rng=None,
    threads: int = 1,
) -> Estimate:
    """Mean of L1^2 L2^2 over uniformly random angles."""
    for p in (p1, p2):
        if not isinstance(p, PauliString):
            raise TypeError("correlator observables must be Pauli strings")
        if p.is_identity:
            raise ValueError("identity observable gives a constant loss")
    seed = _resolve_seed(rng)
    losses = loss_samples_uniform(c, [p1, p2], init, samples, seed, threads)
    vals = (losses[:, 0] ** 2) * (losses[:, 1] ** 2)
    return estimate_from_stream(vals, seed)


def exact_grid_moment(
    c: CprCircuit,
    terms,
    init=None,
    points_per_param: int = 5,
    guard: int = 10**7,
) -> float:
    """Full-grid average of L^2 (one term) or L1^2 L2^2 (two terms).

    The grid angles are 2 pi j / m. One-term moments have trigonometric
    degree at most 2 per angle, so any m >= 3 returns the exact average;
    two-term moments need m >= 5 (m = 4 aliases the degree-4 mode).
    """
    if isinstance(terms, PauliString):
        terms = [terms]
    terms = list(terms)
    if not 1 <= len(terms) <= 2:
        raise ValueError("need one or two Pauli terms")
    m = points_per_param
    if m < 2:
        raise ValueError("need at least two points per parameter")
    total = m**c.num_params
    if total > guard:
        raise ValueError(f"grid of {total} points exceeds the guard {guard}")
    amps = _as_amplitudes(init, c.n)
    step = 2.0 * math.pi / m
    batch = 4096
    acc = 0.0
    for start in range(0, total, batch):
        ids = np.arange(start, min(start + batch, total), dtype=np.int64)
        angles = np.zeros((ids.size, c.num_params), dtype=float)
        rem = ids.copy()
        for j in range(c.num_params):
            angles[:, j] = (rem % m) * step
            rem //= m
        losses = loss_matrix(c, angles, terms, amps)
        vals = np.prod(losses**2, axis=1)
        acc += float(vals.sum())
    return acc / total


# ---------------------------------------------------------------------------
# Ensemble-model moments: no circuit, just states and observables.


def _random_mask_pairs(rng, n: int, count: int, include_identity: bool):
    """count uniform (x, z) mask pairs as uint64 arrays."""
    if n > 64:
        raise ValueError("mask sampling is limited to 64 qubits")
    high = 1 << n
    xs = rng.integers(0, high, size=count, dtype=np.uint64)
    zs = rng.integers(0, high, size=count, dtype=np.uint64)
    if not include_identity:
        bad = np.flatnonzero((xs == 0) & (zs == 0))
        while bad.size:
            xs[bad] = rng.integers(0, high, size=bad.size, dtype=np.uint64)
            zs[bad] = rng.integers(0, high, size=bad.size, dtype=np.uint64)
            bad = bad[(xs[bad] == 0) & (zs[bad] == 0)]
    return xs, zs


def _all_mask_pairs(n: int, include_identity: bool):
    ids = np.arange(1 if not include_identity else 0, 4**n, dtype=np.uint64)
    xs = ids & np.uint64((1 << n) - 1)
    zs = ids >> np.uint64(n)
    return xs, zs


def _conjugated_state(t: CliffordTableau, state: StabilizerState) -> StabilizerState:
    return StabilizerState(state.n, tuple(conjugate_pauli(t, g) for g in state.generators))


def ensemble_second_moment(
    model: str,
    n: int,
    pauli: PauliString | None = None,
    state: StabilizerState | None = None,
    samples: int = 500,
    rng=None,
    include_identity: bool = True,
    exhaustive: bool = False,
    threads: int = 1,
) -> Estimate:
    """Average of (Tr rho P)^2 under one of the ensemble models.

    random_pauli: P uniform (identity included by default), rho fixed.
    random_stabilizer: rho a uniform stabilizer state, P fixed.
    random_clifford_prefix: rho = C rho0 C† for uniform Clifford C, P fixed.
    exhaustive=True enumerates the ensemble instead of sampling (all 4^n
    Paulis, or all stabilizer states for n <= 3).
    """
    if model not in _ENSEMBLE_MODELS:
        raise ValueError(f"unknown ensemble model {model!r}")
    if model == "random_pauli":
        if pauli is not None:
            raise ValueError("random_pauli draws the Pauli; do not fix one")
        fixed = state if state is not None else StabilizerState.zero(n)
        if exhaustive:
            xs, zs = _all_mask_pairs(n, include_identity)
            e = _stab_expect_vec(fixed, xs, zs, np.ones(xs.size, dtype=np.int64))
            return _exact_estimate(
                e.astype(np.float64) ** 2, _resolve_seed(rng if rng is not None else 0)
            )
        seed = _resolve_seed(rng)

        def run(index: int, count: int) -> np.ndarray:
            crng = _chunk_generator(seed, index)
            xs, zs = _random_mask_pairs(crng, n, count, include_identity)
            e = _stab_expect_vec(fixed, xs, zs, np.ones(count, dtype=np.int64))
            return e.astype(np.float64) ** 2

        vals = np.concatenate(_map_chunks(run, samples, threads))
        return estimate_from_stream(vals, seed)

    if pauli is None:
        raise ValueError(f"model {model} needs a fixed Pauli")
    if pauli.n != n:
        raise ValueError("Pauli qubit count mismatch")

    if model == "random_stabilizer":
        if state is not None:
            raise ValueError("random_stabilizer draws the state; do not fix one")
        if exhaustive:
            states = enumerate_stabilizer_states(n)
            vals = np.array(
                [float(stabilizer_expectation(s, pauli)) ** 2 for s in states]
            )
            return _exact_estimate(vals, _resolve_seed(rng if rng is not None else 0))

        def draw(crng):
            return random_stabilizer_state(n, crng)

    else:  # random_clifford_prefix
        rho0 = state if state is not None else StabilizerState.zero(n)
        if exhaustive:
            raise ValueError("the Clifford-prefix ensemble has no enumeration path")

        def draw(crng):
            return _conjugated_state(random_clifford(n, crng), rho0)

    seed = _resolve_seed(rng)

    def run(index: int, count: int) -> np.ndarray:
        crng = _chunk_generator(seed, index)
        out = np.empty(count, dtype=np.float64)
        for i in range(count):
            out[i] = float(stabilizer_expectation(draw(crng), pauli)) ** 2
        return out

    vals = np.concatenate(_map_chunks(run, samples, threads))
    return estimate_from_stream(vals, seed)


def ensemble_pair_moment(
    model: str,
    n: int,
    p1: PauliString | None = None,
    p2: PauliString | None = None,
    state: StabilizerState | None = None,
    samples: int = 500,
    rng=None,
    include_identity: bool = True,
    exhaustive: bool = False,
    threads: int = 1,
) -> Estimate:
    """Average of (Tr rho P1)^2 (Tr rho P2)^2 under an ensemble model.

    random_pauli draws P1, P2 independently (rho fixed); the other models
    fix a distinct non-identity pair and randomize the state.
    """
    if model not in _ENSEMBLE_MODELS:
        raise ValueError(f"unknown ensemble model {model!r}")
    if model == "random_pauli":
        if p1 is not None or p2 is not None:
            raise ValueError("random_pauli draws both Paulis; do not fix them")
        fixed = state if state is not None else StabilizerState.zero(n)
        if exhaustive:
            xs1, zs1 = _all_mask_pairs(n, include_identity)
            count = xs1.size
            if count * count > 10**7:
                raise ValueError("exhaustive pair grid is too large")
            ones = np.ones(count * count, dtype=np.int64)
            e1 = _stab_expect_vec(fixed, np.repeat(xs1, count), np.repeat(zs1, count), ones)
            e2 = _stab_expect_vec(fixed, np.tile(xs1, count), np.tile(zs1, count), ones)
            vals = (e1.astype(np.float64) ** 2) * (e2.astype(np.float64) ** 2)
            return _exact_estimate(vals, _resolve_seed(rng if rng is not None else 0))
        seed = _resolve_seed(rng)

        def run(index: int, count: int) -> np.ndarray:
            crng = _chunk_generator(seed, index)
            xs1, zs1 = _random_mask_pairs(crng, n, count, include_identity)
            xs2, zs2 = _random_mask_pairs(crng, n, count, include_identity)
            ones = np.ones(count, dtype=np.int64)
            e1 = _stab_expect_vec(fixed, xs1, zs1, ones)
            e2 = _stab_expect_vec(fixed, xs2, zs2, ones)
            return (e1.astype(np.float64) ** 2) * (e2.astype(np.float64) ** 2)

        vals = np.concatenate(_map_chunks(run, samples, threads))
        return estimate_from_stream(vals, seed)

    if p1 is None or p2 is None:
        raise ValueError(f"model {model} needs a fixed Pauli pair")
    for p in (p1, p2):
        if p.n != n:
            raise ValueError("Pauli qubit count mismatch")
        if p.is_identity:
            raise ValueError("fixed pair must be non-identity")
    if p1.x_mask == p2.x_mask and p1.z_mask == p2.z_mask:
        raise ValueError("fixed pair must be distinct")

    if model == "random_stabilizer":
        if state is not None:
            raise ValueError("random_stabilizer draws the state; do not fix one")
        if exhaustive:
            states = enumerate_stabilizer_states(n)
            vals = np.array(
                [
                    float(stabilizer_expectation(s, p1)) ** 2
                    * float(stabilizer_expectation(s, p2)) ** 2
                    for s in states
                ]
            )
            return _exact_estimate(vals, _resolve_seed(rng if rng is not None else 0))

        def draw(crng):
            return random_stabilizer_state(n, crng)

    else:
        rho0 = state if state is not None else StabilizerState.zero(n)
        if exhaustive:
            raise ValueError("the Clifford-prefix ensemble has no enumeration path")

        def draw(crng):
            return _conjugated_state(random_clifford(n, crng), rho0)

    seed = _resolve_seed(rng)

    def run(index: int, count: int) -> np.ndarray:
        crng = _chunk_generator(seed, index)
        out = np.empty(count, dtype=np.float64)
        for i in range(count):
            s = draw(crng)
            out[i] = (
                float(stabilizer_expectation(s, p1)) ** 2
                * float(stabilizer_expectation(s, p2)) ** 2
            )
        return out

    vals = np.concatenate(_map_chunks(run, samples, threads))
    return estimate_from_stream(vals, seed)


# ---------------------------------------------------------------------------
# Warm-start search over the Clifford-point grid.


def _counts_at(c: CprCircuit, quarters: np.ndarray, terms, state) -> np.ndarray:
    mat = clifford_loss_matrix(c, quarters, terms, state)
    return (mat != 0).sum(axis=1)


def warmstart_search(
    c: CprCircuit,
    terms,
    init=None,
    budget: int = 4096,
    restarts: int = 8,
    rng=None,
) -> tuple[CliffordPoint, int]:
    """Find a Clifford point where many of the given losses are non-zero.

    When the budget covers the whole 4^num_params grid the search is an
    exhaustive sweep (so the result is the global optimum); otherwise
    greedy coordinate descent with random restarts, ties broken toward
    the incumbent value. Returns (best point, its non-zero count), with
    the count re-verified by scalar recomputation.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one observable term")
    if budget < 1:
        raise ValueError("budget must be positive")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    state = _as_stabilizer(init, c.n)
    m = c.num_params

    best_point: tuple[int, ...] | None = None
    best_count = -1

    if 4**m <= budget:
        for quarters in _all_quarter_points(m):
            counts = _counts_at(c, quarters, terms, state)
            i = int(np.argmax(counts))
            if int(counts[i]) > best_count:
                best_count = int(counts[i])
                best_point = tuple(int(v) for v in quarters[i])
    else:
        gen = np.random.Generator(np.random.Philox(key=_resolve_seed(rng)))
        evals = 0
        for _ in range(restarts):
            if evals >= budget:
                break
            current = list(random_clifford_point(c, gen).quarters)
            count = int(
                _counts_at(c, np.array([current]), terms, state)[0]
            )
            evals += 1
            if count > best_count:
                best_count = count
                best_point = tuple(current)
            improved = True
            while improved and evals < budget:
                improved = False
                for j in range(m):
                    cand = np.tile(current, (4, 1))
                    cand[:, j] = np.arange(4)
                    counts = _counts_at(c, cand, terms, state)
                    evals += 4
                    pick = current[j]
                    for k in range(4):
                        if int(counts[k]) > int(counts[pick]):
                            pick = k
                    if int(counts[pick]) > count:
                        improved = True
                    current[j] = pick
                    count = int(counts[pick])
                    if count > best_count:
                        best_count = count
                        best_point = tuple(current)
                    if evals >= budget:
                        break

    assert best_point is not None
    point = CliffordPoint(best_point)
    check = nonzero_term_count(c, point, terms, state)
    assert check == best_count, "vector and scalar counts must agree"
    return point, best_count


# ---------------------------------------------------------------------------
# Experiment configuration shared with the command-line runner.


_SAMPLING_MODES = ("uniform", "clifford", "both")
_INITIAL_STATES = ("zero", "random_stabilizer")
_ENSEMBLES = ("fixed",) + _ENSEMBLE_MODELS
_ENTANGLERS = ("cz", "cx")

_CONFIG_DEFAULTS = {
    "n": (4,),
    "layers": 30,
    "samples": 500,
    "seed": 0,
    "sampling_mode": "both",
    "observables": "two_body_nn",
    "initial_state": "zero",
    "ensemble": "fixed",
    "entangler": "cz",
    "pair_cap": 500,
    "threads": 1,
    "share_points": True,
    "budget": 4096,
    "restarts": 8,
}


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """Validated knobs of one experiment run."""

    n: tuple[int, ...] = (4,)
    layers: int = 30
    samples: int = 500
    seed: int = 0
    sampling_mode: str = "both"
    observables: str | tuple[str, ...] = "two_body_nn"
    initial_state: str = "zero"
    ensemble: str = "fixed"
    entangler: str = "cz"
    pair_cap: int = 500
    threads: int = 1
    share_points: bool = True
    budget: int = 4096
    restarts: int = 8

    def __post_init__(self):
        if not self.n or any(v < 2 for v in self.n):
            raise ValueError("n must list qubit counts of at least 2")
        for name in ("layers", "samples", "pair_cap", "threads", "budget", "restarts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.sampling_mode not in _SAMPLING_MODES:
            raise ValueError(f"sampling_mode must be one of {_SAMPLING_MODES}")
        if self.initial_state not in _INITIAL_STATES:
            raise ValueError(f"initial_state must be one of {_INITIAL_STATES}")
        if self.ensemble not in _ENSEMBLES:
            raise ValueError(f"ensemble must be one of {_ENSEMBLES}")
        if self.entangler not in _ENTANGLERS:
            raise ValueError(f"entangler must be one of {_ENTANGLERS}")
        if isinstance(self.observables, str):
            if self.observables != "two_body_nn":
                raise ValueError("observable spec must be two_body_nn or a label list")
        elif not self.observables or not all(
            isinstance(s, str) and s for s in self.observables
        ):
            raise ValueError("observable labels must be non-empty strings")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        unknown = set(data) - set(_CONFIG_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in data.items():
            if key == "n":
                if isinstance(value, bool):
                    raise ValueError("n must be an integer or list of integers")
                if isinstance(value, int):
                    value = (value,)
                elif isinstance(value, (list, tuple)) and all(
                    isinstance(v, int) and not isinstance(v, bool) for v in value
                ):
                    value = tuple(value)
                else:
                    raise ValueError("n must be an integer or list of integers")
            elif key == "observables":
                if isinstance(value, (list, tuple)):
                    value = tuple(value)
                elif not isinstance(value, str):
                    raise ValueError("observables must be a string or list of labels")
            elif key == "share_points":
                if not isinstance(value, bool):
                    raise ValueError("share_points must be a boolean")
            elif key in ("sampling_mode", "initial_state", "ensemble", "entangler"):
                if not isinstance(value, str):
                    raise ValueError(f"{key} must be a string")
            else:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValueError(f"{key} must be an integer")
            kwargs[key] = value
        return cls(**kwargs)

    def observable_list(self, n: int) -> list[PauliString]:
        if self.observables == "two_body_nn":
            return two_body_nn_paulis(n)
        out = [pauli_from_label(label) for label in self.observables]
        for p in out:
            if p.n != n:
                raise ValueError(f"observable {p.label()} is not on {n} qubits")
        return out

    def initial_stabilizer(self, n: int) -> StabilizerState:
        if self.initial_state == "zero":
            return StabilizerState.zero(n)
        rng = _chunk_generator(derive_seed(self.seed, "initial_state", n), 0)
        return random_stabilizer_state(n, rng)
