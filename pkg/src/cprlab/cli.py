"""Seeded experiment runner.

Subcommands map onto the statistics the package estimates: `variance`
(uniform vs Clifford sampling), `anticoncentration` (the pair
correlators), `figure2` (the full sweep over qubit counts, one CSV),
`oracle` (the exact self-check suite), and `warmstart` (discrete search
demo). Every run is a pure function of its config, so a repeated
invocation writes byte-identical CSV, regardless of --threads.

CSV schema, fixed: experiment,n,layers,estimator,label,value,stderr,
samples,seed,scaled_value,reference. Floats are written with 17
significant digits. scaled_value is value * 2^n on correlator rows
(the usual plotting scale) and plain value elsewhere; reference is the
matching closed-form prediction: 1/(2^n + 1) for variances, 4^-n for
correlators.

Exit codes: 0 ok, 1 bad config or unwritable output, 2 oracle failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import chi2

from . import analytics
from .circuit import (
    CliffordGate,
    CprCircuit,
    PauliRotation,
    clifford_loss_matrix,
    clifford_point_to_angles,
    eval_at_clifford_point,
    hea_circuit,
    random_clifford_point,
)
from .estimators import (
    ExperimentConfig,
    derive_seed,
    estimate_from_stream,
    exact_grid_moment,
    ensemble_pair_moment,
    ensemble_second_moment,
    loss_samples_clifford,
    loss_samples_uniform,
    warmstart_search,
)
from .pauli import GATE_NAMES, PauliString, gate_arity, random_pauli, two_body_nn_paulis
from .stabilizer import (
    StabilizerState,
    conjugate_pauli,
    enumerate_stabilizer_states,
    random_clifford,
)
from .statevector import evaluate_loss

__all__ = [
    "RunRecord",
    "RunRow",
    "main",
    "cmd_variance",
    "cmd_anticoncentration",
    "cmd_figure2",
    "cmd_oracle",
    "cmd_warmstart",
    "write_csv",
]

CSV_HEADER = (
    "experiment",
    "n",
    "layers",
    "estimator",
    "label",
    "value",
    "stderr",
    "samples",
    "seed",
    "scaled_value",
    "reference",
)


@dataclass(frozen=True, slots=True)
class RunRow:
    n: int
    layers: int
    estimator: str
    label: str
    value: float
    stderr: float
    samples: int
    seed: int
    scaled_value: float
    reference: float


@dataclass(frozen=True, slots=True)
class RunRecord:
    experiment: str
    config: ExperimentConfig
    rows: tuple[RunRow, ...]
    wall_time: float


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(record: RunRecord, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in record.rows:
            writer.writerow(
                (
                    record.experiment,
                    r.n,
                    r.layers,
                    r.estimator,
                    r.label,
                    _fmt(r.value),
                    _fmt(r.stderr),
                    r.samples,
                    r.seed,
                    _fmt(r.scaled_value),
                    _fmt(r.reference),
                )
            )


# ---------------------------------------------------------------------------
# Shared per-n machinery.


def _build_instance(cfg: ExperimentConfig, n: int):
    axes_rng = np.random.Generator(
        np.random.Philox(key=derive_seed(cfg.seed, "circuit", n))
    )
    c = hea_circuit(n, cfg.layers, axes_rng, entangler=cfg.entangler)
    observables = cfg.observable_list(n)
    state = cfg.initial_stabilizer(n)
    return c, observables, state


def _variance_reference(n: int) -> float:
    # 2-design value for a pure state and single-Pauli observable
    return analytics.two_design_variance(n, 1.0, 1.0, float(2**n)).value


def _pair_reference(n: int) -> float:
    return analytics.random_pauli_pair_moment(n).value


def _delta_stderr(est) -> float:
    # first-order error on m2 - mean^2, cross terms dropped
    return math.sqrt(est.second_moment_stderr**2 + (2.0 * est.mean * est.stderr) ** 2)


def _variance_rows(cfg: ExperimentConfig, n: int, c, observables, state) -> list[RunRow]:
    rows: list[RunRow] = []
    ref = _variance_reference(n)
    modes = ("uniform", "clifford") if cfg.sampling_mode == "both" else (cfg.sampling_mode,)
    for mode in modes:
        shared_seed = derive_seed(cfg.seed, mode, n)
        if cfg.share_points:
            sampler = loss_samples_uniform if mode == "uniform" else loss_samples_clifford
            mat = sampler(c, observables, state, cfg.samples, shared_seed, cfg.threads)
            mat = mat.astype(np.float64)
        for i, obs in enumerate(observables):
            if cfg.share_points:
                seed = shared_seed
                col = mat[:, i]
            else:
                seed = derive_seed(cfg.seed, mode, n, obs.label())
                sampler = (
                    loss_samples_uniform if mode == "uniform" else loss_samples_clifford
                )
                col = sampler(c, [obs], state, cfg.samples, seed, cfg.threads)[
                    :, 0
                ].astype(np.float64)
            if mode == "uniform":
                est = estimate_from_stream(col, seed)
                value, err = est.variance, _delta_stderr(est)
                name = "variance_uniform"
            else:
                est = estimate_from_stream(col**2, seed)
                value, err = est.mean, est.stderr
                name = "variance_clifford"
            rows.append(
                RunRow(n, cfg.layers, name, obs.label(), value, err, est.samples, seed, value, ref)
            )
    return rows


def _select_pairs(cfg: ExperimentConfig, n: int, count: int) -> tuple[list[tuple[int, int]], bool]:
    pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]
    if len(pairs) <= cfg.pair_cap:
        return pairs, False
    rng = np.random.Generator(np.random.Philox(key=derive_seed(cfg.seed, "pairs", n)))
    idx = rng.choice(len(pairs), size=cfg.pair_cap, replace=False)
    return [pairs[i] for i in sorted(idx)], True


def _correlator_rows(cfg: ExperimentConfig, n: int, c, observables, state) -> list[RunRow]:
    rows: list[RunRow] = []
    ref = _pair_reference(n)
    scale = float(2**n)
    pairs, capped = _select_pairs(cfg, n, len(observables))
    for mode, name in (("clifford", "discrete_correlator"), ("uniform", "continuous_correlator")):
        shared_seed = derive_seed(cfg.seed, mode, n)
        sampler = loss_samples_uniform if mode == "uniform" else loss_samples_clifford
        if cfg.share_points:
            sq = sampler(c, observables, state, cfg.samples, shared_seed, cfg.threads)
            sq = sq.astype(np.float64) ** 2
        for i, j in pairs:
            label = f"{observables[i].label()}|{observables[j].label()}"
            if cfg.share_points:
                seed = shared_seed
                vals = sq[:, i] * sq[:, j]
            else:
                seed = derive_seed(
                    cfg.seed, mode, n, observables[i].label(), observables[j].label()
                )
                lm = sampler(
                    c, [observables[i], observables[j]], state, cfg.samples, seed, cfg.threads
                ).astype(np.float64)
                vals = (lm[:, 0] ** 2) * (lm[:, 1] ** 2)
            est = estimate_from_stream(vals, seed)
            rows.append(
                RunRow(
                    n, cfg.layers, name, label,
                    est.mean, est.stderr, est.samples, seed, est.mean * scale, ref,
                )
            )
        # pair-averaged series: average the per-sample pair mean so the
        # stderr honestly reflects shared sampling points
        if cfg.share_points:
            avg_vals = np.zeros(sq.shape[0])
            for i, j in pairs:
                avg_vals += sq[:, i] * sq[:, j]
            avg_vals /= len(pairs)
            est = estimate_from_stream(avg_vals, shared_seed)
            avg_value, avg_err, avg_samples = est.mean, est.stderr, est.samples
        else:
            per_pair = [r for r in rows if r.estimator == name and r.n == n]
            avg_value = sum(r.value for r in per_pair) / len(per_pair)
            avg_err = math.sqrt(sum(r.stderr**2 for r in per_pair)) / len(per_pair)
            avg_samples = cfg.samples
        label = f"avg[{len(pairs)}/{math.comb(len(observables), 2)}]" if capped else "avg"
        rows.append(
            RunRow(
                n, cfg.layers, f"{name}_avg", label,
                avg_value, avg_err, avg_samples, shared_seed, avg_value * scale, ref,
            )
        )
    return rows


def _variance_avg_rows(cfg: ExperimentConfig, n: int, rows: list[RunRow]) -> list[RunRow]:
    out = []
    ref = _variance_reference(n)
    for name in ("variance_uniform", "variance_clifford"):
        per = [r for r in rows if r.estimator == name and r.n == n]
        if not per:
            continue
        value = sum(r.value for r in per) / len(per)
        err = math.sqrt(sum(r.stderr**2 for r in per)) / len(per)
        out.append(
            RunRow(
                n, cfg.layers, f"{name}_avg", "avg",
                value, err, per[0].samples, per[0].seed, value, ref,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_variance(cfg: ExperimentConfig) -> RunRecord:
    """Per-observable loss variances, uniform and/or Clifford sampling."""
    t0 = time.perf_counter()
    rows: list[RunRow] = []
    for n in cfg.n:
        c, observables, state = _build_instance(cfg, n)
        rows.extend(_variance_rows(cfg, n, c, observables, state))
    return RunRecord("variance", cfg, tuple(rows), time.perf_counter() - t0)


def cmd_anticoncentration(cfg: ExperimentConfig) -> RunRecord:
    """Discrete and continuous pair correlators over observable pairs."""
    t0 = time.perf_counter()
    rows: list[RunRow] = []
    for n in cfg.n:
        c, observables, state = _build_instance(cfg, n)
        if len(observables) < 2:
            raise ValueError("need at least two observables for pair statistics")
        rows.extend(_correlator_rows(cfg, n, c, observables, state))
    return RunRecord("anticoncentration", cfg, tuple(rows), time.perf_counter() - t0)


def cmd_figure2(cfg: ExperimentConfig) -> RunRecord:
    """Full sweep: both variances plus both correlators for every n."""
    t0 = time.perf_counter()
    rows: list[RunRow] = []
    for n in cfg.n:
        c, observables, state = _build_instance(cfg, n)
        var_rows = _variance_rows(cfg, n, c, observables, state)
        rows.extend(var_rows)
        rows.extend(_variance_avg_rows(cfg, n, var_rows))
        if len(observables) >= 2:
            rows.extend(_correlator_rows(cfg, n, c, observables, state))
    return RunRecord("figure2", cfg, tuple(rows), time.perf_counter() - t0)


def cmd_warmstart(cfg: ExperimentConfig) -> RunRecord:
    """Warm-start search versus the random-point count distribution."""
    t0 = time.perf_counter()
    rows: list[RunRow] = []
    for n in cfg.n:
        c, observables, state = _build_instance(cfg, n)
        rng = np.random.Generator(
            np.random.Philox(key=derive_seed(cfg.seed, "warmstart", n))
        )
        point, count = warmstart_search(
            c, observables, state, budget=cfg.budget, restarts=cfg.restarts, rng=rng
        )
        k = len(observables)
        label = "".join(str(q) for q in point.quarters)
        seed = derive_seed(cfg.seed, "warmstart", n)
        rows.append(
            RunRow(n, cfg.layers, "warmstart_best", label,
                   float(count), 0.0, cfg.budget, seed, float(count), float(k))
        )
        ref_rng = np.random.Generator(
            np.random.Philox(key=derive_seed(cfg.seed, "warmstart-random", n))
        )
        quarters = ref_rng.integers(0, 4, size=(1000, c.num_params))
        counts = (clifford_loss_matrix(c, quarters, observables, state) != 0).sum(axis=1)
        counts = counts.astype(np.float64)
        rows.append(
            RunRow(n, cfg.layers, "warmstart_random_mean", "random1000",
                   float(counts.mean()), float(counts.std() / math.sqrt(counts.size)),
                   1000, seed, float(counts.mean()), float(k))
        )
        rows.append(
            RunRow(n, cfg.layers, "warmstart_random_max", "random1000",
                   float(counts.max()), 0.0, 1000, seed, float(counts.max()), float(k))
        )
    return RunRecord("warmstart", cfg, tuple(rows), time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# The oracle suite: exact identities run end to end, pass/fail per check.


def _random_cpr_circuit(rng, max_n=3, max_params=6) -> CprCircuit:
    n = int(rng.integers(2, max_n + 1))
    num_params = int(rng.integers(1, max_params + 1))
    gate_pool = sorted(GATE_NAMES)
    instructions = []
    slots = list(range(num_params))
    total_gates = int(rng.integers(2, 9))
    for _ in range(total_gates):
        name = gate_pool[int(rng.integers(0, len(gate_pool)))]
        qs = rng.permutation(n)[: gate_arity(name)]
        instructions.append(CliffordGate(name, tuple(int(q) for q in qs)))
    for k in slots:
        axis = random_pauli(n, rng, include_identity=False)
        pos = int(rng.integers(0, len(instructions) + 1))
        instructions.insert(pos, PauliRotation(axis, k))
    return CprCircuit(n, tuple(instructions), num_params)


def _oracle_checks(cfg: ExperimentConfig):
    checks = []
    rng = np.random.Generator(np.random.Philox(key=derive_seed(cfg.seed, "oracle")))

    worst = 0.0
    for _ in range(20):
        c = _random_cpr_circuit(rng)
        obs = random_pauli(c.n, rng, include_identity=False)
        m4 = exact_grid_moment(c, [obs], None, points_per_param=4)
        m5 = exact_grid_moment(c, [obs], None, points_per_param=5)
        worst = max(worst, abs(m4 - m5))
    checks.append(("quadrature-identity", worst <= 1e-9, f"max |m4-m5| = {worst:.2e}, tol 1e-9"))

    worst = 0.0
    exact_ok = True
    for _ in range(200):
        n = int(rng.integers(2, 5))
        c = hea_circuit(n, int(rng.integers(1, 4)), rng)
        obs = two_body_nn_paulis(n)[int(rng.integers(0, 9 * (n - 1)))]
        point = random_clifford_point(c, rng)
        lh = eval_at_clifford_point(c, point, obs, StabilizerState.zero(n))
        lv = evaluate_loss(c, clifford_point_to_angles(point), obs)
        worst = max(worst, abs(lh - lv))
        exact_ok = exact_ok and lh in (-1, 0, 1)
    checks.append(
        ("heisenberg-statevector", worst <= 1e-9 and exact_ok,
         f"max |diff| = {worst:.2e}, tol 1e-9, values in {{-1,0,1}}: {exact_ok}")
    )

    counts = [len(enumerate_stabilizer_states(k)) for k in (1, 2, 3)]
    ok = counts == [6, 60, 1080]
    detail = f"counts {counts} vs [6, 60, 1080]"
    if ok:
        single = ensemble_second_moment(
            "random_stabilizer", 2, pauli=PauliString(2, 1, 0, 1), exhaustive=True
        )
        pair_c = ensemble_pair_moment(
            "random_stabilizer", 2,
            p1=PauliString(2, 0, 3, 1), p2=PauliString(2, 0, 1, 1), exhaustive=True,
        )
        pair_a = ensemble_pair_moment(
            "random_stabilizer", 2,
            p1=PauliString(2, 0, 1, 1), p2=PauliString(2, 1, 0, 1), exhaustive=True,
        )
        ok = (
            Fraction(single.mean).limit_denominator(10**6) == Fraction(1, 5)
            and Fraction(pair_c.mean).limit_denominator(10**6) == Fraction(1, 15)
            and pair_a.mean == 0.0
        )
        detail += f"; moments {single.mean:.6f}, {pair_c.mean:.6f}, {pair_a.mean} vs 1/5, 1/15, 0"
    checks.append(("stabilizer-enumeration", ok, detail))

    draws = 15000
    probe = PauliString(2, 1, 0, 1)
    bins = {}
    for _ in range(draws):
        img = conjugate_pauli(random_clifford(2, rng), probe)
        bins[(img.x_mask, img.z_mask)] = bins.get((img.x_mask, img.z_mask), 0) + 1
    expected = draws / 15
    stat = sum((bins.get(k, 0) - expected) ** 2 / expected
               for k in [(x, z) for x in range(4) for z in range(4) if x or z])
    crit = float(chi2.ppf(0.999, 14))
    ok = len(bins) == 15 and stat < crit
    detail = f"Pauli-orbit chi2 {stat:.1f} < {crit:.1f} (14 dof, 99.9%)"
    dummy = hea_circuit(2, 2, np.random.Generator(np.random.Philox(key=1)))
    coords = np.array(
        [random_clifford_point(dummy, rng).quarters for _ in range(draws // 4)]
    ).ravel()
    freq = np.bincount(coords, minlength=4)
    stat2 = float((((freq - freq.sum() / 4) ** 2) / (freq.sum() / 4)).sum())
    crit2 = float(chi2.ppf(0.999, 3))
    ok = ok and stat2 < crit2
    detail += f"; coordinate chi2 {stat2:.1f} < {crit2:.1f} (3 dof)"
    checks.append(("sampler-uniformity", ok, detail))

    ok = (
        analytics.wg4_identity(2).exact == Fraction(134, 20160)
        and analytics.two_design_variance(2, 1.0, 1.0, 4.0).exact == Fraction(1, 5)
        and analytics.clifford_ratio(4).exact == Fraction(1, 17)
        and analytics.stabilizer_pair_moment(2, True).exact == Fraction(1, 15)
        and abs(16**8 * analytics.wg4_identity(8).exact - 1) <= Fraction(1, 100)
    )
    checks.append(
        ("analytics-exactness", ok,
         "exact rationals, zero tolerance; 16^n wg4(8) within 1% of 1")
    )
    return checks


def cmd_oracle(cfg: ExperimentConfig) -> RunRecord:
    """Run every exact self-check; any failure flips the exit code to 2."""
    t0 = time.perf_counter()
    rows = []
    for name, ok, detail in _oracle_checks(cfg):
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        rows.append(
            RunRow(0, 0, "oracle", name, 1.0 if ok else 0.0, 0.0, 1, cfg.seed,
                   1.0 if ok else 0.0, 1.0)
        )
    return RunRecord("oracle", cfg, tuple(rows), time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Argument handling.


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its keys")
    p.add_argument("--n", help="qubit count or comma list, e.g. 4 or 2,4,6,8")
    p.add_argument("--layers", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    # value validation happens in ExperimentConfig so that a bad value is a
    # config error (exit 1), not an argparse usage error (exit 2 is reserved
    # for oracle failures)
    p.add_argument("--mode", help="uniform, clifford, or both")
    p.add_argument("--out", help="output CSV path (default <command>.csv)")
    p.add_argument("--threads", type=int)
    p.add_argument("--pair-cap", type=int, dest="pair_cap")
    p.add_argument("--entangler", help="cz or cx")
    p.add_argument("--initial-state", dest="initial_state",
                   help="zero or random_stabilizer")
    p.add_argument("--budget", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--share-points", action=argparse.BooleanOptionalAction,
                   dest="share_points", default=None)


def _parse_n(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"bad --n value {text!r}") from None


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        data.update(loaded)
    if args.n is not None:
        data["n"] = _parse_n(args.n)
    if args.mode is not None:
        data["sampling_mode"] = args.mode
    for key in ("layers", "samples", "seed", "threads", "pair_cap", "entangler",
                "initial_state", "budget", "restarts", "share_points"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    return ExperimentConfig.from_dict(data)


_COMMANDS = {
    "variance": cmd_variance,
    "anticoncentration": cmd_anticoncentration,
    "figure2": cmd_figure2,
    "oracle": cmd_oracle,
    "warmstart": cmd_warmstart,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cprlab",
        description="Loss-landscape statistics for Clifford + Pauli-rotation circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        _add_common_flags(p)
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        record = _COMMANDS[args.command](cfg)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    out = args.out or f"{args.command}.csv"
    try:
        write_csv(record, out)
    except OSError as exc:
        print(f"config error: cannot write {out}: {exc}", file=sys.stderr)
        return 1
    print(f"{record.experiment}: wrote {len(record.rows)} rows to {out} "
          f"in {record.wall_time:.1f}s")
    if record.experiment == "oracle" and any(r.value < 1.0 for r in record.rows):
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
