"""Render a summary figure from an experiment CSV.

Standalone on purpose: the only contract with the rest of the code is the
CSV schema (columns experiment, n, layers, estimator, label, value, stderr,
samples, seed, scaled_value, reference). Rows are selected by estimator
name; the y value plotted is scaled_value exactly as written (the writer
puts value itself there for variance rows and value * 2^n for correlator
rows, so all series share one scale). Error bars are +-1 stderr, multiplied
by the same 2^n factor on correlator series. A dashed 2^-n guide line is
drawn from the n column unless --no-ref is given.

    python3 plots/render.py --csv figure2.csv --out figure2.png
    python3 plots/render.py --csv figure2.csv --out figure2.svg \
        --series variance_uniform_avg variance_clifford_avg --no-ref

No statistics are recomputed here and the output is deterministic: fixed
figure geometry, salted svg ids, no embedded dates.
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "render"
import matplotlib.pyplot as plt

DEFAULT_SERIES = (
    "variance_uniform_avg",
    "variance_clifford_avg",
    "discrete_correlator_avg",
    "continuous_correlator_avg",
)
REQUIRED_COLUMNS = ("n", "estimator", "value", "stderr", "scaled_value")
MARKERS = ("s", "o", "D", "^", "v", "*")
FIGSIZE = (6.4, 4.4)
DPI = 150


@dataclass
class FigureSpec:
    csv_path: str
    out_path: str
    series: tuple = field(default_factory=lambda: DEFAULT_SERIES)
    log_scale: bool = True
    reference: bool = True

    def __post_init__(self):
        self.series = tuple(self.series)
        if not self.series:
            raise ValueError("empty series selection")
        ext = self.out_path.rsplit(".", 1)[-1].lower() if "." in self.out_path else ""
        if ext not in ("png", "svg"):
            raise ValueError(f"output extension must be png or svg, got {self.out_path!r}")


def load_series(spec: FigureSpec) -> dict:
    """Parse the CSV into {estimator: [(n, y, yerr), ...]} for the selection."""
    with open(spec.csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{spec.csv_path}: empty file, nothing to plot")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{spec.csv_path}: missing columns {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{spec.csv_path}: no data rows")

    data = {name: [] for name in spec.series}
    for row in rows:
        name = row["estimator"]
        if name not in data:
            continue
        n = int(row["n"])
        y = float(row["scaled_value"])
        yerr = float(row["stderr"])
        if "correlator" in name:
            yerr *= 2.0**n  # stderr column is unscaled; match scaled_value
        data[name].append((n, y, yerr))

    for name, points in data.items():
        if not points:
            raise ValueError(f"series {name!r} not present in {spec.csv_path}")
        points.sort()
        ns = [p[0] for p in points]
        if len(set(ns)) != len(ns):
            raise ValueError(
                f"series {name!r} has several rows at the same n; "
                "pick averaged series or pre-filter the CSV"
            )
    return data


def render_figure2(spec: FigureSpec):
    """Write the figure and return it (the return value is for tests)."""
    data = load_series(spec)

    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for i, name in enumerate(spec.series):
        points = data[name]
        ns = [p[0] for p in points]
        ys = [p[1] for p in points]
        errs = [p[2] for p in points]
        ax.errorbar(
            ns, ys, yerr=errs,
            marker=MARKERS[i % len(MARKERS)], markersize=5,
            capsize=3, linewidth=1.2, label=name,
        )

    all_n = sorted({p[0] for pts in data.values() for p in pts})
    if spec.reference:
        ax.plot(
            all_n, [2.0**-n for n in all_n],
            linestyle="--", color="0.4", linewidth=1.0, label="2^-n",
        )

    if spec.log_scale:
        ax.set_yscale("log")
    ax.set_xticks(all_n)
    ax.set_xlabel("qubits n")
    ax.set_ylabel("averaged moment (correlators scaled by 2^n)")
    ax.legend(fontsize=8)
    fig.tight_layout()

    if spec.out_path.lower().endswith(".svg"):
        fig.savefig(spec.out_path, metadata={"Date": None})
    else:
        fig.savefig(spec.out_path)
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Plot averaged estimator series from an experiment CSV."
    )
    parser.add_argument("--csv", required=True, help="input CSV path")
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    parser.add_argument(
        "--series", nargs="+", default=list(DEFAULT_SERIES),
        help="estimator names to plot (default: the four averaged series)",
    )
    parser.add_argument(
        "--no-ref", action="store_true", help="skip the dashed 2^-n guide line"
    )
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            csv_path=args.csv,
            out_path=args.out,
            series=tuple(args.series),
            reference=not args.no_ref,
        )
        fig = render_figure2(spec)
        plt.close(fig)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
