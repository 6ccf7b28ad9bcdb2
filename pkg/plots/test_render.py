"""Tests for the CSV-to-figure renderer. Run from the repo root:

    pytest plots/test_render.py
"""

import csv
import importlib.util
import pathlib
import subprocess
import sys

import pytest

_HERE = pathlib.Path(__file__).resolve().parent
_spec = importlib.util.spec_from_file_location("render", _HERE / "render.py")
render = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(render)

HEADER = [
    "experiment", "n", "layers", "estimator", "label", "value",
    "stderr", "samples", "seed", "scaled_value", "reference",
]


def write_csv(path, rows, header=HEADER):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def synthetic_rows():
    rows = []
    for n in (2, 4, 6, 8):
        v = 1.0 / (2**n + 1)
        a = 4.0**-n
        rows.append(["figure2", n, 30, "variance_uniform_avg", "avg",
                     repr(v * 1.05), repr(v / 20), 500, 1, repr(v * 1.05), repr(v)])
        rows.append(["figure2", n, 30, "variance_clifford_avg", "avg",
                     repr(v * 0.95), repr(v / 25), 500, 2, repr(v * 0.95), repr(v)])
        rows.append(["figure2", n, 30, "discrete_correlator_avg", "avg",
                     repr(a * 1.2), repr(a / 10), 500, 3, repr(a * 1.2 * 2**n), repr(a)])
        rows.append(["figure2", n, 30, "continuous_correlator_avg", "avg",
                     repr(a * 0.8), repr(a / 15), 500, 4, repr(a * 0.8 * 2**n), repr(a)])
        # a per-observable row the default selection must ignore
        rows.append(["figure2", n, 30, "variance_uniform", "+XX",
                     repr(v), repr(v / 5), 500, 1, repr(v), repr(v)])
    return rows


@pytest.fixture
def csv_path(tmp_path):
    p = tmp_path / "f2.csv"
    write_csv(p, synthetic_rows())
    return p


def series_from_fig(fig):
    """Pull {label: (xs, ys, yerrs)} back out of the rendered axes."""
    ax = fig.axes[0]
    out = {}
    for cont in ax.containers:
        label = cont.get_label()
        line = cont[0]
        xs = [float(x) for x in line.get_xdata()]
        ys = [float(y) for y in line.get_ydata()]
        lo, hi = cont[2][0].get_segments(), None
        errs = [float(seg[1][1] - y) for seg, y in zip(lo, ys)]
        out[label] = (xs, ys, errs)
    return out


def test_png_contains_all_series_and_reference(csv_path, tmp_path):
    out = tmp_path / "f2.png"
    spec = render.FigureSpec(str(csv_path), str(out))
    fig = render.render_figure2(spec)
    assert out.exists() and out.stat().st_size > 0

    ax = fig.axes[0]
    assert ax.get_yscale() == "log"
    got = series_from_fig(fig)
    assert set(got) == set(render.DEFAULT_SERIES)

    # plotted y values equal the CSV scaled_value column exactly
    by_est = {}
    with open(csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["estimator"] in render.DEFAULT_SERIES:
                by_est.setdefault(row["estimator"], []).append(
                    (int(row["n"]), float(row["scaled_value"]), float(row["stderr"]))
                )
    for name, rows in by_est.items():
        rows.sort()
        xs, ys, errs = got[name]
        assert xs == [r[0] for r in rows]
        assert ys == [r[1] for r in rows]
        scale = [2.0 ** r[0] if "correlator" in name else 1.0 for r in rows]
        expected_err = [r[2] * s for r, s in zip(rows, scale)]
        assert errs == pytest.approx(expected_err, rel=1e-12)

    # dashed reference line present with exact 2^-n values
    ref_lines = [
        ln for ln in ax.lines
        if ln.get_linestyle() == "--" and ln.get_label() == "2^-n"
    ]
    assert len(ref_lines) == 1
    assert [float(y) for y in ref_lines[0].get_ydata()] == [
        2.0**-n for n in (2, 4, 6, 8)
    ]


def test_svg_and_png_plot_identical_values(csv_path, tmp_path):
    spec_png = render.FigureSpec(str(csv_path), str(tmp_path / "a.png"))
    spec_svg = render.FigureSpec(str(csv_path), str(tmp_path / "a.svg"))
    got_png = series_from_fig(render.render_figure2(spec_png))
    got_svg = series_from_fig(render.render_figure2(spec_svg))
    assert got_png == got_svg
    assert (tmp_path / "a.svg").exists()


def test_output_is_deterministic(csv_path, tmp_path):
    for ext in ("png", "svg"):
        p1, p2 = tmp_path / f"one.{ext}", tmp_path / f"two.{ext}"
        render.render_figure2(render.FigureSpec(str(csv_path), str(p1)))
        render.render_figure2(render.FigureSpec(str(csv_path), str(p2)))
        assert p1.read_bytes() == p2.read_bytes(), ext


def test_series_selection_and_no_ref(csv_path, tmp_path):
    out = tmp_path / "two.png"
    spec = render.FigureSpec(
        str(csv_path), str(out),
        series=("variance_uniform_avg", "variance_clifford_avg"),
        reference=False,
    )
    fig = render.render_figure2(spec)
    got = series_from_fig(fig)
    assert set(got) == {"variance_uniform_avg", "variance_clifford_avg"}
    assert not [ln for ln in fig.axes[0].lines if ln.get_label() == "2^-n"]


def test_empty_csv_is_an_error_and_writes_nothing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    header_only = tmp_path / "header.csv"
    write_csv(header_only, [])
    for p, msg in ((empty, "empty file"), (header_only, "no data rows")):
        out = tmp_path / (p.stem + ".png")
        with pytest.raises(ValueError, match=msg):
            render.render_figure2(render.FigureSpec(str(p), str(out)))
        assert not out.exists()


def test_missing_column_is_named(tmp_path):
    bad = tmp_path / "bad.csv"
    header = [c for c in HEADER if c != "scaled_value"]
    with open(bad, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerow(["figure2", 2, 30, "variance_uniform_avg", "avg",
                    "0.2", "0.01", 500, 1, "0.2"])
    with pytest.raises(ValueError, match="scaled_value"):
        render.render_figure2(render.FigureSpec(str(bad), str(tmp_path / "x.png")))


def test_unknown_series_rejected(csv_path, tmp_path):
    spec = render.FigureSpec(
        str(csv_path), str(tmp_path / "x.png"), series=("no_such_estimator",)
    )
    with pytest.raises(ValueError, match="no_such_estimator"):
        render.render_figure2(spec)


def test_bad_extension_rejected(csv_path, tmp_path):
    with pytest.raises(ValueError, match="png or svg"):
        render.FigureSpec(str(csv_path), str(tmp_path / "fig.pdf"))


def test_duplicate_n_in_series_rejected(tmp_path):
    rows = [
        ["figure2", 2, 30, "variance_uniform", "+XX", "0.2", "0.01", 500, 1, "0.2", "0.2"],
        ["figure2", 2, 30, "variance_uniform", "+XY", "0.1", "0.01", 500, 1, "0.1", "0.2"],
    ]
    p = tmp_path / "dup.csv"
    write_csv(p, rows)
    spec = render.FigureSpec(str(p), str(tmp_path / "x.png"), series=("variance_uniform",))
    with pytest.raises(ValueError, match="several rows"):
        render.render_figure2(spec)


def test_command_line_end_to_end(csv_path, tmp_path):
    out = tmp_path / "cli.svg"
    proc = subprocess.run(
        [sys.executable, str(_HERE / "render.py"),
         "--csv", str(csv_path), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists() and out.stat().st_size > 0

    proc = subprocess.run(
        [sys.executable, str(_HERE / "render.py"),
         "--csv", str(csv_path), "--out", str(tmp_path / "cli.png"),
         "--series", "bogus"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert "bogus" in proc.stderr


def test_renders_real_experiment_output(tmp_path):
    """End to end against a CSV produced by the actual runner, when present."""
    pytest.importorskip("cprlab")
    from cprlab import ExperimentConfig
    from cprlab.cli import cmd_figure2, write_csv as write_rows

    cfg = ExperimentConfig(n=(2, 3), layers=3, samples=120, seed=13)
    record = cmd_figure2(cfg)
    p = tmp_path / "real.csv"
    write_rows(record, str(p))

    out = tmp_path / "real.png"
    fig = render.render_figure2(render.FigureSpec(str(p), str(out)))
    got = series_from_fig(fig)
    assert set(got) == set(render.DEFAULT_SERIES)
    assert out.stat().st_size > 0
