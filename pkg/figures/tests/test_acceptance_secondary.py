"""Secondary acceptance: drive the primary package through its CLI (the
only interface this component may use), then render its CSVs.

The table shape/rendering checks and the fig1 plot check pass; the
(n=400, static 8/n) >= 0.7 entry check is kept faithful and fails for the
same documented reason as the primary NeedHighMut criterion (see the
decisions ledger): under this spec's layout the true value is near 0.42.
"""

import subprocess
import sys

import pytest

from sdea_figures.cli import main as figures_main


def _repro(tmp_path, experiment, scale, timeout=4200):
    cmd = [
        sys.executable, "-m", "sdea", "repro",
        "--experiment", experiment, "--scale", str(scale),
        "--seed", "1", "--out-dir", str(tmp_path), "--jobs", "2",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    assert proc.returncode == 0, proc.stderr[-2000:]


@pytest.fixture(scope="module")
def table1_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("table1")
    _repro(path, "table1", 0.1)
    return path


@pytest.fixture(scope="module")
def fig1_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("fig1")
    _repro(path, "fig1", 0.002)
    return path


def _parse_table(text):
    lines = [l for l in text.strip().splitlines() if l.strip()]
    header = [c.strip() for c in lines[0].strip("|").split("|")]
    body = {}
    for line in lines[2:]:
        cells = [c.strip() for c in line.strip("|").split("|")]
        body[int(cells[0])] = dict(zip(header[1:], cells[1:]))
    return header, body


def test_table1_five_by_six_shape(table1_dir, tmp_path):
    out = tmp_path / "table1.md"
    code = figures_main(["table1", str(table1_dir / "table1_summary.csv"), str(out)])
    assert code == 0
    header, body = _parse_table(out.read_text())
    assert header == ["n", "static r=1", "static r=2", "static r=6", "static r=8", "sd", "sasd"]
    assert sorted(body) == [200, 400, 600, 800, 1000]
    for n, row in body.items():
        assert len(row) == 6
        for value in row.values():
            assert value == "—" or len(value.split(".")[1]) == 5  # 5-decimal ratios
    # the low-rate and self-adjusting columns reproduce the source table's zeros
    assert float(body[400]["static r=1"]) == 0.0
    assert float(body[400]["static r=2"]) == 0.0
    assert float(body[400]["sasd"]) == 0.0


def test_table1_n400_high_rate_entry(table1_dir, tmp_path):
    out = tmp_path / "table1.md"
    figures_main(["table1", str(table1_dir / "table1_summary.csv"), str(out)])
    _, body = _parse_table(out.read_text())
    entry = float(body[400]["static r=8"])
    # faithful to the stated criterion; under this spec's NeedHighMut layout
    # the true value is ~0.42 (see decisions ledger), so this stays red
    assert entry >= 0.7, f"(n=400, static 8/n) = {entry}"


def test_fig1_seven_curve_log_plot(fig1_dir, tmp_path):
    out = tmp_path / "fig1.png"
    code = figures_main(["fig1", str(fig1_dir / "fig1_summary.csv"), str(out)])
    assert code == 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    # seven distinct algorithm curves in the summary
    import csv

    with open(fig1_dir / "fig1_summary.csv") as fh:
        rows = list(csv.DictReader(fh))
    labels = {(r["algorithm"], r["params"]) for r in rows}
    assert len(labels) == 7
    svg = tmp_path / "fig1.svg"
    assert figures_main(["fig1", str(fig1_dir / "fig1_summary.csv"), str(svg)]) == 0
    assert b"<svg" in svg.read_bytes()[:300]


def test_fig2_from_records(fig1_dir, tmp_path):
    # fig2 consumes per-run records; reuse the fig1 repro records, which are
    # the same experiment
    out = tmp_path / "fig2.png"
    code = figures_main(["fig2", str(fig1_dir / "fig1_records.csv"), str(out)])
    assert code == 0
    assert out.stat().st_size > 0
