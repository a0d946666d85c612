import csv
import io
import xml.etree.ElementTree as ET

import pytest

from tfim_qfi.experiments import Axis, SweepConfig, run_sweep
from tfim_qfi.output import (
    PALETTE,
    csv_filename,
    emit_csv,
    emit_svg,
    emit_sweep_csvs,
    fmt,
    nice_ticks,
    render_csv,
    render_svg,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def small():
    cfg = SweepConfig(
        ("P4", "PAN"), (1.0, -1.0), Axis.from_range("field", 0.1, 0.5, 4), 0.04, ("qfi_field", "spectrum", "deformation")
    )
    return run_sweep(cfg)


def test_fmt():
    assert fmt(-0.0) == "0"
    assert fmt(0.1) == "0.1"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(123456789012345.0) == "1.23456789012e+14"
    assert fmt(-1) == "-1"


def test_csv_roundtrip(small):
    text = render_csv(small, "qfi_field")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["graph", "J", "h", "T", "classical", "quantum", "total"]
    recs = small.select(observable="qfi_field")
    assert len(rows) == len(recs)
    for row, rec in zip(rows, recs):
        assert row["graph"] == rec.graph and float(row["J"]) == rec.J
        for col, v in zip(("classical", "quantum", "total"), rec.values):
            assert float(row[col]) == pytest.approx(v, rel=1e-11, abs=1e-300)


def test_spectrum_and_deformation_layout(small):
    spec = list(csv.reader(io.StringIO(render_csv(small, "spectrum"))))
    assert spec[0] == ["graph", "J", "h", "index", "eigenvalue"]
    assert len(spec) == 1 + 2 * 2 * 4 * 16
    assert [r[3] for r in spec[1:17]] == [str(k) for k in range(16)]
    deform = list(csv.reader(io.StringIO(render_csv(small, "deformation"))))
    assert deform[0] == ["graph", "J", "h", "n", "D_n", "g", "excited_gap_shift", "pert_pure", "pert_mixed"]
    assert deform[1][3] == "6" and deform[1][5] == "2"


def test_render_csv_requires_observable_choice(small):
    with pytest.raises(ValueError):
        render_csv(small)


def test_emit_files(small, tmp_path):
    path = emit_csv(small, tmp_path / "a.csv", "qfi_field")
    data = path.read_bytes()
    assert b"\r" not in data and data.endswith(b"\n")
    written = emit_sweep_csvs(small, tmp_path / "out")
    names = sorted(p.name for p in written)
    assert len(names) == 6
    assert "qfi_field_J-1_T0.04.csv" in names
    assert csv_filename("spectrum", 1.0, small) == "spectrum_J1_T0.04.csv"
    one = (tmp_path / "out" / "qfi_field_J1_T0.04.csv").read_text().splitlines()
    assert len(one) == 1 + 2 * 4 and all(",1," in line for line in one[1:])


def test_nice_ticks():
    assert nice_ticks(0.0, 1.0) == pytest.approx([0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    t = nice_ticks(-3.2, 17.0)
    assert t[0] >= -3.2 and t[-1] <= 17.0 and len(t) >= 4
    assert len(nice_ticks(2.0, 2.0)) >= 1
    with pytest.raises(ValueError):
        nice_ticks(0.0, float("inf"))


def test_svg_structure(small):
    text = render_svg(small, "qfi_field", J=1.0)
    root = ET.fromstring(text)
    assert root.tag == SVG_NS + "svg" and root.get("version") == "1.1"
    lines = root.findall(SVG_NS + "polyline")
    assert [p.get("data-graph") for p in lines] == ["P4", "PAN"]
    assert lines[0].get("stroke") == PALETTE["P4"]
    assert len(lines[0].get("points").split()) == 4
    labels = [t.text for t in root.iter(SVG_NS + "text")]
    assert "P4" in labels and "PAN" in labels and "h" in labels


def test_svg_spectrum_draws_every_level(small):
    root = ET.fromstring(render_svg(small, "spectrum", J=-1.0))
    assert len(root.findall(SVG_NS + "polyline")) == 2 * 16


def test_svg_single_point_marker():
    cfg = SweepConfig(("C4",), (1.0,), Axis("field", (0.3,)), 0.04, ("qfi_field",))
    root = ET.fromstring(render_svg(run_sweep(cfg)))
    assert len(root.findall(SVG_NS + "circle")) == 1


def test_svg_rejects_ambiguous(small, tmp_path):
    with pytest.raises(ValueError):
        render_svg(small)
    with pytest.raises(ValueError):
        render_svg(small, "qfi_field")
    path = emit_svg(small, tmp_path / "p.svg", observable="qfi_field", J=-1.0, width=640, height=480)
    assert 'width="640"' in path.read_text()
