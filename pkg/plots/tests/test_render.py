import csv
import os

import pytest

from kpzplot import PlotSpec, SchemaError, render

HERE = os.path.dirname(os.path.abspath(__file__))
GOLD = os.path.join(HERE, "golden")

KIND_TO_GOLDEN = {
    "tail-loglog": "tails-golden.csv",
    "variation-sweep": "variation-97.csv",
    "environment-distance": "environment-97.csv",
    "overlay": "paths-97.csv",
}


@pytest.mark.parametrize("kind,golden", sorted(KIND_TO_GOLDEN.items()))
def test_each_kind_renders(tmp_path, kind, golden):
    out = tmp_path / f"{kind}.png"
    render(PlotSpec(os.path.join(GOLD, golden), kind, str(out)))
    assert out.exists() and out.stat().st_size > 2000


def test_tail_annotation_matches_csv_field(tmp_path, monkeypatch):
    # the annotated slope must be the CSV's beta_hat string, verbatim
    path = os.path.join(GOLD, "tails-golden.csv")
    with open(path) as fh:
        rows = [r for r in csv.reader(ln for ln in fh if not ln.startswith("#"))]
    header, data = rows[0], rows[1:]
    beta_field = next(r[header.index("beta_hat")] for r in data if r[header.index("beta_hat")])
    assert abs(float(beta_field) - 3.0) <= 0.15  # synthetic beta=3 oracle

    captured = []
    import matplotlib.axes

    orig = matplotlib.axes.Axes.annotate

    def spy(self, text, *args, **kwargs):
        captured.append(text)
        return orig(self, text, *args, **kwargs)

    monkeypatch.setattr(matplotlib.axes.Axes, "annotate", spy)
    render(PlotSpec(path, "tail-loglog", str(tmp_path / "t.png")))
    assert any(beta_field in text for text in captured)


def test_identical_bytes_for_identical_input(tmp_path):
    spec1 = PlotSpec(os.path.join(GOLD, "variation-97.csv"), "variation-sweep", str(tmp_path / "a.png"))
    spec2 = PlotSpec(os.path.join(GOLD, "variation-97.csv"), "variation-sweep", str(tmp_path / "b.png"))
    render(spec1)
    render(spec2)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_schema_mismatch_names_column(tmp_path):
    with pytest.raises(SchemaError, match="missing column 'alpha'"):
        render(PlotSpec(os.path.join(GOLD, "tails-golden.csv"), "variation-sweep", str(tmp_path / "x.png")))
    assert not (tmp_path / "x.png").exists()


def test_empty_rows_error_and_no_file(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# kpzlab test\nalpha,eps,mean_V,se_V,n\n")
    out = tmp_path / "y.png"
    with pytest.raises(SchemaError, match="no data rows"):
        render(PlotSpec(str(empty), "variation-sweep", str(out)))
    assert not out.exists()


def test_unknown_kind():
    with pytest.raises(SchemaError):
        render(PlotSpec("whatever.csv", "pie-chart", "z.png"))


def test_cli_roundtrip(tmp_path):
    from kpzplot.cli import main

    out = tmp_path / "cli.png"
    code = main([
        "--input-csv", os.path.join(GOLD, "environment-97.csv"),
        "--kind", "environment-distance",
        "--output", str(out),
    ])
    assert code == 0 and out.exists()
    code = main([
        "--input-csv", os.path.join(GOLD, "environment-97.csv"),
        "--kind", "overlay",
        "--output", str(tmp_path / "bad.png"),
    ])
    assert code == 1
    assert not (tmp_path / "bad.png").exists()
