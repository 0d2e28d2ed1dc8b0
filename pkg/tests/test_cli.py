import csv

import numpy as np
import pytest

from edgeworth_rmt import cli
from edgeworth_rmt.fredholm import airy_det


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "# edgeworth-rmt v1"
    rows = list(csv.reader(lines[1:]))
    return rows[0], np.array(rows[1:], dtype=float)


def test_tw2_table_default(tmp_path):
    out = tmp_path / "tw.csv"
    assert cli.main(["tw2-table", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["s", "q", "u0", "v0", "w1", "E_G", "E_L", "F2"]
    f2 = data[:, header.index("F2")]
    assert np.all(np.diff(f2) >= 0)
    s = data[:, 0]
    assert s[0] == -8.0 and s[-1] == 6.0
    assert f2[-1] >= 1 - 1e-8
    zero = np.argmin(np.abs(s))
    assert s[zero] == 0.0
    assert abs(f2[zero] - airy_det(0.0)) < 1e-6


def test_tw2_table_range_checked(tmp_path, capsys):
    assert cli.main(["tw2-table", "--s-range", "-12", "0", "5", "--out", str(tmp_path / "x.csv")]) == 1
    assert "s-range" in capsys.readouterr().err


@pytest.mark.parametrize("which", [1, 2, 3])
def test_figure_outputs(tmp_path, which):
    out = tmp_path / f"fig{which}.csv"
    assert cli.main(["figure", "--which", str(which), "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header[1:] == ["exact", "first_order", "corrected"]
    assert data.shape == (cli.FIGURE_POINTS, 4)
    err_first = np.max(np.abs(data[:, 1] - data[:, 2]))
    err_corr = np.max(np.abs(data[:, 1] - data[:, 3]))
    assert err_corr < err_first
    script = (tmp_path / f"fig{which}.gp").read_text()
    assert f"'fig{which}.csv'" in script
    assert str(tmp_path) not in script
    for style in ("dt 1", "dt 2", "dt 3"):
        assert style in script


def test_figure_csv_only(tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["figure", "--which", "1", "--out", str(out), "--format", "csv"]) == 0
    assert not (tmp_path / "f.gp").exists()


def test_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert cli.main(["edgeworth", "--ensemble", "lue", "--n", "40", "--alpha", "0.5",
                         "--c", "0.2", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    for p in (a, b):
        assert cli.main(["figure", "--which", "3", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_exact_command(tmp_path):
    out = tmp_path / "e.csv"
    assert cli.main(["exact", "--ensemble", "gue", "--n", "2", "--s", "-1", "0", "1", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["s", "t", "exact_cdf"]
    assert np.all(np.diff(data[:, 2]) > 0)


def test_edgeworth_universal(tmp_path):
    out = tmp_path / "u.csv"
    assert cli.main(["edgeworth", "--ensemble", "gue", "--n", "40", "--c", "0.3", "--mode", "universal",
                     "--s-range", "-4", "2", "7", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header[-1] == "overshoot"
    np.testing.assert_allclose(data[:, 5], data[:, 2] + data[:, 3] + data[:, 4], rtol=0, atol=1e-15)


def test_converge_smoke_lue(tmp_path):
    out = tmp_path / "c.csv"
    assert cli.main(["converge", "--ensemble", "lue", "--alpha", "0.5", "--n-list", "10,20,40",
                     "--s-range", "-4", "1", "6", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["n", "sup_error", "slope"]
    assert data.shape == (3, 3)
    assert np.all(data[:, 2] == data[0, 2])
    assert data[0, 2] < -0.5


def test_converge_order_zero(tmp_path):
    out = tmp_path / "c0.csv"
    assert cli.main(["converge", "--ensemble", "gue", "--c", "0.3", "--order", "0", "--n-list", "10,20,40,80",
                     "--s-range", "-5", "2", "15", "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert abs(data[0, 2] + 1 / 3) < 0.15


def test_stdout(capsys):
    assert cli.main(["tw2-table", "--s", "0"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# edgeworth-rmt v1\n")


@pytest.mark.parametrize("argv", [
    ["tw2-table", "--s-range", "1", "0", "5"],
    ["tw2-table", "--s-range", "0", "1", "1"],
    ["exact", "--n", "1", "--s", "0"],
    ["exact", "--n", "10", "--format", "plot-script"],
    ["edgeworth", "--ensemble", "lue", "--n", "10", "--alpha", "-2"],
])
def test_bad_config(argv):
    assert cli.main(argv) == 1


def test_argparse_errors():
    with pytest.raises(SystemExit):
        cli.main(["figure", "--which", "4"])
    with pytest.raises(SystemExit):
        cli.main(["converge", "--n-list", "a,b"])


def test_table_cache_env(tmp_path, monkeypatch):
    from edgeworth_rmt import painleve
    path = tmp_path / "cache.csv"
    monkeypatch.setenv("EDGEWORTH_TABLE_CACHE", str(path))
    painleve._cached_default.cache_clear()
    try:
        t1 = painleve.default_table()
        assert path.exists()
        painleve._cached_default.cache_clear()
        t2 = painleve.default_table()
        np.testing.assert_array_equal(t1.q, t2.q)
    finally:
        monkeypatch.delenv("EDGEWORTH_TABLE_CACHE")
        painleve._cached_default.cache_clear()
