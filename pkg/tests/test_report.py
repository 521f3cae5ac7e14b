"""CSV dialect, diagonal tables, figure rendering."""

import math

import numpy as np
import pytest

from oscharm import figures, report
from oscharm.conditions import CoefficientSequence, sz_condition
from oscharm.dudley import dudley_scan
from oscharm.sampler import arc_grid, field_covariance, sample_field
from oscharm.spectral import profile


@pytest.fixture(scope="module")
def small_profile():
    return profile(3, 40, np.linspace(0.0, 1.0, 21))


class TestCsvDialect:
    def test_profile_header_and_digits(self, small_profile, tmp_path):
        path = tmp_path / "p.csv"
        report.write_profile(small_profile, path, normalized=False)
        raw = path.read_bytes()
        assert b"\r" not in raw  # LF endings only
        lines = raw.decode().splitlines()
        comments = [l for l in lines if l.startswith("#")]
        assert comments and all(l.startswith("# ") for l in comments)
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "r,exact,bessel1,bessel2,err1,err2"
        first = next(l for l in lines if l.startswith("0.05"))
        vals = [float(v) for v in first.split(",")]
        # 17 significant digits round-trip exactly
        assert vals[1] == small_profile.exact[1]

    def test_roundtrip_of_awkward_floats(self, tmp_path):
        path = tmp_path / "x.csv"
        awkward = [math.pi, 1e-300, 1.0 / 3.0, 6.02e23]
        report.write_csv(path, ["v"], [[v] for v in awkward])
        back = [float(l) for l in path.read_text().splitlines()[1:]]
        assert back == awkward

    def test_scan_columns(self, tmp_path):
        scan = dudley_scan(2, (64, 128), np.linspace(0.1, 1.0, 4))
        path = tmp_path / "scan.csv"
        report.write_scan(scan, path)
        lines = path.read_text().splitlines()
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "n,r,delta,ratio"
        assert len([l for l in lines if not l.startswith("#")]) == 1 + 8

    def test_condition_columns(self, tmp_path):
        rep = sz_condition(2, CoefficientSequence.power_log(a=1.0), l_max=1000)
        path = tmp_path / "cond.csv"
        report.write_condition(rep, path)
        lines = path.read_text().splitlines()
        assert any("verdict=" in l for l in lines if l.startswith("#"))
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "cutoff,lower,upper"

    def test_sample_seed_comment(self, tmp_path):
        sample = sample_field(np.eye(3), 5, 42)
        path = tmp_path / "s.csv"
        report.write_sample(sample, path)
        text = path.read_text()
        assert "# seed=42\n" in text
        assert text.splitlines()[3] == "x0,x1,x2"


class TestDiagonalTable:
    def test_ground_level_value(self):
        table = report.diagonal_table(3, 0, 4)
        assert table.exact[0] == pytest.approx(math.pi**-1.5 * math.exp(-1.0), rel=1e-12)

    def test_envelope_brackets_points_d2(self):
        table = report.diagonal_table(2, 64, 400)
        # remainder beyond the envelope decays like log n / sqrt(n)
        excess = np.maximum(table.exact - table.env_hi, 0.0) + np.maximum(
            table.env_lo - table.exact, 0.0
        )
        norm = np.log(table.levels) / np.sqrt(table.levels)
        assert np.max(excess / norm) < 0.05

    def test_d3_growth_constant(self):
        table = report.diagonal_table(3, 380, 400)
        ref = 1.0 / ((2 * math.pi) ** 1.5 * math.gamma(1.5))
        ratio = table.exact / np.sqrt(table.levels.astype(float))
        assert np.mean(ratio) == pytest.approx(ref, rel=0.05)


class TestFigures:
    def test_profile_figure(self, small_profile, tmp_path):
        out = tmp_path / "p.png"
        figures.save_profile(small_profile, out)
        assert out.stat().st_size > 1000

    def test_other_figures(self, tmp_path):
        scan = dudley_scan(2, (64,), np.linspace(0.1, 1.0, 5))
        figures.save_scan(scan, tmp_path / "scan.png")
        rep = sz_condition(2, CoefficientSequence.power_log(a=1.0), l_max=1000)
        figures.save_condition(rep, tmp_path / "cond.png")
        table = report.diagonal_table(2, 1, 50)
        figures.save_diag(table, tmp_path / "diag.png")
        pts = arc_grid(2, 5)
        cov = field_covariance(2, CoefficientSequence.power_log(a=1.0), pts, 32)
        figures.save_sample(sample_field(cov, 10, 1, points=pts), tmp_path / "s.png")
        for name in ("scan.png", "cond.png", "diag.png", "s.png"):
            assert (tmp_path / name).stat().st_size > 1000

    def test_png_rendering_deterministic(self, small_profile, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        figures.save_profile(small_profile, a)
        figures.save_profile(small_profile, b)
        assert a.read_bytes() == b.read_bytes()
