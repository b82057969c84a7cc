import pytest

from coupled_fv_plots.figures import render_convergence, render_profile, render_roots
from coupled_fv_plots.io import SchemaError, profile_kind, read_profile


class TestIo:
    def test_read_profile(self, synthetic_dir):
        cols, data = read_profile(synthetic_dir / "mini_profile.csv")
        assert cols == ["x", "rho", "q", "u"]
        assert data.shape == (4, 4)
        assert profile_kind(cols) == "isothermal"

    def test_bad_header_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("rho,q\n1,2\n")
        with pytest.raises(SchemaError, match="must start with 'x'"):
            read_profile(bad)

    def test_ragged_row_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,rho,q\n0,1\n")
        with pytest.raises(SchemaError, match="expected 3 columns"):
            read_profile(bad)


class TestRenderSynthetic:
    def test_profile_with_overlay(self, synthetic_dir, tmp_path):
        out = tmp_path / "profile.png"
        render_profile(synthetic_dir / "mini_profile.csv", out,
                       errors_path=synthetic_dir / "mini_errors.json")
        assert out.stat().st_size > 0

    def test_roots_figure(self, synthetic_dir, tmp_path):
        out = tmp_path / "roots.png"
        render_roots(synthetic_dir / "mini_roots.json", out)
        assert out.stat().st_size > 0

    def test_convergence_slope_close_to_first_order(self, synthetic_dir, tmp_path):
        out = tmp_path / "conv.png"
        render_convergence(synthetic_dir / "mini_sweep.json", out)
        assert out.stat().st_size > 0

    def test_rendering_is_read_only_and_repeatable(self, synthetic_dir, tmp_path):
        src = synthetic_dir / "mini_profile.csv"
        before = src.read_bytes()
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        render_profile(src, a)
        render_profile(src, b)
        assert src.read_bytes() == before
        assert a.read_bytes() == b.read_bytes()

    def test_schema_mismatch_raises(self, synthetic_dir, tmp_path):
        with pytest.raises(SchemaError):
            render_roots(synthetic_dir / "mini_sweep.json", tmp_path / "x.png")
