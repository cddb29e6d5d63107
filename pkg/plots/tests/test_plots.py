"""Renderer tests plus the end-to-end reproduce-then-plot acceptance check."""

import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from prethermal_plots.cli import main
from prethermal_plots.figures import Curve, FigureSpec, build_figure_spec, render

FIG3_HEADER = "t,sweep_value,avg_sigma_tpm,avg_sigma_epm,classical_tpm,classical_epm"


def _write_fig3_csv(path: Path, header: str = FIG3_HEADER, rows: int = 5):
    lines = [header]
    for k in range(rows):
        r = 0.01 * k
        lines.append(f"50,{r},0.0876,{0.064 - r},0.0876,{0.0876 - r}")
    path.write_text("\n".join(lines) + "\n")


def test_render_fig3_png_and_svg(tmp_path):
    _write_fig3_csv(tmp_path / "fig3.csv")
    for suffix in ("png", "svg"):
        out = render(build_figure_spec("fig3", tmp_path, tmp_path / f"fig3.{suffix}"))
        assert out.exists() and out.stat().st_size > 0


def test_render_is_idempotent_and_read_only(tmp_path):
    csv_path = tmp_path / "fig3.csv"
    _write_fig3_csv(csv_path)
    before = csv_path.read_bytes()
    out = render(build_figure_spec("fig3", tmp_path, tmp_path / "fig3.png"))
    out.unlink()
    out = render(build_figure_spec("fig3", tmp_path, tmp_path / "fig3.png"))
    assert out.exists()
    assert csv_path.read_bytes() == before


def test_missing_column_fails_loudly(tmp_path):
    _write_fig3_csv(tmp_path / "fig3.csv",
                    header="t,sweep_value,avg_sigma_tpm,avg_sigma_epm,classical_tpm,classical_wrong")
    with pytest.raises(ValueError, match="classical_epm"):
        render(build_figure_spec("fig3", tmp_path, tmp_path / "fig3.png"))
    assert not (tmp_path / "fig3.png").exists()


def test_empty_csv_fails_without_image(tmp_path):
    (tmp_path / "fig3.csv").write_text(FIG3_HEADER + "\n")
    with pytest.raises(ValueError, match="no data rows"):
        render(build_figure_spec("fig3", tmp_path, tmp_path / "fig3.png"))
    assert not (tmp_path / "fig3.png").exists()


def test_missing_file_fails(tmp_path):
    with pytest.raises(FileNotFoundError):
        render(build_figure_spec("fig3", tmp_path, tmp_path / "fig3.png"))


def test_unknown_figure_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure"):
        build_figure_spec("fig9", tmp_path, tmp_path / "x.png")


def test_cli_exit_codes(tmp_path):
    _write_fig3_csv(tmp_path / "fig3.csv")
    out = tmp_path / "fig3.png"
    assert main(["--figure", "fig3", "--data", str(tmp_path), "--out", str(out)]) == 0
    assert out.exists()
    assert main(["--figure", "fig4", "--data", str(tmp_path), "--out", str(out)]) == 1


def test_custom_spec_renders(tmp_path):
    _write_fig3_csv(tmp_path / "fig3.csv")
    spec = FigureSpec(
        figure="custom",
        inputs={"d": tmp_path / "fig3.csv"},
        curves=(Curve("d", "sweep_value", "avg_sigma_epm", "entropy"),),
        out_path=tmp_path / "custom.png",
    )
    assert render(spec).exists()


@pytest.mark.slow
def test_acceptance_14_reproduce_then_plot(tmp_path):
    # [SECONDARY] criterion: reproduce figN + plot --figure figN for all presets,
    # and plotting fails loudly on a missing column
    data_dir = tmp_path / "data"
    for fig in ("fig1", "fig2", "fig3", "fig4", "fig5"):
        run = subprocess.run(
            [sys.executable, "-m", "prethermal.cli", "reproduce", fig,
             "--out-dir", str(data_dir)],
            capture_output=True, text=True,
        )
        assert run.returncode == 0, run.stderr
        image = tmp_path / f"{fig}.png"
        assert main(["--figure", fig, "--data", str(data_dir), "--out", str(image)]) == 0
        assert image.exists() and image.stat().st_size > 0
        print(f"[criterion 14] PASS  reproduce {fig} -> plot {image.name}")

    # degrade one CSV: drop a required column, expect loud failure
    broken = data_dir / "fig3.csv"
    lines = broken.read_text().splitlines()
    header = lines[0].split(",")
    keep = [i for i, name in enumerate(header) if name != "avg_sigma_epm"]
    broken.write_text("\n".join(",".join(line.split(",")[i] for i in keep)
                                for line in lines) + "\n")
    assert main(["--figure", "fig3", "--data", str(data_dir),
                 "--out", str(tmp_path / "broken.png")]) == 1
    assert not (tmp_path / "broken.png").exists()
