"""Render figure files from simulation CSVs.

The renderer never recomputes physics: every curve is a column drawn
against another column, with axis scaling as the only transformation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd


@dataclass(frozen=True)
class Curve:
    """One column-to-curve mapping: y(x) from a named input CSV."""

    source: str
    x: str
    y: str
    label: str
    style: str = "-"
    panel: str = "a"


@dataclass(frozen=True)
class FigureSpec:
    """Input CSVs, curve mappings and axis scales for one output image."""

    figure: str
    inputs: dict
    curves: tuple
    out_path: Path
    xscale: str = "linear"
    yscale: str = "linear"
    xlabel: str = "t"
    ylabel: str = ""
    panel_titles: dict = field(default_factory=dict)


def _load_inputs(spec: FigureSpec) -> dict:
    frames = {}
    for name, path in spec.inputs.items():
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"{spec.figure}: input CSV not found: {path}")
        frame = pd.read_csv(path)
        if frame.empty:
            raise ValueError(f"{spec.figure}: {path} contains no data rows")
        frames[name] = frame
    return frames


def _check_columns(spec: FigureSpec, frames: dict):
    for curve in spec.curves:
        frame = frames[curve.source]
        for column in (curve.x, curve.y):
            if column not in frame.columns:
                raise ValueError(
                    f"{spec.figure}: column {column!r} not in {spec.inputs[curve.source]} "
                    f"(available: {list(frame.columns)})"
                )


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write the image; returns the output path."""
    frames = _load_inputs(spec)
    _check_columns(spec, frames)

    main_panels = sorted({c.panel for c in spec.curves if not c.panel.endswith("_inset")})
    fig, axes_list = plt.subplots(len(main_panels), 1,
                                  figsize=(6.4, 4.0 * len(main_panels)), squeeze=False)
    axes = {name: axes_list[i][0] for i, name in enumerate(main_panels)}
    for name in main_panels:
        inset_name = f"{name}_inset"
        if any(c.panel == inset_name for c in spec.curves):
            axes[inset_name] = axes[name].inset_axes([0.55, 0.14, 0.4, 0.38])

    for curve in spec.curves:
        frame = frames[curve.source]
        ax = axes[curve.panel]
        ax.plot(frame[curve.x], frame[curve.y], curve.style, label=curve.label, markersize=4)

    for name, ax in axes.items():
        ax.set_xscale(spec.xscale)
        ax.set_yscale(spec.yscale)
        if name in main_panels:
            ax.set_xlabel(spec.xlabel)
            ax.set_ylabel(spec.ylabel)
            ax.legend(fontsize=8, loc="best")
            if name in spec.panel_titles:
                ax.set_title(spec.panel_titles[name], fontsize=10)
        else:
            ax.tick_params(labelsize=7)

    out_path = Path(spec.out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


ENERGY_CURVES = (
    ("mean_dE_tpm", "TPM", "--"),
    ("mean_dE_epm", "EPM", "-"),
    ("dE_coh", "coherent gap", ":"),
)


def _energy_panel(source: str, panel: str):
    return tuple(
        Curve(source=source, x="t", y=column, label=label, style=style, panel=panel)
        for column, label, style in ENERGY_CURVES
    )


def build_figure_spec(figure: str, data_dir, out_path) -> FigureSpec:
    """Preset layouts matching the CSVs that `prethermal reproduce` emits."""
    data_dir = Path(data_dir)
    if figure == "fig1":
        return FigureSpec(
            figure=figure,
            inputs={"main": data_dir / "fig1.csv", "inset": data_dir / "fig1_inset.csv"},
            curves=_energy_panel("main", "a") + _energy_panel("inset", "a_inset"),
            out_path=out_path,
            xscale="log",
            ylabel="mean energy change",
            panel_titles={"a": "prethermal (main) vs uncorrelated bath (inset)"},
        )
    if figure == "fig2":
        inputs = {w: data_dir / f"fig2_{w}.csv"
                  for w in ("phi_plus", "phi_minus", "psi_plus", "psi_minus")}
        curves = (_energy_panel("phi_plus", "a") + _energy_panel("phi_minus", "a_inset")
                  + _energy_panel("psi_plus", "b") + _energy_panel("psi_minus", "b_inset"))
        return FigureSpec(
            figure=figure, inputs=inputs, curves=curves, out_path=out_path, xscale="log",
            ylabel="mean energy change",
            panel_titles={"a": "even-parity Bell states", "b": "odd-parity Bell states"},
        )
    if figure == "fig3":
        curves = tuple(
            Curve(source="sweep", x="sweep_value", y=column, label=label, style=style)
            for column, label, style in (
                ("avg_sigma_epm", "entropy (EPM)", "-"),
                ("avg_sigma_tpm", "entropy (TPM)", "--"),
                ("classical_epm", "classical (EPM)", "-."),
                ("classical_tpm", "classical (TPM)", ":"),
            )
        )
        return FigureSpec(figure=figure, inputs={"sweep": data_dir / "fig3.csv"},
                          curves=curves, out_path=out_path,
                          xlabel="initial coherence r", ylabel="entropy production")
    if figure == "fig4":
        inputs = {"comp": data_dir / "fig4_computational.csv",
                  "common": data_dir / "fig4_common.csv"}
        curves = (
            Curve("comp", "sweep_value", "mean_dE_epm", "EPM", "-"),
            Curve("comp", "sweep_value", "mean_dE_tpm", "TPM", "--"),
            Curve("common", "sweep_value", "mean_dE_epm", "EPM-2", "o"),
            Curve("common", "sweep_value", "mean_dE_tpm", "TPM-2", "s"),
            Curve("comp", "sweep_value", "avg_sigma_epm", "EPM", "-", "a_inset"),
            Curve("comp", "sweep_value", "avg_sigma_tpm", "TPM", "--", "a_inset"),
            Curve("common", "sweep_value", "avg_sigma_epm", "EPM-2", "o", "a_inset"),
            Curve("common", "sweep_value", "avg_sigma_tpm", "TPM-2", "s", "a_inset"),
        )
        return FigureSpec(figure=figure, inputs=inputs, curves=curves, out_path=out_path,
                          xlabel="initial coherence r", ylabel="mean energy change",
                          panel_titles={"a": "basis dependence (inset: entropy production)"})
    if figure == "fig5":
        curves = (
            Curve("series", "t", "avg_sigma_epm", "EPM", "-", "a"),
            Curve("series", "t", "avg_sigma_tpm", "TPM", "--", "a"),
            Curve("series", "t", "rate_epm", "EPM", "-", "b"),
            Curve("series", "t", "rate_tpm", "TPM", "--", "b"),
        )
        return FigureSpec(figure=figure, inputs={"series": data_dir / "fig5.csv"},
                          curves=curves, out_path=out_path, xscale="log",
                          ylabel="entropy production",
                          panel_titles={"a": "trajectory-averaged entropy production",
                                        "b": "entropy production rate"})
    raise ValueError(f"unknown figure {figure!r}; expected fig1..fig5")
