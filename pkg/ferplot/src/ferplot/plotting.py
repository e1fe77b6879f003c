"""Render FER sweep CSVs as log-scale error-rate charts.

The input contract is the sweep CSV schema produced by the `simulate`
tool (this package reads the file format only and never imports the
simulator):

    spreading_factor,payload_bytes,covariance_q,snr_db,trials,frame_errors,
    fer,ci_low,ci_high,symbol_errors,symbols_total,master_seed

A figure kind picks the x-axis column; every distinct combination of
the remaining parameter columns becomes one curve, labeled by the
requested group-by column first.  Values are plotted exactly as read —
the only transformation is the logarithmic y-axis.  Rows with zero
observed frame errors cannot sit on a log axis at their point estimate,
so they are drawn at the 95% upper confidence bound with an open marker
and a caption note instead of being dropped.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

FIGURE_KINDS = {
    "fer_vs_snr": "snr_db",
    "fer_vs_q": "covariance_q",
    "fer_vs_payload": "payload_bytes",
}

PARAMETER_COLUMNS = ("spreading_factor", "payload_bytes", "covariance_q", "snr_db")

REQUIRED_COLUMNS = PARAMETER_COLUMNS + ("fer", "ci_high")

ZERO_FER_NOTE = "open markers: zero observed frame errors, drawn at the 95% upper bound"


class PlotError(ValueError):
    """Input CSV or plot spec is unusable; the message names the problem."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    figure_kind: str
    group_by: str
    output_path: str

    def __post_init__(self) -> None:
        if self.figure_kind not in FIGURE_KINDS:
            raise PlotError(
                f"figure_kind must be one of {sorted(FIGURE_KINDS)}, "
                f"got {self.figure_kind!r}"
            )

    @property
    def x_column(self) -> str:
        return FIGURE_KINDS[self.figure_kind]


@dataclass
class Curve:
    """One plotted curve, exactly as handed to matplotlib."""

    label: str
    x: np.ndarray
    y: np.ndarray
    zero_fer: np.ndarray  # mask: True where y is the CI bound, not the FER
    rows: list = field(repr=False, default_factory=list)


def read_rows(path: str) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise PlotError(f"CSV is missing required columns: {missing}")
        rows = list(reader)
    if not rows:
        raise PlotError(f"CSV {path} has a header but no data rows")
    return rows


def build_curves(rows: list[dict], spec: PlotSpec) -> list[Curve]:
    if spec.group_by not in rows[0]:
        raise PlotError(f"group-by column {spec.group_by!r} not in the CSV")
    x_col = spec.x_column

    # One curve per distinct parameter combination away from the x-axis,
    # so a multi-q FER-vs-SNR file fans out into per-(S, q) curves.
    key_cols = [c for c in PARAMETER_COLUMNS if c != x_col]
    lead = [spec.group_by] if spec.group_by in key_cols else []
    key_cols = lead + [c for c in key_cols if c not in lead]

    grouped: dict[tuple, list[dict]] = {}
    for row in rows:
        key = tuple(row[c] for c in key_cols)
        grouped.setdefault(key, []).append(row)

    # Columns that never change across the file stay out of the labels.
    varying = [
        c for c in key_cols
        if len({k[key_cols.index(c)] for k in grouped}) > 1 or c == spec.group_by
    ]

    curves = []
    for key in sorted(grouped, key=_numeric_key):
        bucket = sorted(grouped[key], key=lambda r: float(r[x_col]))
        x = np.array([float(r[x_col]) for r in bucket])
        fer = np.array([float(r["fer"]) for r in bucket])
        ci_high = np.array([float(r["ci_high"]) for r in bucket])
        zero = fer == 0.0
        y = np.where(zero, ci_high, fer)
        label = ", ".join(
            f"{col}={key[key_cols.index(col)]}" for col in varying
        )
        curves.append(Curve(label=label, x=x, y=y, zero_fer=zero, rows=bucket))
    return curves


def _numeric_key(key: tuple) -> tuple:
    # Numeric cells sort by value, anything else lexically after them.
    out = []
    for cell in key:
        try:
            out.append((0, float(cell), ""))
        except ValueError:
            out.append((1, 0.0, cell))
    return tuple(out)


AXIS_LABELS = {
    "snr_db": "SNR (dB)",
    "covariance_q": "covariance parameter q",
    "payload_bytes": "payload size (bytes)",
}


def render(spec: PlotSpec) -> list[Curve]:
    """Draw the chart to spec.output_path and return the plotted curves.

    The returned curves hold the exact (x, y) arrays given to matplotlib,
    so callers (and tests) can verify the rendering is a pure function of
    the CSV.
    """
    rows = read_rows(spec.input_csv)
    curves = build_curves(rows, spec)

    fig, ax = plt.subplots(figsize=(7.0, 4.8))
    any_zero = False
    for curve in curves:
        (line,) = ax.plot(curve.x, curve.y, marker="o", markersize=4,
                          linewidth=1.2, label=curve.label)
        if curve.zero_fer.any():
            any_zero = True
            ax.plot(
                curve.x[curve.zero_fer], curve.y[curve.zero_fer],
                linestyle="none", marker="o", markersize=7,
                markerfacecolor="none", markeredgecolor=line.get_color(),
            )
    ax.set_yscale("log")
    ax.set_xlabel(AXIS_LABELS.get(spec.x_column, spec.x_column))
    ax.set_ylabel("frame error rate")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    if any_zero:
        fig.text(0.01, 0.01, ZERO_FER_NOTE, fontsize=7, style="italic")
    fig.tight_layout(rect=(0, 0.03 if any_zero else 0, 1, 1))
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)
    return curves
