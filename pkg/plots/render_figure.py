#!/usr/bin/env python3
"""Render a bound-sweep CSV (from `cdmacap figure N`) into a chart file.

Usage:
    render_figure.py --csv fig7.csv --figure 7 --out fig7.png

This script is a pure consumer: it plots exactly the rows the CSV carries
and never recomputes a bound.  One CSV series may hold several curves (one
per distinct params record, e.g. one per spreading gain); every curve gets
its own legend entry.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from figure_styles import FIGURE_STYLES  # noqa: E402

REQUIRED_COLUMNS = ("figure", "series", "x_name", "x", "y_name", "y", "params")


class ValidationError(Exception):
    pass


def _read_rows(csv_path: str) -> list[dict]:
    with open(csv_path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in REQUIRED_COLUMNS if col not in header]
        if missing:
            raise ValidationError(f"CSV is missing required columns: {missing}")
        rows = list(reader)
    if not rows:
        raise ValidationError("CSV has a header but no series data")
    return rows


def _curve_label(series: str, params: str, varying: dict) -> str:
    record = json.loads(params) if params else {}
    extras = {k: v for k, v in record.items() if k in varying}
    if not extras:
        return series
    suffix = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                       for k, v in sorted(extras.items()))
    return f"{series} ({suffix})"


def render(csv_path: str, figure_id: int, out_path: str) -> list[str]:
    """Write the chart for one figure id; returns the legend labels."""
    if figure_id not in FIGURE_STYLES:
        raise ValidationError(f"figure id must be 1..10, got {figure_id}")
    rows = _read_rows(csv_path)

    stray = sorted({row["figure"] for row in rows} - {str(figure_id)})
    if stray:
        raise ValidationError(
            f"CSV contains rows for figure(s) {stray}, expected {figure_id}")

    x_names = {row["x_name"] for row in rows}
    y_names = {row["y_name"] for row in rows}
    if len(x_names) != 1 or len(y_names) != 1:
        raise ValidationError(
            f"mixed axis names: x_name={sorted(x_names)}, y_name={sorted(y_names)}")

    # One curve per (series, params); find which params keys distinguish curves.
    curves: dict[tuple, list] = {}
    for row in rows:
        curves.setdefault((row["series"], row["params"]), []).append(
            (float(row["x"]), float(row["y"])))
    varying = {}
    for series in {key[0] for key in curves}:
        param_sets = [json.loads(p) if p else {} for s, p in curves if s == series]
        if len(param_sets) > 1:
            for key in param_sets[0]:
                if len({json.dumps(ps.get(key)) for ps in param_sets}) > 1:
                    varying[key] = True

    style = FIGURE_STYLES[figure_id]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    labels = []
    for (series, params), points in curves.items():
        points.sort()
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        label = _curve_label(series, params, varying)
        labels.append(label)
        ax.plot(xs, ys, label=label, **style.style_for(series))

    ax.set_xlabel(x_names.pop())
    ax.set_ylabel(y_names.pop())
    ax.set_title(style.title)
    if style.x_log:
        ax.set_xscale("log")
    if style.y_log:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return labels


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True, help="input CSV from the bound CLI")
    parser.add_argument("--figure", required=True, type=int, help="figure id 1..10")
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    args = parser.parse_args(argv)
    try:
        labels = render(args.csv, args.figure, args.out)
    except (ValidationError, FileNotFoundError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 2
    sys.stderr.write(f"wrote {args.out} with {len(labels)} series\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
