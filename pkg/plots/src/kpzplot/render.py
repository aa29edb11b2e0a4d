"""Figure rendering for the kpzlab CSV schemas.

One figure per invocation.  PNG output is byte-stable for identical input:
fixed figure geometry, fixed renderer metadata, no timestamps.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("tail-loglog", "variation-sweep", "environment-distance", "overlay")

_SCHEMAS = {
    "tail-loglog": ("quantity", "m", "survival", "beta_hat", "r_squared", "band_lo", "band_hi"),
    "variation-sweep": ("alpha", "eps", "mean_V", "se_V", "n"),
    "environment-distance": ("z", "stat_bessel", "stat_brownian", "threshold"),
    "overlay": ("t", "value", "replica"),
}

_PNG_META = {"Software": "kpzplot"}


class SchemaError(ValueError):
    """Input CSV does not match the schema of the requested plot kind."""


@dataclass
class PlotSpec:
    input_csv: str
    kind: str
    output: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""


def _read_rows(path):
    meta, rows = {}, []
    with open(path, newline="") as fh:
        data_lines = []
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                key, _, val = body.partition(":")
                meta[key.strip()] = val.strip()
            else:
                data_lines.append(line)
    reader = csv.reader(data_lines)
    table = [row for row in reader if row]
    if not table:
        raise SchemaError("CSV has no header row")
    header, rows = table[0], table[1:]
    return meta, header, rows


def _check_schema(kind, header):
    expected = _SCHEMAS[kind]
    missing = [c for c in expected if c not in header]
    if missing:
        raise SchemaError(
            f"CSV does not match the {kind} schema: missing column '{missing[0]}'"
        )
    return {c: header.index(c) for c in expected}


def _new_axes(spec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=130)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax


def _save(fig, spec):
    fig.tight_layout()
    fig.savefig(spec.output, metadata=_PNG_META)
    plt.close(fig)


def _render_tail(spec, cols, rows):
    survival = {}
    fits = {}
    for row in rows:
        q = row[cols["quantity"]]
        if row[cols["beta_hat"]]:
            fits[q] = {
                "beta_hat": row[cols["beta_hat"]],
                "band_lo": float(row[cols["band_lo"]]),
                "band_hi": float(row[cols["band_hi"]]),
            }
        elif row[cols["m"]]:
            survival.setdefault(q, []).append(
                (float(row[cols["m"]]), float(row[cols["survival"]]))
            )
    if not survival:
        raise SchemaError("tails CSV holds no survival rows")
    fig, ax = _new_axes(spec)
    for i, (q, pts) in enumerate(sorted(survival.items())):
        pts = np.array(sorted(pts))
        ok = (pts[:, 0] > 0) & (pts[:, 1] > 0) & (pts[:, 1] < 1)
        x = np.log(pts[ok, 0])
        y = np.log(-np.log(pts[ok, 1]))
        color = f"C{i}"
        ax.plot(x, y, ".", ms=4, color=color, label=q)
        fit = fits.get(q)
        if fit is not None:
            # slope line through the band's center of mass; the annotated
            # value is the CSV field verbatim
            beta = float(fit["beta_hat"])
            n_pts = max(int(0.4 * ok.sum()), 2)
            xc, yc = x[-n_pts:], y[-n_pts:]
            x0, y0 = xc.mean(), yc.mean()
            xx = np.linspace(x.min(), x.max(), 50)
            ax.plot(xx, y0 + beta * (xx - x0), "-", lw=1.2, color=color, alpha=0.7)
            ax.annotate(
                f"{q}: beta_hat = {fit['beta_hat']}",
                xy=(0.02, 0.96 - 0.07 * i),
                xycoords="axes fraction",
                fontsize=9,
                va="top",
            )
    ax.set_xlabel(spec.xlabel or "log m")
    ax.set_ylabel(spec.ylabel or "log(-log S(m))")
    ax.legend(loc="lower right", fontsize=8)
    _save(fig, spec)


def _render_variation(spec, cols, rows):
    series = {}
    for row in rows:
        a = row[cols["alpha"]]
        series.setdefault(a, []).append(
            (float(row[cols["eps"]]), float(row[cols["mean_V"]]), float(row[cols["se_V"]]))
        )
    if not series:
        raise SchemaError("variation CSV holds no data rows")
    fig, ax = _new_axes(spec)
    for i, (a, pts) in enumerate(sorted(series.items(), key=lambda kv: float(kv[0]))):
        pts = np.array(sorted(pts))
        ax.errorbar(
            pts[:, 0], pts[:, 1], yerr=1.96 * pts[:, 2],
            marker="o", ms=4, lw=1.2, capsize=2, color=f"C{i}",
            label=f"alpha = {a}",
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "eps")
    ax.set_ylabel(spec.ylabel or "mean V(alpha, eps)")
    ax.legend(fontsize=8)
    _save(fig, spec)


def _render_environment(spec, cols, rows):
    data = []
    for row in rows:
        data.append(
            (
                float(row[cols["z"]]),
                float(row[cols["stat_bessel"]]),
                float(row[cols["stat_brownian"]]),
                float(row[cols["threshold"]]),
            )
        )
    if not data:
        raise SchemaError("environment CSV holds no data rows")
    data = np.array(sorted(data))
    fig, ax = _new_axes(spec)
    ax.plot(data[:, 0], data[:, 1], "o", label="Bessel side")
    ax.plot(data[:, 0], data[:, 2], "s", label="Brownian side")
    ax.plot(data[:, 0], data[:, 3], "k--", lw=1, label="threshold")
    ax.set_ylim(bottom=0)
    ax.set_xlabel(spec.xlabel or "probe z")
    ax.set_ylabel(spec.ylabel or "two-sample distance")
    ax.legend(fontsize=8)
    _save(fig, spec)


_OVERLAY_LABELS = {0: "geodesic", 1: "weight function", 2: "Brownian bridge"}


def _render_overlay(spec, cols, rows):
    series = {}
    for row in rows:
        rid = int(float(row[cols["replica"]]))
        series.setdefault(rid, []).append(
            (float(row[cols["t"]]), float(row[cols["value"]]))
        )
    if not series:
        raise SchemaError("paths CSV holds no data rows")
    fig, ax = _new_axes(spec)
    for rid, pts in sorted(series.items()):
        pts = np.array(sorted(pts))
        ax.plot(pts[:, 0], pts[:, 1], lw=1.0, label=_OVERLAY_LABELS.get(rid, f"series {rid}"))
    ax.set_xlabel(spec.xlabel or "t")
    ax.set_ylabel(spec.ylabel or "value")
    if not spec.title:
        ax.set_title("Which is which?")
    ax.legend(fontsize=8)
    _save(fig, spec)


_RENDERERS = {
    "tail-loglog": _render_tail,
    "variation-sweep": _render_variation,
    "environment-distance": _render_environment,
    "overlay": _render_overlay,
}


def render(spec: PlotSpec) -> str:
    """Render one figure; returns the output path.  Raises SchemaError (and
    writes nothing) when the CSV does not carry the expected columns or has
    no data rows."""
    if spec.kind not in KINDS:
        raise SchemaError(f"unknown plot kind: {spec.kind}")
    meta, header, rows = _read_rows(spec.input_csv)
    cols = _check_schema(spec.kind, header)
    if not rows:
        raise SchemaError("CSV has no data rows")
    _RENDERERS[spec.kind](spec, cols, rows)
    return spec.output
