"""Figure rendering: estimate-convergence bands and error curves.

The only arithmetic here is grouping repeats by (method, N) and taking
mean and standard deviation (divisor n-1); every estimate was computed
upstream. Rendering is deterministic: a fixed style, a fixed SVG hash
salt, and no timestamps.
"""

import math
from dataclasses import dataclass

import numpy as np

from .reader import SchemaError, read_records

CONVERGENCE = "convergence_band"
ERROR_LOGLOG = "error_loglog"

_KIND_ALIASES = {
    "convergence": CONVERGENCE,
    "convergence_band": CONVERGENCE,
    "error": ERROR_LOGLOG,
    "error_loglog": ERROR_LOGLOG,
}


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: input CSV, figure kind, filters, truth lines, output."""

    csv_path: str
    kind: str = CONVERGENCE
    methods: tuple = ()
    out_path: str = "figure.svg"
    truth_mean: float = None
    truth_std: float = None

    def canonical_kind(self):
        try:
            return _KIND_ALIASES[self.kind]
        except KeyError:
            raise SchemaError(
                f"unknown figure kind {self.kind!r} "
                f"(want convergence|error)") from None


def group_stats(rows, value_key, transform=None):
    """Per (method, N): mean and std over repeats of one column.

    Returns {method: (N array, mean array, std array)} with budgets sorted.
    """
    groups = {}
    for row in rows:
        value = row[value_key]
        if value is None:
            continue
        if transform is not None:
            value = transform(value)
        groups.setdefault(row["method"], {}).setdefault(row["N"], []).append(value)
    out = {}
    for method, by_n in sorted(groups.items()):
        ns = np.array(sorted(by_n))
        means = np.array([np.mean(by_n[n]) for n in ns])
        stds = np.array(
            [np.std(by_n[n], ddof=1) if len(by_n[n]) > 1 else 0.0 for n in ns]
        )
        out[method] = (ns, means, stds)
    return out


def _filter_methods(rows, methods):
    if not methods:
        return rows
    keep = set(methods)
    filtered = [r for r in rows if r["method"] in keep]
    if not filtered:
        raise SchemaError(f"no rows left after method filter {sorted(keep)}")
    return filtered


def _out_std(value):
    return math.sqrt(value) if value > 0.0 else 0.0


def build_panels(spec):
    """Assemble the plotted coordinates without touching matplotlib.

    Returns a list of panel dicts: title, y label, log flag, optional truth
    line, and per-method curves (N, centre line, band half-width).
    """
    kind = spec.canonical_kind()
    layout, rows = read_records(spec.csv_path)
    rows = _filter_methods(rows, spec.methods)
    if kind == CONVERGENCE:
        if layout != "records":
            raise SchemaError("convergence bands need the per-repeat records CSV")
        return [
            {
                "title": "mean estimate",
                "ylabel": "estimate",
                "log": False,
                "truth": spec.truth_mean,
                "curves": group_stats(rows, "mean_est"),
            },
            {
                "title": "standard-deviation estimate",
                "ylabel": "estimate",
                "log": False,
                "truth": spec.truth_std,
                "curves": group_stats(rows, "var_est", transform=_out_std),
            },
        ]
    if layout == "summary":
        return [
            {
                "title": "mean-estimate MSE",
                "ylabel": "MSE",
                "log": True,
                "truth": None,
                "curves": group_stats(rows, "mse_mean"),
            },
            {
                "title": "variance-estimate MSE",
                "ylabel": "MSE",
                "log": True,
                "truth": None,
                "curves": group_stats(rows, "mse_var"),
            },
        ]
    return [
        {
            "title": "relative error on the mean",
            "ylabel": "relative error",
            "log": True,
            "truth": None,
            "curves": group_stats(rows, "rel_err_mean"),
        },
        {
            "title": "relative error on the standard deviation",
            "ylabel": "relative error",
            "log": True,
            "truth": None,
            "curves": group_stats(rows, "rel_err_std"),
        },
    ]


def render(spec):
    """Draw the figure described by `spec` and write it to spec.out_path.

    Returns the panel structure actually plotted (handy for testing the
    coordinates without parsing image files).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "uqplots"
    panels = build_panels(spec)
    fig, axes = plt.subplots(1, len(panels), figsize=(6 * len(panels), 4.2))
    if len(panels) == 1:
        axes = [axes]
    for ax, panel in zip(axes, panels):
        for method, (ns, means, stds) in panel["curves"].items():
            ax.plot(ns, means, marker="o", label=method)
            ax.fill_between(ns, means - stds, means + stds, alpha=0.25)
        if panel["truth"] is not None:
            ax.axhline(panel["truth"], color="black", linestyle="--", linewidth=1)
        if panel["log"]:
            ax.set_xscale("log")
            ax.set_yscale("log")
        ax.set_title(panel["title"])
        ax.set_xlabel("budget N")
        ax.set_ylabel(panel["ylabel"])
        ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, metadata=_strip_metadata(spec.out_path))
    plt.close(fig)
    return panels


def _strip_metadata(path):
    if path.endswith(".svg"):
        return {"Date": None}
    if path.endswith(".png"):
        return {"Software": None}
    return None
