"""Summary figures for sweep tables."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.family": "serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "svg.hashsalt": "seifert-dw",  # reproducible SVG ids
}

# drop timestamps so reruns write identical files
_FIXED_METADATA = {"svg": {"Date": None}, "pdf": {"CreationDate": None}}

GOLDEN = (5 ** 0.5 - 1) / 2


def size(width: float = 7.0, ratio: float = GOLDEN) -> tuple[float, float]:
    return (width, width * ratio)


def _z_label(z: dict) -> str:
    return str(Fraction(z["num"], z["den"]))


def sweep_figure(rows: Sequence[dict], path: str) -> str:
    """Two panels: invariant values per fiber count, and the essential share split by class.

    ``rows`` are sweep records (``n``, ``z``, ``in_class_a``, ``in_class_b``).
    Returns ``path``.
    """
    ns = sorted({r["n"] for r in rows})
    values = sorted({_z_label(r["z"]) for r in rows}, key=Fraction)
    counts = Counter((r["n"], _z_label(r["z"])) for r in rows)

    with plt.rc_context(STYLE):
        fig, (left, right) = plt.subplots(1, 2, figsize=size())
        width = 0.8 / max(len(values), 1)
        for k, v in enumerate(values):
            xs = [n + (k - (len(values) - 1) / 2) * width for n in ns]
            left.bar(xs, [counts[(n, v)] for n in ns], width=width, label=f"Z = {v}")
        left.set_xticks(ns)
        left.set_xlabel("number of fibers")
        left.set_ylabel("data sets")
        left.set_title("invariant values")
        left.legend(frameon=False)

        total = Counter(r["n"] for r in rows)
        only_a = Counter(r["n"] for r in rows if r["in_class_a"] and not r["in_class_b"])
        only_b = Counter(r["n"] for r in rows if r["in_class_b"] and not r["in_class_a"])
        frac_a = [only_a[n] / total[n] for n in ns]
        frac_b = [only_b[n] / total[n] for n in ns]
        right.bar(ns, frac_a, label="class A", color="tab:red")
        right.bar(ns, frac_b, bottom=frac_a, label="class B", color="tab:blue")
        right.set_xticks(ns)
        right.set_ylim(0, 1)
        right.set_xlabel("number of fibers")
        right.set_ylabel("share with an essential class")
        right.set_title("essential classes")
        right.legend(frameon=False)

        fig.tight_layout()
        fig.savefig(path, metadata=_FIXED_METADATA.get(path.rsplit(".", 1)[-1].lower()))
        plt.close(fig)
    return path
