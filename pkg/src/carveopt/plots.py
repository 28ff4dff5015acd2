"""Figure rendering for sweep reports.

A sweep figure shows the purchase/stock cost components (f0, f1) against
the left axis and the smaller penalty components (f2, f3, f4) against the
right axis, with the sweep key on x.  Figures are written as PNG files next
to the CSV report.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .lab import SweepRow  # noqa: E402

__all__ = ["render_sweep_plot"]


def render_sweep_plot(rows: Iterable[SweepRow], path, *,
                      x_label: str = "level",
                      title: str = "") -> None:
    """Render the f-components of a sweep to ``path`` (PNG)."""
    rows = [r for r in rows if r.f is not None]
    if not rows:
        raise ValueError("no feasible rows to plot")

    def x_of(row: SweepRow) -> float:
        try:
            return float(row.key)
        except ValueError:
            return float(rows.index(row))

    xs: Sequence[float] = [x_of(r) for r in rows]
    fig, ax_left = plt.subplots(figsize=(8, 5))
    ax_right = ax_left.twinx()

    for idx, style in ((0, "o-"), (1, "s-")):
        ax_left.plot(xs, [r.f[idx] for r in rows], style, label=f"f{idx}")
    for idx, style in ((2, "^--"), (3, "v--"), (4, "d--")):
        ax_right.plot(xs, [r.f[idx] for r in rows], style,
                      color=f"C{idx}", label=f"f{idx}")

    ax_left.set_xlabel(x_label)
    ax_left.set_ylabel("f0, f1")
    ax_right.set_ylabel("f2, f3, f4")
    if title:
        ax_left.set_title(title)
    lines_l, labels_l = ax_left.get_legend_handles_labels()
    lines_r, labels_r = ax_right.get_legend_handles_labels()
    ax_left.legend(lines_l + lines_r, labels_l + labels_r, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
