"""
SVG figures. Rendering is pinned (Agg backend, fixed hash salt, no date) so reruns are byte-identical.
"""
import logging
import io

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt #pylint:disable=wrong-import-position

l = logging.getLogger("hdl.plots")

matplotlib.rcParams['svg.hashsalt'] = "hdl"
matplotlib.rcParams['svg.fonttype'] = "path"


def save_svg(fig, path):
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={'Date': None})
    plt.close(fig)
    with atomic_output(path, 'wb') as f:
        f.write(buf.getvalue())


def plot_trajectories(runs, j_gt, rows, cols, path):
    """
    One panel per init case; each loss kind's decoded prediction path drawn over the grid.

    :param runs: dict of init case -> dict of loss kind -> SimTrace
    """
    cases = list(runs)
    fig, axes = plt.subplots(1, len(cases), figsize=(4 * len(cases), 4.5), squeeze=False)
    for ax, case in zip(axes[0], cases):
        for loss_kind, trace in runs[case].items():
            xs = [ r.jx_argmax if loss_kind == "detection" else r.jx_soft for r in trace.rows ]
            ys = [ r.jy_argmax if loss_kind == "detection" else r.jy_soft for r in trace.rows ]
            # columns run along the horizontal axis, rows downward
            ax.plot(ys, xs, marker=".", markersize=3, linewidth=1, label=loss_kind)
        ax.plot([j_gt[1]], [j_gt[0]], marker="*", markersize=12, color="black", linestyle="none", label="j_gt")
        ax.set_xlim(-0.5, cols - 0.5)
        ax.set_ylim(rows - 0.5, -0.5)
        ax.set_title(case)
        ax.set_aspect("equal")
    axes[0][0].legend(loc="upper left", fontsize=7)
    fig.tight_layout()
    save_svg(fig, path)


def plot_bias_sweep(betas, series, path):
    """
    :param series: dict of label -> (raw mean errors, compensated mean errors), aligned with betas
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, (raw, comp) in series.items():
        line, = ax.plot(betas, raw, marker="o", label="raw %s" % label)
        # compensated errors can be exactly 0 on a log axis
        ax.plot(betas, [ max(c, 1e-16) for c in comp ], marker="x", linestyle="--", color=line.get_color(), label="compensated %s" % label)
    ax.set_xlabel("beta")
    ax.set_ylabel("mean decode error (px)")
    ax.set_yscale("log")
    ax.legend(fontsize=7)
    fig.tight_layout()
    save_svg(fig, path)


def plot_sigma_lab(sigma_grid, curves, stars, path):
    """
    :param curves: dict of label -> D_B values over sigma_grid
    :param stars: dict of label -> (sigma*, D_B(sigma*))
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, values in curves.items():
        line, = ax.plot(sigma_grid, values, linewidth=1, label=label)
        sx, sy = stars[label]
        ax.plot([sx], [sy], marker="o", color=line.get_color())
    ax.set_xlabel("sigma_hat")
    ax.set_ylabel("Bhattacharyya distance")
    ax.set_ylim(bottom=0)
    ax.legend(fontsize=6)
    fig.tight_layout()
    save_svg(fig, path)


from .utils import atomic_output
