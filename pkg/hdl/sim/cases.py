"""
The four characteristic starting heatmaps of the toy update study.
"""
import logging

import numpy as np

l = logging.getLogger("hdl.sim.cases")

CASES = ("case1_random", "case2_far_gaussian", "case3_corner_plane", "case4_near_gaussian")

# the gradient picture is worked out for a target in the lower-right quadrant; others mirror it
_QUADRANT_CASES = ("case1_random", "case2_far_gaussian", "case3_corner_plane")


def in_lower_right(rows, cols, j):
    return j[0] >= rows / 2.0 and j[1] >= cols / 2.0


def init_case(cfg):
    """
    Builds the starting heatmap for cfg.init_case.

    - case1_random: i.i.d. uniform [0, 1) drawn from cfg.seed
    - case2_far_gaussian: Gaussian, sigma=2, at (rows/4, cols/4)
    - case3_corner_plane: (i + j) / (rows + cols - 2) on the lower-right quadrant, zero elsewhere
    - case4_near_gaussian: Gaussian with the ground-truth sigma at j_gt
    """
    rows, cols = cfg.rows, cfg.cols
    if cfg.init_case in _QUADRANT_CASES and not in_lower_right(rows, cols, cfg.j_gt):
        l.warning("j_gt=%s is outside the lower-right quadrant; %s assumes it is inside", tuple(cfg.j_gt), cfg.init_case)

    if cfg.init_case == "case1_random":
        return Heatmap(np.random.default_rng(cfg.seed).random((rows, cols)))
    elif cfg.init_case == "case2_far_gaussian":
        return gaussian_heatmap(rows, cols, GaussianSpec(Joint2D(rows / 4.0, cols / 4.0), 2.0))
    elif cfg.init_case == "case3_corner_plane":
        i = np.arange(rows)[:, None]
        j = np.arange(cols)[None, :]
        plane = (i + j) / float(max(rows + cols - 2, 1))
        quadrant = (i >= rows // 2) & (j >= cols // 2)
        return Heatmap(np.where(quadrant, plane, 0.0))
    elif cfg.init_case == "case4_near_gaussian":
        return gaussian_heatmap(rows, cols, GaussianSpec(Joint2D(*cfg.j_gt), cfg.ground_truth_sigma))
    raise ValueError("unknown init case %r" % (cfg.init_case,))


from ..heatmaps import GaussianSpec, Heatmap, Joint2D, gaussian_heatmap
