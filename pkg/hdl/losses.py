import logging
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

l = logging.getLogger("hdl.losses")

KERNEL_SIGNS = ("center_negative", "center_positive")
_LAPLACIAN = np.array([[0., 1., 0.], [1., -4., 1.], [0., 1., 0.]])


@dataclass(frozen=True)
class RegularizerConfig:
    tau: float = 0.0
    kernel_sign: str = "center_negative"

    def __post_init__(self):
        if self.kernel_sign not in KERNEL_SIGNS:
            raise ValueError("kernel_sign must be one of %s, got %r" % (", ".join(KERNEL_SIGNS), self.kernel_sign))

    @property
    def kernel(self):
        return _LAPLACIAN if self.kernel_sign == "center_negative" else -_LAPLACIAN


@dataclass(frozen=True)
class Schedule:
    """
    The step schedule gating the detection term: on for epochs t < t_o, off from t_o onward.
    """
    t_o: int = 120

    def __post_init__(self):
        if self.t_o < 1:
            raise ValueError("t_o must be at least 1, got %r" % (self.t_o,))


def _check_shapes(a, b):
    if a.shape != b.shape:
        raise DimensionMismatchError("heatmap shapes differ: %s vs %s" % (a.shape, b.shape))


def detection_loss(h_hat, h_gt):
    """
    Pixel-wise squared error against the target heatmap.
    """
    _check_shapes(h_hat, h_gt)
    return float(np.sum((h_gt.values - h_hat.values) ** 2))


def regression_loss(j_hat, j_gt):
    return abs(j_hat[0] - j_gt[0]) + abs(j_hat[1] - j_gt[1])


def debiased_regression_loss(h, beta, j_gt, convention="index"):
    return regression_loss(soft_argmax_compensated(h, beta, convention), j_gt)


def laplacian(values, cfg=None):
    """
    3x3 four-neighbor Laplacian over the valid interior (no padding), so the result is (h-2) x (w-2).
    """
    cfg = cfg or RegularizerConfig()
    if values.shape[0] < 3 or values.shape[1] < 3:
        raise HeatmapError("the Laplacian needs a grid of at least 3x3, got %dx%d" % values.shape)
    return convolve2d(values, cfg.kernel, mode="valid")


def shrinkage_regularizer(nh, cfg=None):
    """
    Sum over interior pixels of |lap - tau| + lap - tau, i.e. twice the positive part of the filtered
    heatmap above tau. Sharp peaks have strongly positive Laplacians around them.
    """
    cfg = cfg or RegularizerConfig()
    d = laplacian(nh.values, cfg) - cfg.tau
    return float(np.sum(np.abs(d) + d))


def lam(t, sched):
    return 1.0 if t < sched.t_o else 0.0


def bcir_loss(h, beta, j_gt, h_gt, t, sched, reg_weight=0.0, reg_cfg=None, convention="index"):
    """
    Bias-compensated regression plus the scheduled detection term on the raw heatmap, optionally with
    the shrinkage regularizer of softmax(beta * h).
    """
    _check_shapes(h, h_gt)
    loss = debiased_regression_loss(h, beta, j_gt, convention)
    w = lam(t, sched)
    if w:
        loss += w * detection_loss(h, h_gt)
    if reg_weight:
        loss += reg_weight * shrinkage_regularizer(softmax_normalize(h, beta), reg_cfg)
    return loss


from .errors import DimensionMismatchError, HeatmapError
from .decoding import soft_argmax_compensated
from .heatmaps import softmax_normalize
