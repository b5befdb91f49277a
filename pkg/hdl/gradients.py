import logging

import numpy as np
from scipy.signal import convolve2d

l = logging.getLogger("hdl.gradients")


class GradientField:
    """
    Gradient of a loss with respect to every raw heatmap pixel.

    For plain integral regression the field factors as beta * value_factor * location_factor, where the
    value factor is the normalized heatmap and the location factor is affine in the pixel position.
    """

    def __init__(self, grad, value_factor=None, location_factor=None, beta=None):
        self.grad = grad
        self.value_factor = value_factor
        self.location_factor = location_factor
        self.beta = beta

    @property
    def has_factors(self):
        return self.value_factor is not None and self.location_factor is not None

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.grad)))

    def __add__(self, other):
        return GradientField(self.grad + other.grad)

    def scaled(self, w):
        return GradientField(w * self.grad)


class FiniteDifferenceReport:
    max_abs_err = None
    max_rel_err = None
    passed = None
    numeric = None

    def __repr__(self):
        return "<FiniteDifferenceReport max_abs=%.3g max_rel=%.3g %s>" % (
            self.max_abs_err, self.max_rel_err, "pass" if self.passed else "FAIL"
        )


def _pixel_grid(rows, cols):
    return np.arange(rows, dtype=np.float64)[:, None], np.arange(cols, dtype=np.float64)[None, :]


def detection_gradient(h_hat, h_gt):
    if h_hat.shape != h_gt.shape:
        raise DimensionMismatchError("heatmap shapes differ: %s vs %s" % (h_hat.shape, h_gt.shape))
    return GradientField(2.0 * (h_hat.values - h_gt.values))


def regression_gradient(h, beta, j_gt):
    """
    Gradient of |J - J_gt|_1 with J the uncompensated soft-argmax. The sign of a zero displacement is 0.
    """
    nh = softmax_normalize(h, beta)
    j = expectation(nh)
    i, jj = _pixel_grid(h.rows, h.cols)
    location = np.sign(j.x - j_gt[0]) * (i - j.x) + np.sign(j.y - j_gt[1]) * (jj - j.y)
    value = nh.values
    return GradientField(beta * value * location, value_factor=value, location_factor=location, beta=beta)


def debiased_regression_gradient(h, beta, j_gt, convention="index"):
    """
    Gradient of |J_ro - J_gt|_1 with J_ro the compensated decode. Differentiating through C as well,
    the compensation collapses to beta * h~_p / (1 - hw/C) * location, with the location factor taken
    about J_ro instead of J_re.
    """
    nh, shift, lse = softmax_with_partition(h, beta)
    bm = BiasModel(h.rows, h.cols, beta, shift, lse)
    j = compensate(expectation(nh), bm, convention)
    i, jj = _pixel_grid(h.rows, h.cols)
    location = np.sign(j.x - j_gt[0]) * (i - j.x) + np.sign(j.y - j_gt[1]) * (jj - j.y)
    return GradientField(beta * nh.values * location / (1.0 - bm.ratio))


def regularizer_gradient(h, beta, cfg=None):
    """
    Gradient of the shrinkage regularizer of softmax(beta * h) with respect to h, through the softmax
    Jacobian. Pixels sitting exactly on the hinge contribute 0.
    """
    cfg = cfg or RegularizerConfig()
    nh = softmax_normalize(h, beta)
    active = (laplacian(nh.values, cfg) > cfg.tau).astype(np.float64)
    g = 2.0 * convolve2d(active, cfg.kernel, mode="full")
    p = nh.values
    return GradientField(beta * p * (g - np.sum(g * p)))


def bcir_gradient(h, beta, j_gt, h_gt, t, sched, reg_weight=0.0, reg_cfg=None, convention="index"):
    field = debiased_regression_gradient(h, beta, j_gt, convention)
    w = lam(t, sched)
    if w:
        field = field + detection_gradient(h, h_gt).scaled(w)
    if reg_weight:
        field = field + regularizer_gradient(h, beta, reg_cfg).scaled(reg_weight)
    return field


def finite_difference_check(loss, h, analytic, step=1e-6, tol=1e-5):
    """
    Compares an analytic gradient against central differences of `loss`, one pixel at a time.

    Relative error is |a - n| / max(1, |a|, |n|), so near-zero entries are judged on absolute error.

    :param loss: callable taking a Heatmap and returning a float
    :param analytic: a GradientField or an array of the heatmap's shape
    :rtype: FiniteDifferenceReport
    """
    a = analytic.grad if isinstance(analytic, GradientField) else np.asarray(analytic, dtype=np.float64)
    if a.shape != h.shape:
        raise DimensionMismatchError("gradient shape %s does not match heatmap %s" % (a.shape, h.shape))

    base = np.array(h.values)
    numeric = np.empty_like(base)
    for idx in np.ndindex(*base.shape):
        orig = base[idx]
        base[idx] = orig + step
        up = loss(Heatmap(base))
        base[idx] = orig - step
        down = loss(Heatmap(base))
        base[idx] = orig
        numeric[idx] = (up - down) / (2.0 * step)

    abs_err = np.abs(a - numeric)
    rel_err = abs_err / np.maximum(1.0, np.maximum(np.abs(a), np.abs(numeric)))
    r = FiniteDifferenceReport()
    r.max_abs_err = float(abs_err.max())
    r.max_rel_err = float(rel_err.max())
    r.passed = r.max_rel_err < tol
    r.numeric = numeric
    l.debug("finite-difference check on %dx%d: %r", h.rows, h.cols, r)
    return r


from .errors import DimensionMismatchError
from .heatmaps import Heatmap, expectation, softmax_normalize, softmax_with_partition
from .decoding import BiasModel, compensate
from .losses import RegularizerConfig, lam, laplacian
