import logging
import math
from collections import namedtuple

import numpy as np

l = logging.getLogger("hdl.heatmaps")

# x indexes rows, y indexes columns; both in zero-based pixel units
Joint2D = namedtuple("Joint2D", ["x", "y"])
SupportRegion = namedtuple("SupportRegion", ["center", "half_width"])
GaussianSpec = namedtuple("GaussianSpec", ["mean", "sigma"])

# unit-sum checks on normalized grids
SUM_TOLERANCE = 1e-12


class Heatmap:
    """
    A dense grid of raw activations. The values are copied and frozen on construction.

    :param values: anything numpy can turn into a 2-D float array
    """

    def __init__(self, values):
        try:
            values = np.array(values, dtype=np.float64)
        except (TypeError, ValueError) as e:
            raise HeatmapError("cannot interpret heatmap values: %s" % e) from e
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise HeatmapError("heatmap must be a non-empty 2-D grid, got shape %s" % (values.shape,))
        if not np.all(np.isfinite(values)):
            raise HeatmapError("heatmap contains non-finite values")
        values.setflags(write=False)
        self.values = values

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    def __repr__(self):
        return "<%s %dx%d>" % (type(self).__name__, self.rows, self.cols)


class NormalizedHeatmap(Heatmap):
    """
    A heatmap that is a distribution over its pixels, tagged with the softmax beta that produced it.
    Entries may underflow to exactly zero at large beta, so only nonnegativity is enforced.
    """

    def __init__(self, values, beta):
        super().__init__(values)
        if np.any(self.values < 0):
            raise HeatmapError("normalized heatmap has negative entries")
        total = math.fsum(self.values.ravel())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise HeatmapError("normalized heatmap sums to %r, not 1" % total)
        self.beta = beta

    def __repr__(self):
        return "<%s %dx%d beta=%g>" % (type(self).__name__, self.rows, self.cols, self.beta)


def softmax_with_partition(h, beta):
    """
    Softmax-normalizes h at temperature beta and keeps enough of the partition value to rebuild it.

    The partition value C = sum(exp(beta*h)) overflows for large beta, so it is returned in log form as
    (shift, lse) with log(C) = shift + lse, where shift = beta*max(h).

    :returns: (NormalizedHeatmap, shift, lse)
    """
    if not beta > 0:
        raise ValueError("beta must be positive, got %r" % (beta,))
    z = beta * h.values
    shift = float(z.max())
    e = np.exp(z - shift)
    total = e.sum()
    return NormalizedHeatmap(e / total, beta), shift, math.log(total)


def softmax_normalize(h, beta):
    return softmax_with_partition(h, beta)[0]


def gaussian_heatmap(rows, cols, spec, truncate=None):
    """
    Renders exp(-|p - mean|^2 / (2 sigma^2)) on a rows x cols grid.

    :param GaussianSpec spec: mean and sigma, in pixels
    :param truncate: if given, pixels further than this from the mean along either axis are exactly zero
    """
    if not spec.sigma > 0:
        raise ValueError("sigma must be positive, got %r" % (spec.sigma,))
    if rows < 1 or cols < 1:
        raise ValueError("grid must be at least 1x1, got %dx%d" % (rows, cols))
    dx = np.arange(rows, dtype=np.float64)[:, None] - spec.mean[0]
    dy = np.arange(cols, dtype=np.float64)[None, :] - spec.mean[1]
    values = np.exp(-(dx ** 2 + dy ** 2) / (2.0 * spec.sigma ** 2))
    if truncate is not None:
        if truncate < 0:
            raise ValueError("truncation radius must be nonnegative, got %r" % (truncate,))
        outside = (np.abs(dx) > truncate) | (np.abs(dy) > truncate)
        values = np.where(outside, 0.0, values)
    return Heatmap(values)


def expectation(nh):
    """
    Spatial expectation of a normalized heatmap: sum over pixels of p * h(p).
    """
    v = nh.values
    x = float(v.sum(axis=1) @ np.arange(nh.rows, dtype=np.float64))
    y = float(v.sum(axis=0) @ np.arange(nh.cols, dtype=np.float64))
    return Joint2D(x, y)


def window_bounds(shape, center, s):
    """
    Clipped inclusive bounds (r0, r1, c0, c1) of the (2s+1)^2 window around the rounded center, or None
    when the window misses the grid.
    """
    cx, cy = round_half_up(center[0]), round_half_up(center[1])
    r0, r1 = max(cx - s, 0), min(cx + s, shape[0] - 1)
    c0, c1 = max(cy - s, 0), min(cy + s, shape[1] - 1)
    if r0 > r1 or c0 > c1:
        return None
    return r0, r1, c0, c1


def activation_sum(nh, center, s):
    """
    Mass of the normalized heatmap inside the (2s+1)^2 window around center. The window is clipped at
    the grid border and clipped mass is simply excluded.

    The sum is exactly rounded (math.fsum), so growing the window never lowers the result.
    """
    if s < 0:
        raise ValueError("window half-width must be nonnegative, got %r" % (s,))
    bounds = window_bounds(nh.shape, center, int(s))
    if bounds is None:
        return 0.0
    r0, r1, c0, c1 = bounds
    return min(math.fsum(nh.values[r0:r1+1, c0:c1+1].ravel()), 1.0)


def activation_curve(nh, center, s_max):
    return [ activation_sum(nh, center, s) for s in range(int(s_max) + 1) ]


def fit_support(nh, threshold):
    """
    Fits the localized model: the support is centered on the expectation and its half-width is the
    smallest s whose window holds at least `threshold` of the mass.

    :param float threshold: in (0, 1]
    :rtype: SupportRegion
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1], got %r" % (threshold,))
    center = expectation(nh)
    s_full = max(nh.rows, nh.cols)
    for s in range(s_full + 1):
        if activation_sum(nh, center, s) >= threshold - SUM_TOLERANCE:
            return SupportRegion(center, s)
    return SupportRegion(center, s_full)


from ..errors import HeatmapError
from ..utils import round_half_up
from . import formats
