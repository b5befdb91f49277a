import logging
import math

import numpy as np

l = logging.getLogger("hdl.decoding")

CONVENTIONS = ("index", "continuous")


class BiasModel:
    """
    What compensation needs to know about one soft-argmax decode: the grid size and the softmax
    partition value C. C is kept as log(C) = shift + lse because it overflows for large beta.
    """

    def __init__(self, rows, cols, beta, shift, lse):
        self.rows = rows
        self.cols = cols
        self.beta = beta
        self.shift = shift
        self.lse = lse

    @classmethod
    def from_partition(cls, c, rows, cols, beta=1.0):
        if not c > 0:
            raise ValueError("partition value must be positive, got %r" % (c,))
        return cls(rows, cols, beta, 0.0, math.log(c))

    @property
    def log_c(self):
        return self.shift + self.lse

    @property
    def c(self):
        with np.errstate(over='ignore'):
            return float(np.exp(self.log_c))

    @property
    def ratio(self):
        """
        hw/C, the share of the partition value owed to a flat unit background.
        """
        return math.exp(math.log(self.rows * self.cols) - self.log_c)

    def grid_center(self, convention="index"):
        """
        The expectation of a uniform heatmap. On the zero-based index grid that is ((h-1)/2, (w-1)/2);
        the continuous convention uses (h/2, w/2).
        """
        if convention == "index":
            return Joint2D((self.rows - 1) / 2.0, (self.cols - 1) / 2.0)
        if convention == "continuous":
            return Joint2D(self.rows / 2.0, self.cols / 2.0)
        raise ValueError("unknown grid-center convention %r (expected one of %s)" % (convention, ", ".join(CONVENTIONS)))

    def __repr__(self):
        return "<BiasModel %dx%d beta=%g log_c=%g>" % (self.rows, self.cols, self.beta, self.log_c)


def argmax_decode(h):
    """
    Integer location of the maximum; ties go to the first occurrence in row-major order.
    """
    i, j = np.unravel_index(int(np.argmax(h.values)), h.shape)
    return Joint2D(float(i), float(j))


def argmax_decode_shifted(h, shift=0.25):
    """
    Argmax moved by `shift` pixels along each axis toward the larger of its two neighbors on that axis.
    No move on an axis whose neighbors tie or where a neighbor would fall off the grid.
    """
    if not 0 <= shift < 0.5:
        raise ValueError("shift must be in [0, 0.5), got %r" % (shift,))
    v = h.values
    i, j = np.unravel_index(int(np.argmax(v)), v.shape)
    x, y = float(i), float(j)
    if 0 < i < h.rows - 1:
        x += shift * np.sign(v[i+1, j] - v[i-1, j])
    if 0 < j < h.cols - 1:
        y += shift * np.sign(v[i, j+1] - v[i, j-1])
    return Joint2D(float(np.clip(x, 0, h.rows - 1)), float(np.clip(y, 0, h.cols - 1)))


def soft_argmax_decode(h, beta):
    """
    Integral regression: the expectation of softmax(beta * h).

    :returns: (Joint2D, BiasModel)
    """
    nh, shift, lse = softmax_with_partition(h, beta)
    return expectation(nh), BiasModel(h.rows, h.cols, beta, shift, lse)


def bias_forward(j_o, bm, convention="index"):
    """
    The bias model: a heatmap whose mass above a unit background is centered at j_o decodes to
    (1 - hw/C) j_o + (hw/C) c, with c the grid center.
    """
    r = bm.ratio
    c = bm.grid_center(convention)
    return Joint2D((1.0 - r) * j_o.x + r * c.x, (1.0 - r) * j_o.y + r * c.y)


def compensate(j_re, bm, convention="index"):
    """
    Inverts the bias model. The grid center is a fixed point and every other point moves away from it.

    :raises DegenerateBiasError: when C <= hw
    """
    r = bm.ratio
    if not r < 1.0:
        raise DegenerateBiasError(
            "partition value C=exp(%.6g) does not exceed hw=%d; raise beta or use a less flat heatmap" % (bm.log_c, bm.rows * bm.cols)
        )
    c = bm.grid_center(convention)
    return Joint2D((j_re.x - r * c.x) / (1.0 - r), (j_re.y - r * c.y) / (1.0 - r))


def support_expectation(h, beta):
    """
    Expectation of the mass exp(beta * h) - 1 that sits above the flat background. For a heatmap that
    is exactly zero off its support this is the point compensation recovers.
    """
    if not beta > 0:
        raise ValueError("beta must be positive, got %r" % (beta,))
    excess = np.expm1(beta * h.values)
    total = excess.sum()
    if not total > 0:
        raise DegenerateBiasError("heatmap has no mass above the background")
    return Joint2D(
        float(excess.sum(axis=1) @ np.arange(h.rows, dtype=np.float64)) / total,
        float(excess.sum(axis=0) @ np.arange(h.cols, dtype=np.float64)) / total,
    )


def soft_argmax_compensated(h, beta, convention="index"):
    j_re, bm = soft_argmax_decode(h, beta)
    return compensate(j_re, bm, convention)


from .errors import DegenerateBiasError
from .heatmaps import Joint2D, expectation, softmax_with_partition
