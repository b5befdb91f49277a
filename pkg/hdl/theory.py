"""
The localized heatmap model: expected end-point errors of both decoders, the Bhattacharyya distance
between the learned and the annotation Gaussians, the optimal heatmap spread, and chi-square
template matching of heatmap windows.
"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy import optimize

l = logging.getLogger("hdl.theory")

AnnotationModel = namedtuple("AnnotationModel", ["mu_true", "sigma_true", "mu_hat", "sigma_hat"])

# chi-square templates are clamped here so empty template pixels do not divide by zero
TEMPLATE_FLOOR = 1e-300
SIGMA_XATOL = 1e-10


class ArgmaxDistribution:
    """
    Where the argmax lands inside the support: weights over the (2s+1)^2 offsets around support.center,
    nonnegative, unit-sum and centrosymmetric (w(mu + d) == w(mu - d)).
    """

    def __init__(self, support, weights):
        weights = np.array(weights, dtype=np.float64)
        n = 2 * support.half_width + 1
        if weights.shape != (n, n):
            raise ValueError("weights must be %dx%d for s=%d, got %s" % (n, n, support.half_width, weights.shape))
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(weights.ravel()) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        if not np.allclose(weights, weights[::-1, ::-1], rtol=0, atol=1e-12):
            raise ValueError("weights must be centrosymmetric about the support center")
        self.support = support
        self.weights = weights

    @property
    def points(self):
        """
        (xs, ys) grids of the support's pixel positions, aligned with weights.
        """
        s = self.support.half_width
        d = np.arange(-s, s + 1, dtype=np.float64)
        dx, dy = np.meshgrid(d, d, indexing="ij")
        return self.support.center[0] + dx, self.support.center[1] + dy


def random_symmetric_distribution(rng, center, s):
    a = rng.random((2 * s + 1, 2 * s + 1))
    a = a + a[::-1, ::-1]
    return ArgmaxDistribution(SupportRegion(center, s), a / a.sum())


def expected_epe_detection(w, j_gt):
    xs, ys = w.points
    return float(np.sum(w.weights * np.hypot(j_gt[0] - xs, j_gt[1] - ys)))


def expected_epe_regression(mu, j_gt):
    return float(np.hypot(j_gt[0] - mu[0], j_gt[1] - mu[1]))


class EPEInequalityReport:
    trials = 0
    violations = 0
    strict_failures = 0
    min_slack = None
    min_slack_positive_s = None
    slacks = None

    @property
    def passed(self):
        return self.violations == 0

    def __repr__(self):
        return "<EPEInequalityReport %d trials, %d violations, min slack %g>" % (self.trials, self.violations, self.min_slack)


def _epe_trial(args):
    rng, s = args
    mu = Joint2D(*rng.uniform(0.0, 64.0, size=2))
    j_gt = Joint2D(*(np.array(mu) + rng.normal(0.0, s + 1.0, size=2)))
    w = random_symmetric_distribution(rng, mu, s)
    return s, expected_epe_detection(w, j_gt) - expected_epe_regression(mu, j_gt)


def verify_epe_inequality(trials, s_values=(1, 2, 3), seed=0, threads=1, tolerance=1e-12):
    """
    Samples random centrosymmetric argmax distributions and checks that the detection EPE is never
    below the regression EPE. Trial k uses s = s_values[k % len(s_values)] and its own child seed.

    A slack below -tolerance is a violation; a slack at or below 0 with s > 0 breaks strictness.

    :rtype: EPEInequalityReport
    """
    s_values = list(s_values)
    if not s_values or any(s < 0 for s in s_values):
        raise ValueError("s_values must be a non-empty list of nonnegative integers")
    rngs = child_rngs(seed, trials)
    results = parallel_map(_epe_trial, [ (rng, s_values[k % len(s_values)]) for k, rng in enumerate(rngs) ], threads)

    r = EPEInequalityReport()
    r.trials = trials
    r.slacks = [ slack for _, slack in results ]
    r.violations = sum(1 for slack in r.slacks if slack < -tolerance)
    r.strict_failures = sum(1 for s, slack in results if s > 0 and slack <= 0)
    r.min_slack = min(r.slacks) if r.slacks else None
    positive = [ slack for s, slack in results if s > 0 ]
    r.min_slack_positive_s = min(positive) if positive else None
    if r.violations:
        l.warning("expected-EPE inequality violated in %d of %d trials", r.violations, trials)
    return r


def bhattacharyya_distance(sigma_hat, sigma_true, delta_mu):
    """
    D_B between isotropic Gaussians with spreads sigma_hat and sigma_true whose means are delta_mu apart.
    """
    if not sigma_hat > 0 or not sigma_true > 0:
        raise ValueError("sigmas must be positive")
    t, v = sigma_true ** 2, sigma_hat ** 2
    return 0.25 * math.log(0.25 * (t / v + v / t + 2.0)) + 0.25 * delta_mu ** 2 / (t + v)


def bhattacharyya(am):
    delta_mu = math.hypot(am.mu_hat[0] - am.mu_true[0], am.mu_hat[1] - am.mu_true[1])
    return bhattacharyya_distance(am.sigma_hat, am.sigma_true, delta_mu)


def db_derivative(sigma_hat, sigma_true, delta_mu):
    """
    dD_B/dsigma_hat. With t = sigma_true^2 and v = sigma_hat^2,
    dD_B/dv = ((v - t) / (v (t + v)) - delta_mu^2 / (t + v)^2) / 4.
    """
    t, v = sigma_true ** 2, sigma_hat ** 2
    d_dv = 0.25 * ((v - t) / (v * (t + v)) - delta_mu ** 2 / (t + v) ** 2)
    return 2.0 * sigma_hat * d_dv


def optimal_sigma_closed_form(sigma_true, delta_mu):
    d2 = delta_mu ** 2
    return math.sqrt((d2 + math.sqrt(d2 * d2 + 4.0 * sigma_true ** 4)) / 2.0)


def optimal_sigma(sigma_true, delta_mu):
    """
    The sigma_hat minimizing D_B for a fixed annotation spread and mean displacement.

    The minimum lies at or above sigma_true, so it is searched on [sigma_true, 100 sigma_true] (widened
    if a huge displacement pushes it further), then polished to a root of the derivative.
    """
    if not sigma_true > 0:
        raise ValueError("sigma_true must be positive, got %r" % (sigma_true,))
    if delta_mu < 0:
        raise ValueError("delta_mu must be nonnegative, got %r" % (delta_mu,))
    if delta_mu == 0:
        return float(sigma_true)

    lo, hi = float(sigma_true), 100.0 * sigma_true
    while db_derivative(hi, sigma_true, delta_mu) <= 0:
        hi *= 10.0
    res = optimize.minimize_scalar(
        bhattacharyya_distance, bounds=(lo, hi), args=(sigma_true, delta_mu),
        method="bounded", options={'xatol': SIGMA_XATOL},
    )
    sigma = float(res.x)
    if db_derivative(lo, sigma_true, delta_mu) < 0:
        sigma = optimize.brentq(db_derivative, lo, hi, args=(sigma_true, delta_mu), xtol=1e-14)
    l.debug("sigma*(%g, %g) = %.12g", sigma_true, delta_mu, sigma)
    return float(sigma)


def db_curve(sigma_true, delta_mu, sigma_grid):
    return np.array([ bhattacharyya_distance(s, sigma_true, delta_mu) for s in sigma_grid ])


def chi_square_statistic(observed, expected):
    """
    Pearson's sum((o - e)^2 / e). Same as scipy.stats.chisquare's statistic, without its sum check.
    """
    expected = np.maximum(np.asarray(expected, dtype=np.float64), TEMPLATE_FLOOR)
    observed = np.asarray(observed, dtype=np.float64)
    return float(np.sum((observed - expected) ** 2 / expected))


def gaussian_template(shape, center, sigma):
    """
    Unit-sum Gaussian over a window of `shape`, centered at `center` in window coordinates.
    """
    (rows, cols), (dx, dy) = shape, center
    i = np.arange(rows, dtype=np.float64)[:, None] - dx
    j = np.arange(cols, dtype=np.float64)[None, :] - dy
    t = np.maximum(np.exp(-(i ** 2 + j ** 2) / (2.0 * sigma ** 2)), TEMPLATE_FLOOR)
    return t / t.sum()


def chi_square_table(nh, center, s, sigma_grid):
    """
    Chi-square statistic of the heatmap window against a Gaussian template, for every sigma in the grid.
    The window is (2s+1)^2 around the rounded center, clipped to the grid, and both sides are
    renormalized over it.

    :returns: list of (sigma, statistic)
    """
    if not sigma_grid:
        raise ValueError("sigma grid is empty")
    bounds = window_bounds(nh.shape, center, int(s))
    if bounds is None:
        raise ValueError("window around %s misses the %dx%d grid" % (tuple(center), nh.rows, nh.cols))
    r0, r1, c0, c1 = bounds
    window = nh.values[r0:r1+1, c0:c1+1]
    total = window.sum()
    if not total > 0:
        raise ValueError("heatmap window holds no mass")
    observed = window / total
    cx, cy = round_half_up(center[0]), round_half_up(center[1])
    table = [ ]
    for sigma in sigma_grid:
        if not sigma > 0:
            raise ValueError("template sigma must be positive, got %r" % (sigma,))
        expected = gaussian_template(observed.shape, (cx - r0, cy - c0), sigma)
        table.append((float(sigma), chi_square_statistic(observed, expected)))
    return table


def chi_square_best_sigma(nh, center, s, sigma_grid):
    """
    The template sigma with the lowest chi-square statistic; ties go to the earlier grid entry.

    :returns: (sigma, statistic)
    """
    return min(chi_square_table(nh, center, s, sigma_grid), key=lambda row: row[1])


from .heatmaps import Joint2D, SupportRegion, window_bounds
from .utils import child_rngs, parallel_map, round_half_up
