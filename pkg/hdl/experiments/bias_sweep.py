import logging
import math

import numpy as np

l = logging.getLogger("hdl.experiments.bias_sweep")

from . import Experiment
from ..config import BiasSweepConfig

HEADER = ("sigma", "beta", "mu_x", "mu_y", "raw_x", "raw_y", "comp_x", "comp_y", "raw_err", "comp_err")


class BiasSweepResults:
    rows = None
    mean_errors = None


def quadrant_positions(n, radius, step):
    """
    Integer blob centers whose support [c - radius, c + radius] stays inside one half of an axis of
    length n, mirrored into the other half.
    """
    half = n // 2
    first = list(range(radius, half - radius, step))
    return sorted(first + [ n - 1 - p for p in first ])


def decreases_with_beta(betas, errors):
    """
    True when errors strictly fall along increasing beta. Repeated betas are not compared.
    """
    order = np.argsort(betas, kind="stable")
    return all(
        errors[a] > errors[b] or betas[a] == betas[b]
        for a, b in zip(order, order[1:])
    )


class BiasSweepExperiment(Experiment):
    """
    Decodes truncated Gaussian blobs confined to one quadrant at every configured beta, and compares the
    raw soft-argmax with the compensated decode against the blob's own center.
    """
    NAME = "bias-sweep"
    CONFIG = BiasSweepConfig

    def cell(self, sigma, beta, mu):
        c = self.config
        radius = int(math.ceil(c.truncate * sigma))
        h = gaussian_heatmap(c.rows, c.cols, GaussianSpec(mu, sigma), truncate=radius)
        oracle = support_expectation(h, beta)
        j_re, bm = soft_argmax_decode(h, beta)
        j_ro = compensate(j_re, bm)
        raw = math.hypot(j_re.x - oracle.x, j_re.y - oracle.y)
        comp = math.hypot(j_ro.x - oracle.x, j_ro.y - oracle.y)
        return (sigma, beta, oracle.x, oracle.y, j_re.x, j_re.y, j_ro.x, j_ro.y, raw, comp)

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if c.step < 1 or not c.truncate > 0:
            raise ConfigError("step must be >= 1 and truncate > 0")
        jobs = [ ]
        for sigma in c.sigmas:
            radius = int(math.ceil(c.truncate * sigma))
            xs = quadrant_positions(c.rows, radius, c.step)
            ys = quadrant_positions(c.cols, radius, c.step)
            if not xs or not ys:
                raise ConfigError("a sigma=%g blob does not fit inside a quadrant of %dx%d" % (sigma, c.rows, c.cols))
            for beta in c.betas:
                jobs.extend((sigma, beta, Joint2D(float(x), float(y))) for x in xs for y in ys)

        try:
            rows = parallel_map(lambda job: self.cell(*job), jobs, self.threads)
        except DegenerateBiasError as e:
            raise ConfigError("cannot compensate at the configured betas: %s" % e) from e
        write_rows(self.path("bias_sweep.csv"), HEADER, rows)

        mean_errors = { }
        series = { }
        for sigma in c.sigmas:
            raw_means, comp_means = [ ], [ ]
            for beta in c.betas:
                cells = [ r for r in rows if r[0] == sigma and r[1] == beta ]
                raw_means.append(float(np.mean([ r[8] for r in cells ])))
                comp_means.append(float(np.mean([ r[9] for r in cells ])))
                mean_errors["sigma=%g,beta=%g" % (sigma, beta)] = {'raw': raw_means[-1], 'compensated': comp_means[-1]}
            series["sigma=%g" % sigma] = (raw_means, comp_means)
        plot_bias_sweep(list(c.betas), series, self.path("bias_sweep.svg"))

        decreasing = all(decreases_with_beta(c.betas, raw) for raw, _ in series.values())
        failures = [ r for r in rows if r[9] > r[8] ]
        self.write_summary({
            'cells': len(rows),
            'mean_errors': mean_errors,
            'raw_error_decreases_with_beta': decreasing,
            'compensated_worse_cells': len(failures),
            'max_compensated_error': max(r[9] for r in rows),
        })
        if failures:
            raise VerificationError("compensated error exceeds raw error in %d of %d cells" % (len(failures), len(rows)))
        if not decreasing:
            raise VerificationError("mean raw soft-argmax error does not fall as beta grows")

        r = BiasSweepResults()
        r.rows = rows
        r.mean_errors = mean_errors
        return r


from ..decoding import compensate, soft_argmax_decode, support_expectation
from ..errors import ConfigError, DegenerateBiasError, VerificationError
from ..heatmaps import GaussianSpec, Joint2D, gaussian_heatmap
from ..plots import plot_bias_sweep
from ..utils import parallel_map, write_rows
