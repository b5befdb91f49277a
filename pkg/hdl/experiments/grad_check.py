import logging

l = logging.getLogger("hdl.experiments.grad_check")

from . import Experiment
from ..config import GradCheckConfig

HEADER = ("trial", "rows", "cols", "beta", "gradient", "max_abs_err", "max_rel_err", "passed")
# keep the L1 kink out of reach of the finite-difference step
MIN_DISPLACEMENT = 0.1


def random_target(rng, h, beta, convention="index"):
    """
    A ground-truth point at least MIN_DISPLACEMENT away, on both axes, from both the raw and the
    compensated decode of h.
    """
    j_re, bm = soft_argmax_decode(h, beta)
    j_ro = compensate(j_re, bm, convention)
    while True:
        j_gt = Joint2D(rng.uniform(0, h.rows - 1), rng.uniform(0, h.cols - 1))
        if all(abs(j[a] - j_gt[a]) > MIN_DISPLACEMENT for j in (j_re, j_ro) for a in (0, 1)):
            return j_gt


class GradCheckExperiment(Experiment):
    """
    Verifies the analytic gradients against central differences on random heatmaps.
    """
    NAME = "grad-check"
    CONFIG = GradCheckConfig

    def trial(self, args):
        k, rng = args
        c = self.config
        rows, cols = c.sizes[k % len(c.sizes)]
        beta = c.betas[(k // len(c.sizes)) % len(c.betas)]
        h = Heatmap(rng.random((rows, cols)))
        j_gt = random_target(rng, h, beta)

        checks = [
            ("regression", lambda x: regression_loss(soft_argmax_decode(x, beta)[0], j_gt), regression_gradient(h, beta, j_gt)),
            ("debiased_regression", lambda x: debiased_regression_loss(x, beta, j_gt), debiased_regression_gradient(h, beta, j_gt)),
        ]
        if c.regularizer:
            checks.append(("regularizer", lambda x: shrinkage_regularizer(softmax_normalize(x, beta)), regularizer_gradient(h, beta)))
        out = [ ]
        for name, loss, field in checks:
            r = finite_difference_check(loss, h, field, step=c.step, tol=c.tol)
            out.append((k, rows, cols, beta, name, r.max_abs_err, r.max_rel_err, r.passed))
        return out

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if c.trials < 1 or not c.sizes or not c.betas:
            raise ConfigError("need at least one trial, size and beta")
        if any(len(s) != 2 or min(s) < 3 for s in c.sizes):
            raise ConfigError("sizes must be [rows, cols] pairs of at least 3x3")
        rngs = child_rngs(c.seed, c.trials)
        rows = [ row for rs in parallel_map(self.trial, enumerate(rngs), self.threads) for row in rs ]
        write_rows(self.path("grad_check.csv"), HEADER, rows)

        failed = [ r for r in rows if not r[7] ]
        self.write_summary({
            'checks': len(rows),
            'failed': len(failed),
            'max_rel_err': max(r[6] for r in rows),
        })
        if failed:
            raise VerificationError("%d of %d gradient checks failed (worst relative error %g)" % (
                len(failed), len(rows), max(r[6] for r in failed)))
        return rows


from ..decoding import compensate, soft_argmax_decode
from ..errors import ConfigError, VerificationError
from ..gradients import debiased_regression_gradient, finite_difference_check, regression_gradient, regularizer_gradient
from ..heatmaps import Heatmap, Joint2D, softmax_normalize
from ..losses import debiased_regression_loss, regression_loss, shrinkage_regularizer
from ..utils import child_rngs, parallel_map, write_rows
