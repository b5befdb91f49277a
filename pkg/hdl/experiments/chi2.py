import logging
import os

l = logging.getLogger("hdl.experiments.chi2")

from . import Experiment
from ..config import Chi2Config


class Chi2Results:
    tables = None
    best = None


class Chi2Experiment(Experiment):
    """
    Matches each heatmap's window around its peak against Gaussian templates of several spreads.
    With no heatmap files it synthesizes softmax-normalized Gaussian targets to match against.
    """
    NAME = "chi2"
    CONFIG = Chi2Config

    def heatmaps(self):
        c = self.config
        if c.heatmaps:
            for path in c.heatmaps:
                yield os.path.basename(path), load(path)
        else:
            center = Joint2D(float(c.rows // 2), float(c.cols // 2))
            for sigma in c.synth_sigmas:
                yield "gaussian_sigma=%g" % sigma, gaussian_heatmap(c.rows, c.cols, GaussianSpec(center, sigma))

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if c.s < 0 or not c.beta > 0:
            raise ConfigError("s must be nonnegative and beta positive")
        tables, best = { }, { }
        try:
            for name, h in self.heatmaps():
                nh = softmax_normalize(h, c.beta)
                tables[name] = chi_square_table(nh, argmax_decode(h), c.s, list(c.sigma_grid))
                best[name] = min(tables[name], key=lambda row: row[1])
                l.debug("%s: best sigma %g (statistic %g)", name, *best[name])
        except ValueError as e:
            raise ConfigError(str(e)) from e

        header = ["heatmap"] + [ "sigma=%g" % s for s in c.sigma_grid ] + ["best_sigma"]
        write_rows(
            self.path("chi2.csv"), header,
            ([ name ] + [ stat for _, stat in table ] + [ best[name][0] ] for name, table in tables.items()),
        )
        self.write_summary({ name: {'best_sigma': b[0], 'statistic': b[1]} for name, b in best.items() })

        r = Chi2Results()
        r.tables = tables
        r.best = best
        return r


from ..decoding import argmax_decode
from ..errors import ConfigError
from ..heatmaps import GaussianSpec, Joint2D, gaussian_heatmap, softmax_normalize
from ..heatmaps.formats import load
from ..theory import chi_square_table
from ..utils import write_rows
