import logging
import json
import os

l = logging.getLogger("hdl.experiments")


class Experiment:
    """
    One subcommand of the lab. Subclasses name their config schema and implement fire(), which writes
    its files under config.out and returns a results object.
    """
    NAME = None
    CONFIG = None

    def __init__(self, config):
        """
        :param config: an instance of CONFIG
        """
        if self.CONFIG is not None and not isinstance(config, self.CONFIG):
            raise TypeError("%s needs a %s, got %s" % (type(self).__name__, self.CONFIG.__name__, type(config).__name__))
        self.config = config
        self.threads = thread_count(config.threads)
        os.makedirs(config.out, exist_ok=True)

    def path(self, name):
        return os.path.join(self.config.out, name)

    def write_summary(self, summary):
        write_text(self.path("summary.json"), json.dumps(summary, sort_keys=True, indent=2) + "\n")

    def fire(self):
        """
        Run the experiment.
        """
        raise NotImplementedError()


from ..utils import thread_count, write_text
from .toy_sim import ToySimExperiment
from .bias_sweep import BiasSweepExperiment
from .epe_verify import EpeVerifyExperiment
from .sigma_lab import SigmaLabExperiment
from .chi2 import Chi2Experiment
from .grad_check import GradCheckExperiment
from .split import SplitExperiment

EXPERIMENTS = { e.NAME: e for e in (
    ToySimExperiment, BiasSweepExperiment, EpeVerifyExperiment, SigmaLabExperiment,
    Chi2Experiment, GradCheckExperiment, SplitExperiment,
) }
