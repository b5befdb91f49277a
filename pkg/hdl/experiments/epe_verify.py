import logging

l = logging.getLogger("hdl.experiments.epe_verify")

from . import Experiment
from ..config import EpeVerifyConfig


class EpeVerifyExperiment(Experiment):
    """
    Checks that detection's expected EPE never beats regression's under the localized model.
    Returns the EPEInequalityReport.
    """
    NAME = "epe-verify"
    CONFIG = EpeVerifyConfig

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if c.trials < 1:
            raise ConfigError("trials must be at least 1")
        try:
            report = verify_epe_inequality(c.trials, c.s_values, seed=c.seed, threads=self.threads)
        except ValueError as e:
            raise ConfigError(str(e)) from e

        s_of = [ c.s_values[k % len(c.s_values)] for k in range(c.trials) ]
        write_rows(self.path("epe_trials.csv"), ("trial", "s", "slack"), zip(range(c.trials), s_of, report.slacks))
        self.write_summary({
            'trials': report.trials,
            'violations': report.violations,
            'strict_failures': report.strict_failures,
            'min_slack': report.min_slack,
            'min_slack_positive_s': report.min_slack_positive_s,
        })
        if not report.passed:
            raise VerificationError("detection EPE fell below regression EPE in %d of %d trials" % (report.violations, report.trials))
        return report


from ..errors import ConfigError, VerificationError
from ..theory import verify_epe_inequality
from ..utils import write_rows
