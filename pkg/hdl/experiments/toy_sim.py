import logging

l = logging.getLogger("hdl.experiments.toy_sim")

from . import Experiment
from ..config import ToySimConfig


class ToySimResults:
    traces = None
    summary = None


class ToySimExperiment(Experiment):
    """
    Runs every init case under every configured loss and records the trajectories.
    """
    NAME = "toy-sim"
    CONFIG = ToySimConfig

    def sim_configs(self):
        c = self.config
        for case in c.cases:
            for loss_kind in c.losses:
                yield SimConfig(
                    rows=c.rows, cols=c.cols, gamma=c.gamma, beta=c.beta, iterations=c.iterations,
                    loss_kind=loss_kind, init_case=case, j_gt=tuple(c.j_gt), seed=c.seed,
                    reg_weight=c.reg_weight, tau=c.tau, t_o=c.t_o, epoch_length=c.epoch_length,
                    snapshots=tuple(c.snapshots), ground_truth_sigma=c.ground_truth_sigma,
                ).validate()

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if c.snapshot_format not in ("csv", "hmap"):
            raise ConfigError("snapshot_format must be csv or hmap, got %r" % c.snapshot_format)
        if len(c.j_gt) != 2:
            raise ConfigError("j_gt must have two coordinates")
        try:
            configs = list(self.sim_configs())
        except ValueError as e:
            raise ConfigError(str(e)) from e

        traces = parallel_map(run, configs, self.threads)
        runs = { }
        summary = { }
        for sc, trace in zip(configs, traces):
            key = "%s_%s" % (sc.init_case, sc.loss_kind)
            runs.setdefault(sc.init_case, { })[sc.loss_kind] = trace
            write_rows(self.path("trace_%s.csv" % key), TraceRow._fields, trace.rows)
            for n, h in sorted(trace.snapshots.items()):
                save(h, self.path("snapshot_%s_%03d.%s" % (key, n, c.snapshot_format)))
            last = trace.rows[-1]
            summary[key] = {
                'iterations_run': last.iter,
                'iterations_to_reach': trace.iterations_to_reach(c.eps),
                'iterations_to_argmax': trace.iterations_to_argmax(),
                'final_a_s2': last.a_s2,
                'final_dist': last.dist,
                'final_loss': last.loss,
                'stopped': trace.stopped,
            }

        plot_trajectories(runs, c.j_gt, c.rows, c.cols, self.path("trajectories.svg"))

        # how localized the near-ground-truth start ends up with and without compensation
        case4 = runs.get("case4_near_gaussian", { })
        if "regression" in case4 and "debiased_regression" in case4:
            un, comp = case4["regression"].rows[-1], case4["debiased_regression"].rows[-1]
            summary['case4_collapse'] = {
                'a_s2_uncompensated': un.a_s2,
                'a_s2_compensated': comp.a_s2,
                'dist_uncompensated': un.dist,
                'dist_compensated': comp.dist,
                'uncompensated_more_localized': un.a_s2 > comp.a_s2,
            }
        self.write_summary(summary)

        r = ToySimResults()
        r.traces = runs
        r.summary = summary
        return r


from ..errors import ConfigError
from ..heatmaps.formats import save
from ..plots import plot_trajectories
from ..sim import SimConfig, TraceRow, run
from ..utils import parallel_map, write_rows
