"""
Toy heatmap dynamics: h <- h - gamma * dL/dh on a single heatmap, with no network in between.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

l = logging.getLogger("hdl.sim")

LOSS_KINDS = ("regression", "debiased_regression", "detection", "bcir")
DIVERGENCE_LIMIT = 1e6


@dataclass
class SimConfig:
    rows: int = 64
    cols: int = 48
    gamma: float = 0.5
    beta: float = 10.0
    iterations: int = 100
    loss_kind: str = "regression"
    init_case: str = "case1_random"
    j_gt: tuple = (48.0, 36.0)
    seed: int = 0
    reg_weight: float = 0.0
    tau: float = 0.0
    t_o: int = 120
    epoch_length: int = 1
    snapshots: tuple = field(default_factory=lambda: (0, 5, 10, 15, 20))
    ground_truth_sigma: float = 2.0

    def validate(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive, got %r" % (self.gamma,))
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1, got %r" % (self.iterations,))
        if self.loss_kind not in LOSS_KINDS:
            raise ValueError("unknown loss kind %r" % (self.loss_kind,))
        if self.init_case not in CASES:
            raise ValueError("unknown init case %r" % (self.init_case,))
        if self.epoch_length < 1:
            raise ValueError("epoch_length must be at least 1, got %r" % (self.epoch_length,))
        return self


class Simulator:
    """
    Runs one trajectory. The gradient for each loss kind is the analytic one from hdl.gradients.
    """

    def __init__(self, cfg):
        self.cfg = cfg.validate()
        self.j_gt = Joint2D(*map(float, cfg.j_gt))
        self.h_gt = gaussian_heatmap(cfg.rows, cfg.cols, GaussianSpec(self.j_gt, cfg.ground_truth_sigma))
        self.sched = Schedule(cfg.t_o)
        self.reg_cfg = RegularizerConfig(tau=cfg.tau)

    def epoch(self, n):
        return n // self.cfg.epoch_length

    def gradient(self, h, n):
        c = self.cfg
        if c.loss_kind == "detection":
            return detection_gradient(h, self.h_gt)
        elif c.loss_kind == "regression":
            return regression_gradient(h, c.beta, self.j_gt)
        elif c.loss_kind == "debiased_regression":
            return debiased_regression_gradient(h, c.beta, self.j_gt)
        else:
            return bcir_gradient(h, c.beta, self.j_gt, self.h_gt, self.epoch(n), self.sched, c.reg_weight, self.reg_cfg)

    def observe(self, h, n, grad):
        c = self.cfg
        j_re, bm = soft_argmax_decode(h, c.beta)
        j_am = argmax_decode(h)
        if c.loss_kind == "detection":
            loss = detection_loss(h, self.h_gt)
            j_soft, own = j_re, j_am
        elif c.loss_kind == "regression":
            loss = regression_loss(j_re, self.j_gt)
            j_soft = own = j_re
        else:
            j_soft = own = compensate(j_re, bm)
            loss = regression_loss(j_soft, self.j_gt)
            if c.loss_kind == "bcir":
                loss = bcir_loss(h, c.beta, self.j_gt, self.h_gt, self.epoch(n), self.sched, c.reg_weight, self.reg_cfg)
        a_s2 = activation_sum(softmax_normalize(h, c.beta), self.j_gt, 2)
        return TraceRow(
            n, j_soft.x, j_soft.y, j_am.x, j_am.y, loss, a_s2,
            float(np.max(np.abs(grad.grad))), regression_loss(own, self.j_gt),
        )

    def run(self):
        c = self.cfg
        trace = SimTrace(c)
        h = init_case(c)
        try:
            grad = self.gradient(h, 0)
            self._record(trace, h, 0, grad)
            for n in range(1, c.iterations + 1):
                values = h.values - c.gamma * grad.grad
                peak = np.max(np.abs(values))
                if not np.isfinite(peak) or peak > DIVERGENCE_LIMIT:
                    trace.stopped = "diverged at iteration %d (max |h| = %g)" % (n, peak)
                    l.warning("%s/%s: %s", c.init_case, c.loss_kind, trace.stopped)
                    break
                h = Heatmap(values)
                grad = self.gradient(h, n)
                self._record(trace, h, n, grad)
        except DegenerateBiasError as e:
            trace.stopped = "degenerate bias at iteration %d: %s" % (len(trace), e)
            l.warning("%s/%s: %s", c.init_case, c.loss_kind, trace.stopped)
        trace.final = h
        return trace

    def _record(self, trace, h, n, grad):
        row = self.observe(h, n, grad)
        trace.rows.append(row)
        if n in self.cfg.snapshots:
            trace.snapshots[n] = h
        l.debug("%s/%s %r", self.cfg.init_case, self.cfg.loss_kind, row)


def run(cfg):
    """
    Runs one trajectory for cfg.

    :rtype: SimTrace
    """
    return Simulator(cfg).run()


from ..errors import DegenerateBiasError
from ..heatmaps import GaussianSpec, Heatmap, Joint2D, activation_sum, gaussian_heatmap, softmax_normalize
from ..decoding import argmax_decode, compensate, soft_argmax_decode
from ..losses import RegularizerConfig, Schedule, bcir_loss, detection_loss, regression_loss
from ..gradients import bcir_gradient, debiased_regression_gradient, detection_gradient, regression_gradient
from .cases import CASES, init_case
from .trace import SimTrace, TraceRow
