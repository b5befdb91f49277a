import logging
from collections import namedtuple

l = logging.getLogger("hdl.sim.trace")

TraceRow = namedtuple("TraceRow", ["iter", "jx_soft", "jy_soft", "jx_argmax", "jy_argmax", "loss", "a_s2", "grad_max", "dist"])


class SimTrace:
    """
    One trajectory of the toy update. Row n describes the heatmap after n updates and the gradient
    that was taken there; an undisturbed run has iterations + 1 rows.

    For the compensated losses jx_soft/jy_soft hold the compensated decode, which is what the loss
    sees. `dist` is the L1 distance of the loss's own decode (argmax for detection) to j_gt.
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self.rows = [ ]
        self.snapshots = { }
        self.final = None
        self.stopped = None

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, n):
        return self.rows[n]

    @property
    def diverged(self):
        return self.stopped is not None

    def iterations_to_reach(self, eps):
        """
        First iteration whose integral decode is within eps (L1) of j_gt, or None.
        """
        gx, gy = self.cfg.j_gt
        for r in self.rows:
            if abs(r.jx_soft - gx) + abs(r.jy_soft - gy) <= eps:
                return r.iter
        return None

    def iterations_to_argmax(self):
        """
        First iteration whose argmax is the ground-truth pixel, or None.
        """
        target = tuple(float(round_half_up(v)) for v in self.cfg.j_gt)
        for r in self.rows:
            if (r.jx_argmax, r.jy_argmax) == target:
                return r.iter
        return None


from ..utils import round_half_up
