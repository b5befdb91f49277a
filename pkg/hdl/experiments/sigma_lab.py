import logging

import numpy as np

l = logging.getLogger("hdl.experiments.sigma_lab")

from . import Experiment
from ..config import SigmaLabConfig

RESIDUAL_LIMIT = 1e-6


class SigmaLabResults:
    stars = None
    failures = None


class SigmaLabExperiment(Experiment):
    """
    Solves for the optimal heatmap spread over a grid of annotation spreads and mean displacements,
    cross-checks each solution against the closed form and a grid scan, and tabulates D_B curves.
    """
    NAME = "sigma-lab"
    CONFIG = SigmaLabConfig

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if not 0 < c.sigma_min < c.sigma_max or c.points < 2:
            raise ConfigError("need 0 < sigma_min < sigma_max and at least 2 points")
        if any(not s > 0 for s in c.sigma_trues) or any(d < 0 for d in c.delta_mus):
            raise ConfigError("sigma_trues must be positive and delta_mus nonnegative")
        grid = np.linspace(c.sigma_min, c.sigma_max, c.points)
        spacing = grid[1] - grid[0]

        rows, curves, stars, failures = [ ], { }, { }, [ ]
        for sigma_true in c.sigma_trues:
            for delta_mu in c.delta_mus:
                label = "sigma_true=%g,delta_mu=%g" % (sigma_true, delta_mu)
                star = optimal_sigma(sigma_true, delta_mu)
                closed = optimal_sigma_closed_form(sigma_true, delta_mu)
                residual = abs(db_derivative(star, sigma_true, delta_mu))
                curve = db_curve(sigma_true, delta_mu, grid)
                scan = float(grid[int(np.argmin(curve))])
                rows.append((sigma_true, delta_mu, star, closed, residual, scan))
                curves[label] = curve
                stars[label] = (star, bhattacharyya_distance(star, sigma_true, delta_mu))

                if residual >= RESIDUAL_LIMIT:
                    failures.append("%s: derivative residual %g" % (label, residual))
                if delta_mu == 0 and star != sigma_true:
                    failures.append("%s: sigma*=%r differs from sigma_true" % (label, star))
                if delta_mu > 0 and not star > sigma_true:
                    failures.append("%s: sigma*=%r not above sigma_true" % (label, star))
                if c.sigma_min <= star <= c.sigma_max and abs(scan - star) > spacing:
                    failures.append("%s: grid scan argmin %g is far from sigma*=%g" % (label, scan, star))

        write_rows(self.path("sigma_star.csv"), ("sigma_true", "delta_mu", "sigma_star", "closed_form", "residual", "grid_argmin"), rows)
        labels = list(curves)
        write_rows(
            self.path("db_curves.csv"), ["sigma_hat"] + labels,
            ([ s ] + [ curves[k][n] for k in labels ] for n, s in enumerate(grid)),
        )
        plot_sigma_lab(grid, curves, stars, self.path("db_curves.svg"))
        self.write_summary({
            'sigma_star': { k: v[0] for k, v in stars.items() },
            'failures': failures,
        })
        if failures:
            raise VerificationError("; ".join(failures))

        r = SigmaLabResults()
        r.stars = stars
        r.failures = failures
        return r


from ..errors import ConfigError, VerificationError
from ..plots import plot_sigma_lab
from ..theory import bhattacharyya_distance, db_curve, db_derivative, optimal_sigma, optimal_sigma_closed_form
from ..utils import write_rows
