import logging

import numpy as np

l = logging.getLogger("hdl.experiments.split")

from . import Experiment
from ..config import SplitConfig

RECORD_HEADER = ("id", "joints", "occlusion_ratio", "size", "joints_bin", "occlusion_bin", "size_bin", "size_difficulty", "combined", "epe")


class SplitResults:
    records = None
    joints_size = None
    joints_occlusion = None


def count_matrix(labels, row_key, col_key, row_bins, col_bins):
    counts = [ [ 0 ] * len(col_bins) for _ in row_bins ]
    for lab in labels:
        r, c = lab[row_key], lab[col_key]
        if r in row_bins and c in col_bins:
            counts[row_bins.index(r)][col_bins.index(c)] += 1
    return counts


def epe_matrix(labels, row_key, col_key, row_bins, col_bins):
    """
    Mean EPE over all present joints of the records in each cell, or None for an empty cell.
    """
    cells = [ [ [ ] for _ in col_bins ] for _ in row_bins ]
    for lab in labels:
        r, c = lab[row_key], lab[col_key]
        if lab['epes'] and r in row_bins and c in col_bins:
            cells[row_bins.index(r)][col_bins.index(c)].extend(lab['epes'])
    return [ [ float(np.mean(cell)) if cell else None for cell in row ] for row in cells ]


class SplitExperiment(Experiment):
    """
    Splits annotation records into difficulty bins and tabulates counts, plus per-cell EPE when
    predictions are given.
    """
    NAME = "split"
    CONFIG = SplitConfig

    def fire(self): #pylint:disable=arguments-differ
        c = self.config
        if not c.annotations:
            raise ConfigError("split needs an annotations file")
        records = read_annotations(c.annotations)
        preds = read_predictions(c.predictions) if c.predictions else None

        labels = [ ]
        for ar in records:
            d = difficulty(ar)
            epes = None
            if preds is not None:
                if ar.id not in preds:
                    raise RecordError("no prediction for record %s" % ar.id)
                epes = record_epes(ar, preds[ar.id])
            labels.append({
                'id': ar.id, 'joints': d.joints, 'occlusion': d.occlusion, 'size': size_bin(ar),
                'size_difficulty': d.size, 'combined': d.combined, 'epes': epes,
                'row': (ar.id, ar.n_present, ar.occlusion_ratio, ar.size, d.joints, d.occlusion, size_bin(ar), d.size, d.combined,
                        float(np.mean(epes)) if epes else None),
            })
        write_rows(self.path("split_records.csv"), RECORD_HEADER, [ lab['row'] for lab in labels ])

        difficulties = list(DIFFICULTIES)
        sizes = list(SIZE_BINS)
        joints_size = count_matrix(labels, 'joints', 'size', difficulties, sizes)
        joints_occlusion = count_matrix(labels, 'joints', 'occlusion', difficulties, difficulties)
        write_rows(self.path("split_joints_size.csv"), ["joints"] + sizes, ([ d ] + row for d, row in zip(difficulties, joints_size)))
        write_rows(self.path("split_joints_occlusion.csv"), ["joints"] + difficulties, ([ d ] + row for d, row in zip(difficulties, joints_occlusion)))

        summary = {
            'records': len(records),
            'combined': { k: sum(1 for lab in labels if lab['combined'] == k) for k in difficulties + [UNCLASSIFIED] },
        }
        if preds is not None:
            epe_size = epe_matrix(labels, 'joints', 'size', difficulties, sizes)
            epe_occlusion = epe_matrix(labels, 'joints', 'occlusion', difficulties, difficulties)
            write_rows(self.path("split_epe_joints_size.csv"), ["joints"] + sizes, ([ d ] + row for d, row in zip(difficulties, epe_size)))
            write_rows(self.path("split_epe_joints_occlusion.csv"), ["joints"] + difficulties, ([ d ] + row for d, row in zip(difficulties, epe_occlusion)))
            all_epes = [ e for lab in labels for e in lab['epes'] ]
            summary['mean_epe'] = float(np.mean(all_epes)) if all_epes else None
        self.write_summary(summary)

        r = SplitResults()
        r.records = labels
        r.joints_size = joints_size
        r.joints_occlusion = joints_occlusion
        return r


from ..errors import ConfigError, RecordError
from ..metrics import DIFFICULTIES, SIZE_BINS, UNCLASSIFIED, difficulty, read_annotations, read_predictions, record_epes, size_bin
from ..utils import write_rows
