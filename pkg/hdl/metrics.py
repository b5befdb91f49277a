import logging
import json
from collections import namedtuple

import numpy as np

l = logging.getLogger("hdl.metrics")

DIFFICULTIES = ("easy", "medium", "hard")
UNCLASSIFIED = "unclassified"
SIZE_BINS = (">128", "96-128", "64-96", "32-64")

# COCO visibility flags
V_ABSENT, V_OCCLUDED, V_VISIBLE = 0, 1, 2

DepthSample = namedtuple("DepthSample", ["depth_at_uv", "z", "delta"], defaults=(3.0,))
Difficulty = namedtuple("Difficulty", ["joints", "occlusion", "size", "combined"])
AnnotatedJoint = namedtuple("AnnotatedJoint", ["joint", "present", "occluded"])


class AnnotationRecord:
    def __init__(self, joints, bbox_w, bbox_h, id=None): #pylint:disable=redefined-builtin
        self.id = id
        self.joints = list(joints)
        self.bbox_w = bbox_w
        self.bbox_h = bbox_h

    @property
    def n_present(self):
        return sum(1 for j in self.joints if j.present)

    @property
    def n_occluded(self):
        return sum(1 for j in self.joints if j.present and j.occluded)

    @property
    def occlusion_ratio(self):
        n = self.n_present
        return self.n_occluded / n if n else None

    @property
    def size(self):
        return max(self.bbox_w, self.bbox_h)

    def __repr__(self):
        return "<AnnotationRecord %s: %d joints, bbox %gx%g>" % (self.id, self.n_present, self.bbox_w, self.bbox_h)


def epe(pred, gt):
    return float(np.hypot(pred[0] - gt[0], pred[1] - gt[1]))


def mean_epe(preds, gts):
    if len(preds) != len(gts):
        raise ValueError("got %d predictions for %d ground-truth joints" % (len(preds), len(gts)))
    if not preds:
        raise ValueError("no joints to evaluate")
    return float(np.mean([ epe(p, g) for p, g in zip(preds, gts) ]))


def pck(preds, gts, norm_length, threshold=0.5):
    """
    Fraction of predictions within threshold * norm_length of their ground truth.
    """
    if len(preds) != len(gts):
        raise ValueError("got %d predictions for %d ground-truth joints" % (len(preds), len(gts)))
    if not preds:
        raise ValueError("no joints to evaluate")
    limit = threshold * norm_length
    return sum(1 for p, g in zip(preds, gts) if epe(p, g) <= limit) / len(preds)


#
# Difficulty splits. Shared boundary values go to the harder bin.
#

def joints_bin(n):
    if 11 <= n <= 17:
        return "easy"
    if 6 <= n <= 10:
        return "medium"
    if 1 <= n <= 5:
        return "hard"
    return UNCLASSIFIED


def occlusion_bin(ratio):
    if ratio is None:
        return UNCLASSIFIED
    if ratio < 0.1:
        return "easy"
    if ratio < 0.5:
        return "medium"
    return "hard"


def size_difficulty(m):
    if m > 128:
        return "easy"
    if m > 64:
        return "medium"
    if m >= 32:
        return "hard"
    return UNCLASSIFIED


def size_bin(ar):
    """
    The finer input-size bins used for the split count tables.
    """
    m = ar.size
    if m > 128:
        return ">128"
    if m > 96:
        return "96-128"
    if m > 64:
        return "64-96"
    if m >= 32:
        return "32-64"
    return UNCLASSIFIED


def difficulty(ar):
    """
    Per-factor labels and the combined label, which is only set when all three factors agree.

    :rtype: Difficulty
    """
    j = joints_bin(ar.n_present)
    o = occlusion_bin(ar.occlusion_ratio)
    s = size_difficulty(ar.size)
    combined = j if j == o == s and j != UNCLASSIFIED else UNCLASSIFIED
    return Difficulty(j, o, s, combined)


def visibility(ds):
    return "visible" if abs(ds.depth_at_uv - ds.z) < ds.delta else "occluded"


#
# Record files: JSON Lines, one object per line
#

def _records(path):
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as e:
                raise RecordError("%s:%d: %s" % (path, lineno, e)) from e


def parse_annotation(obj, where="record"):
    try:
        joints = [ ]
        for x, y, v in obj['joints']:
            if v not in (V_ABSENT, V_OCCLUDED, V_VISIBLE):
                raise RecordError("%s: visibility flag must be 0, 1 or 2, got %r" % (where, v))
            joints.append(AnnotatedJoint(Joint2D(float(x), float(y)), v != V_ABSENT, v == V_OCCLUDED))
        w, h = obj['bbox']
        return AnnotationRecord(joints, float(w), float(h), id=str(obj['id']))
    except (KeyError, TypeError, ValueError) as e:
        raise RecordError("%s: malformed annotation (%s)" % (where, e)) from e


def read_annotations(path):
    records = [ parse_annotation(obj, "%s:%d" % (path, lineno)) for lineno, obj in _records(path) ]
    ids = [ r.id for r in records ]
    if len(set(ids)) != len(ids):
        raise RecordError("%s: duplicate record ids" % path)
    l.info("read %d annotation records from %s", len(records), path)
    return records


def read_predictions(path):
    """
    :returns: dict of record id to list of Joint2D
    """
    preds = { }
    for lineno, obj in _records(path):
        try:
            preds[str(obj['id'])] = [ Joint2D(float(x), float(y)) for x, y in obj['joints'] ]
        except (KeyError, TypeError, ValueError) as e:
            raise RecordError("%s:%d: malformed prediction (%s)" % (path, lineno, e)) from e
    return preds


def record_epes(ar, pred):
    """
    EPE of every present joint of a record.
    """
    if len(pred) != len(ar.joints):
        raise RecordError("record %s has %d joints but its prediction has %d" % (ar.id, len(ar.joints), len(pred)))
    return [ epe(p, a.joint) for p, a in zip(pred, ar.joints) if a.present ]


from .errors import RecordError
from .heatmaps import Joint2D
