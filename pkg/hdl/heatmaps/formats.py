"""
On-disk heatmap formats.

- CSV: one grid row per line, decimal floats.
- HMAP: b"HMAP", rows and cols as little-endian uint32, then rows*cols little-endian float64, row-major.
"""
import logging
import struct
import csv
import os

import numpy as np

l = logging.getLogger("hdl.heatmaps.formats")

MAGIC = b"HMAP"
_HEADER = struct.Struct("<4sII")


def write_csv(h, path):
    with atomic_output(path) as f:
        w = csv.writer(f, lineterminator="\n")
        for row in h.values:
            w.writerow([ repr(float(v)) for v in row ])


def read_csv(path):
    with open(path, newline='') as f:
        rows = [ r for r in csv.reader(f) if r ]
    if not rows:
        raise HeatmapError("%s: empty heatmap file" % path)
    if len({ len(r) for r in rows }) != 1:
        raise HeatmapError("%s: rows have different lengths" % path)
    try:
        values = [ [ float(c) for c in r ] for r in rows ]
    except ValueError as e:
        raise HeatmapError("%s: %s" % (path, e)) from e
    return Heatmap(values)


def write_binary(h, path):
    with atomic_output(path, 'wb') as f:
        f.write(_HEADER.pack(MAGIC, h.rows, h.cols))
        f.write(np.ascontiguousarray(h.values, dtype="<f8").tobytes())


def read_binary(path):
    with open(path, 'rb') as f:
        data = f.read()
    if len(data) < _HEADER.size:
        raise HeatmapError("%s: truncated header" % path)
    magic, rows, cols = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise HeatmapError("%s: bad magic %r" % (path, magic))
    expected = _HEADER.size + 8 * rows * cols
    if len(data) != expected:
        raise HeatmapError("%s: expected %d bytes for a %dx%d grid, found %d" % (path, expected, rows, cols, len(data)))
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(rows, cols)
    return Heatmap(values)


def _is_csv(path):
    return os.path.splitext(path)[1].lower() == ".csv"


def load(path):
    """
    Reads a heatmap, choosing the format from the extension (.csv is text, anything else HMAP).
    """
    return read_csv(path) if _is_csv(path) else read_binary(path)


def save(h, path):
    if _is_csv(path):
        write_csv(h, path)
    else:
        write_binary(h, path)


from ..errors import HeatmapError
from ..utils import atomic_output
from . import Heatmap
