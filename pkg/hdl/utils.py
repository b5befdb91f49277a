import contextlib
import tempfile
import logging
import os

import numpy as np

l = logging.getLogger("hdl.utils")


def round_half_up(v):
    """
    Nearest integer pixel, halves rounded up (Python's round() rounds halves to even).
    """
    return int(np.floor(v + 0.5))


def thread_count(requested=None):
    """
    Resolve the worker count: explicit request, then HDL_THREADS, then 1.
    """
    if requested is None:
        env = os.environ.get("HDL_THREADS")
        if not env:
            return 1
        try:
            requested = int(env)
        except ValueError:
            l.warning("ignoring non-integer HDL_THREADS=%r", env)
            return 1
    return max(1, int(requested))


def child_rngs(seed, n):
    """
    n independent generators derived from one seed. The i-th generator does not depend on n's
    scheduling, so trial results are identical whatever the thread count.
    """
    return [ np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n) ]


def parallel_map(fn, items, threads=1):
    """
    Ordered map, optionally over a thread pool.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [ fn(i) for i in items ]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@contextlib.contextmanager
def atomic_output(path, mode='w'):
    """
    Yields a file object; on a clean exit the file atomically replaces `path`.

    :param str path: destination
    :param str mode: 'w' for text, 'wb' for bytes
    """
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=dirname, prefix=".hdl-", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({'newline': ''} if 'b' not in mode else {})) as f:
            yield f
        os.replace(tmp_path, path)
        l.info("wrote %s", path)
    finally:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp_path)


def write_text(path, text):
    with atomic_output(path) as f:
        f.write(text)


def write_rows(path, header, rows):
    """
    Writes a CSV table. Floats are formatted with repr-exact '%.17g' so reruns are byte-identical
    and nothing is lost on re-reading.
    """
    import csv
    with atomic_output(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([ format_cell(c) for c in row ])


def format_cell(c):
    if isinstance(c, (bool, np.bool_)):
        return "1" if c else "0"
    if isinstance(c, (float, np.floating)):
        return "%.17g" % c
    if c is None:
        return ""
    return str(c)
