""" file:    utilities.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Small helpers shared by the solver modules
"""

import time
from contextlib import contextmanager
import concurrent.futures

import numpy as np


@contextmanager
def timed(timings, key):
    """
    Accumulate the wall time of a block into a dictionary

    Parameters:
        timings - a dict mapping names to accumulated seconds
        key - the entry to add to (created if missing)
    """
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[key] = timings.get(key, 0.0) + time.perf_counter() - start


def chunks(n_items, chunk_size):
    """
    Split range(n_items) into consecutive slices

    Parameters:
        n_items - the number of items
        chunk_size - the maximum number of items per slice

    Returns:
        a list of slice objects covering [0, n_items)
    """
    chunk_size = max(int(chunk_size), 1)
    return [slice(start, min(start + chunk_size, n_items))
            for start in range(0, n_items, chunk_size)]


def ordered_map(func, items, threads=1):
    """
    Map a function over items, optionally on a thread pool

    Results always come back in input order, so any reduction over them is
    independent of the number of workers.

    Parameters:
        func - the function to apply
        items - an iterable of arguments
        threads - the number of workers. Optional, defaults to 1 which runs
            everything in the calling thread.

    Returns:
        a list of results
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def relative_difference(actual, expected):
    """
    Return ||actual - expected|| / ||expected|| (or the absolute norm if expected is zero)
    """
    actual, expected = np.asarray(actual), np.asarray(expected)
    scale = np.linalg.norm(expected)
    diff = np.linalg.norm(actual - expected)
    return diff / scale if scale > 0 else diff
