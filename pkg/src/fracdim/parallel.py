"""Deterministic fan-out helper.

Results always come back in input order, so output is identical for any
thread count.
"""

from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, threads=None):
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
