import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "ENTANGLESWAP_THREADS"


def worker_count() -> int:
    """Workers allowed by ``ENTANGLESWAP_THREADS``; unset means serial."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(n, 1)


def map_ordered(fn, items, workers=None):
    """``list(map(fn, items))``, optionally threaded; result order is input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
