import os
from concurrent.futures import ThreadPoolExecutor


def nd_threads() -> int:
    try:
        return max(1, int(os.environ.get("ND_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """Ordered map, fanned out over ND_THREADS worker threads."""
    items = list(items)
    k = nd_threads()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))
