"""Per-trial random substreams and a thread pool that preserves trial order.

Each trial's generator depends only on (master seed, stream tag, trial index),
so results do not depend on how trials are chunked or scheduled.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 256


def trial_rng(seed: int, trial: int, *tags: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(*tags, int(trial)))
    return np.random.Generator(np.random.PCG64(ss))


def worker_count() -> int:
    cap = os.environ.get("TOEPCOM_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def map_trials(fn, trials: int, chunk: int = CHUNK):
    """Call ``fn(start, stop)`` over consecutive trial ranges; return results in order."""
    ranges = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    workers = worker_count()
    if workers <= 1 or len(ranges) <= 1:
        return [fn(s, e) for s, e in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: fn(*r), ranges))
