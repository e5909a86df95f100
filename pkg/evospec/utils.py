from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from tqdm import tqdm


class bcolors:
    HEADER = "\033[95m"
    OKBLUE = "\033[94m"
    OKGREEN = "\033[92m"
    WARNING = "\033[93m"
    FAIL = "\033[91m"
    ENDC = "\033[0m"
    BOLD = "\033[1m"
    UNDERLINE = "\033[4m"


def bold(x):
    return f"{bcolors.BOLD}{x}{bcolors.ENDC}"


def file_exists(file_path):
    """

    Check if a file exists.

    Args:
        file_path (str): path to the file

    """

    return Path(file_path).is_file()


def substream(seed, *keys):
    """

    Independent random stream for a (seed, key...) address.

    Streams are counter-based (Philox) and keyed by the full
    address, so replicate m draws the same numbers whether
    it runs first, last, or on another thread.

    Args:
        seed (int): master seed
        *keys (int): stream address below the seed, e.g. the
                     replicate index

    Returns:
        numpy Generator

    """

    entropy = [int(seed)] + [int(k) for k in keys]

    if any(e < 0 for e in entropy):
        raise ValueError("Seeds and stream keys must be nonnegative integers.")

    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def parallel_map(func, items, n_jobs=1, progress=False, desc=None):
    """

    Apply a function to every item, optionally on a thread pool.

    Output order always follows input order.

    Args:
        func (callable): function of one item
        items (iterable): inputs
        n_jobs (int): number of worker threads; 1 runs inline
        progress (bool): show a tqdm progress bar
        desc (str): progress bar label

    Returns:
        list of results

    """

    items = list(items)

    if n_jobs is None or n_jobs <= 1:
        iterator = map(func, items)
        if progress:
            iterator = tqdm(iterator, total=len(items), desc=desc)
        return list(iterator)

    with ThreadPoolExecutor(max_workers=n_jobs) as executor:
        iterator = executor.map(func, items)
        if progress:
            iterator = tqdm(iterator, total=len(items), desc=desc)
        return list(iterator)
