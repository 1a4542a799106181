# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import logging
import os
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


def default_workers():
    return os.cpu_count() or 1


def ordered_map(func, items, workers=1):
    """
    Applies func to every item, in worker processes when workers > 1.

    :param func: a module-level callable (it is pickled for the workers)
    :param items: iterable of picklable arguments
    :param int workers: process count, None for one per CPU
    :return list: results in the order of items
    """
    items = list(items)
    if workers is None:
        workers = default_workers()

    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    workers = min(workers, len(items))
    logger.debug("Mapping %d item(s) over %d worker(s)", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
