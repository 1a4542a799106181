# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import logging

# 3rd party libraries
import numpy as np
from scipy import ndimage

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException
from lagbif.flow.model import Branch

logger = logging.getLogger(__name__)

# 4-connectivity; diagonal leaks through rasterized curves are not allowed
_STRUCTURE = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


def _cell(window, resolution, point):
    relative = (np.asarray(point) - window.lower) / (2.0 * window.half_widths)
    index = np.floor(relative * resolution).astype(int)
    if np.any(index < 0) or np.any(index >= resolution):
        return None
    return tuple(index)


def _rasterize(mask, window, resolution, polyline):
    cell_size = float(np.min(2.0 * window.half_widths / resolution))
    for a, b in zip(polyline[:-1], polyline[1:]):
        count = int(np.ceil(np.linalg.norm(b - a) / (0.25 * cell_size))) + 1
        for s in np.linspace(0.0, 1.0, count):
            cell = _cell(window, resolution, (1.0 - s) * a + s * b)
            if cell is not None:
                mask[cell] = True


def _labels_along(labels, window, resolution, polyline, skip):
    """
    Component labels of free cells visited by a trajectory, ignoring the first
    `skip` arclength units (the neighbourhood of its saddle).
    """
    found = set()
    travelled = 0.0
    for a, b in zip(polyline[:-1], polyline[1:]):
        travelled += float(np.linalg.norm(b - a))
        if travelled < skip:
            continue
        cell = _cell(window, resolution, b)
        if cell is not None and labels[cell] > 0:
            found.add(int(labels[cell]))
    return found


def phase_components(portrait, i, j, resolution=256):
    """
    Decides whether the unstable manifold of saddle i and the stable manifold of
    saddle j lie in one connected component of the fiber window once the other
    gradient lines are removed. A connection (i, j) can only appear when they do.

    :param PhasePortrait portrait: a portrait with separatrices
    :param int i: source saddle id
    :param int j: target saddle id
    :return bool: True when both manifolds reach a common component
    """
    if portrait.window is None:
        raise InvalidArgumentException("Portrait has no window")
    ids = [s.id for s in portrait.saddles]
    if i not in ids or j not in ids or i == j:
        raise InvalidArgumentException("({0}, {1}) is not a pair of distinct saddles".format(i, j))

    window = portrait.window
    obstacles = np.zeros((resolution, resolution), dtype=bool)
    source, target = [], []

    for s in portrait.separatrices:
        if s.saddle_id == i and Branch.is_unstable(s.branch):
            source.append(s.trajectory)
        elif s.saddle_id == j and not Branch.is_unstable(s.branch):
            target.append(s.trajectory)
        else:
            _rasterize(obstacles, window, resolution, s.trajectory)

    labels, count = ndimage.label(~obstacles, structure=_STRUCTURE)
    skip = 4.0 * float(np.max(2.0 * window.half_widths / resolution))

    source_labels = set()
    for trajectory in source:
        source_labels |= _labels_along(labels, window, resolution, trajectory, skip)
    target_labels = set()
    for trajectory in target:
        target_labels |= _labels_along(labels, window, resolution, trajectory, skip)

    shared = source_labels & target_labels
    logger.debug("Components for (%d, %d): %d region(s), source %s, target %s", i, j, count,
                 sorted(source_labels), sorted(target_labels))
    return bool(shared)
