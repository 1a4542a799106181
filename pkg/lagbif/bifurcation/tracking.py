# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Carrying critical point labels from one base point to another.
"""

# Python standard library
import logging

# 3rd party libraries
import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

# lagbif libraries
from lagbif.exceptions import TrackingException
from lagbif.flow.critical import make_critical_point, newton_roots, solve_critical_points
from lagbif.flow.integrate import branch_direction
from lagbif.flow.model import Branch, FlowSettings, Limit, EMPTY_SIGNATURE

logger = logging.getLogger(__name__)

MAX_HALVINGS = 12
MATCH_RADIUS = 1e-6


def max_jump(critical_points, window):
    """
    Largest distance a critical point may move in one continuation step: a quarter
    of the smallest distance between saddles (between any points when there are
    fewer than two saddles).
    """
    saddles = [cp.position for cp in critical_points if cp.is_saddle]
    if len(saddles) < 2:
        saddles = [cp.position for cp in critical_points]
    if len(saddles) < 2:
        return 0.25 * window.diameter
    return 0.25 * float(np.min(pdist(np.array(saddles))))


class SaddleTracker(object):
    """
    Newton continuation of all critical points of grad f_x as x moves, keeping the
    labels they had at the starting base point.
    """

    def __init__(self, f, x, critical_points, window, settings=None):
        self.f = f
        self.window = window
        self.settings = settings or FlowSettings()
        self.x = np.array(x, dtype=float)
        self.points = list(critical_points)

        degenerate = [cp.id for cp in self.points if cp.is_degenerate]
        if degenerate:
            raise TrackingException("Cannot track degenerate critical point(s) {0}".format(degenerate))

    @staticmethod
    def start(f, x, window, settings=None):
        settings = settings or FlowSettings()
        return SaddleTracker(f, x, solve_critical_points(f, x, window, settings), window, settings)

    def copy(self):
        return SaddleTracker(self.f, self.x, self.points, self.window, self.settings)

    def point(self, label):
        for cp in self.points:
            if cp.id == label:
                return cp
        raise TrackingException("No critical point labelled {0}".format(label))

    def _step(self, target):
        if not self.points:
            return []

        positions = np.array([cp.position for cp in self.points]).T
        limit = max_jump(self.points, self.window)
        y, residual = newton_roots(self.f, target, positions, max_step=limit)

        if not np.all(np.isfinite(y)) or np.any(residual > self.settings.tol_root):
            return None
        if np.any(np.linalg.norm(y - positions, axis=0) > limit):
            return None

        moved = [make_critical_point(self.f, y[:, k], cp.id, self.settings) for k, cp in enumerate(self.points)]
        if any(new.kind != old.kind for new, old in zip(moved, self.points)):
            return None
        if len(moved) > 1 and np.min(pdist(y.T)) < MATCH_RADIUS:
            return None
        return moved

    def move(self, x):
        """
        Continues the labelled points to base point x, halving the step on failure.

        :return list: CriticalPoint objects at x carrying the original labels
        :raises TrackingException: when a point merges, turns degenerate or cannot be followed
        """
        x = np.array(x, dtype=float)
        start = self.x
        done = 0.0
        fraction = 1.0

        while done < 1.0:
            fraction = min(fraction, 1.0 - done)
            target = x if done + fraction >= 1.0 else start + (done + fraction) * (x - start)
            moved = self._step(target)

            if moved is None:
                fraction /= 2.0
                if fraction < 2.0 ** -MAX_HALVINGS:
                    raise TrackingException("Lost critical points between ({0:.6g}, {1:.6g}) and ({2:.6g}, {3:.6g})"
                                            .format(self.x[0], self.x[1], x[0], x[1]))
                continue

            self.points = moved
            self.x = np.array(target, dtype=float)
            done = 1.0 if target is x else done + fraction
            fraction *= 2.0

        return self.points


def match_labels(tracked, points):
    """
    Maps the ids of freshly solved critical points onto tracked labels.

    :param list tracked: labelled points continued to the same base point
    :param list points: output of solve_critical_points
    :return dict: id -> label, or None when the two sets do not correspond
    """
    if len(tracked) != len(points):
        return None
    if not points:
        return {}

    tree = cKDTree(np.array([cp.position for cp in tracked]))
    distance, index = tree.query(np.array([cp.position for cp in points]))
    scale = 1.0 + max(float(np.max(np.abs(cp.position))) for cp in points)

    if np.any(distance > MATCH_RADIUS * scale) or len(set(index.tolist())) != len(points):
        return None
    return dict((cp.id, tracked[k].id) for cp, k in zip(points, index))


def matching_branch(saddle, branch, reference):
    direction = branch_direction(saddle, branch)
    candidates = Branch.UNSTABLE if Branch.is_unstable(branch) else Branch.STABLE
    return max(candidates, key=lambda b: float(np.dot(direction, branch_direction(reference, b))))


def translate_limits(portrait, mapping, reference):
    """
    Separatrix limits of a portrait expressed in tracked labels; branch names follow
    the eigenvector orientation of the reference saddles.

    :param PhasePortrait portrait: portrait at some base point
    :param dict mapping: portrait id -> label, from match_labels
    :param list reference: labelled critical points whose branch orientation is used
    :return dict: (label, branch) -> limit text
    """
    by_label = dict((cp.id, cp) for cp in reference)
    result = {}
    for s in portrait.separatrices:
        label = mapping[s.saddle_id]
        branch = matching_branch(portrait.point(s.saddle_id), s.branch, by_label[label])
        limit = s.limit
        if limit.point_id is not None:
            limit = Limit(limit.kind, mapping[limit.point_id])
        result[(label, branch)] = str(limit)
    return result


def parse_limits(signature):
    """ (saddle id, branch) -> limit text, from a portrait signature. """
    result = {}
    for record in signature.split(";"):
        parts = record.split(":")
        if len(parts) == 3:
            result[(int(parts[0]), parts[1])] = parts[2]
    return result


def format_limits(limits):
    """ Inverse of parse_limits. """
    if not limits:
        return EMPTY_SIGNATURE
    return ";".join("{0}:{1}:{2}".format(label, branch, limits[(label, branch)])
                    for label, branch in sorted(limits))
