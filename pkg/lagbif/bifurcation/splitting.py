# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Signed separatrix splitting between an unstable branch of s_i and a stable
branch of s_j, measured on a segment across the line joining the two saddles.
"""

# Python standard library
import itertools
import logging

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.bifurcation.model import DiagramSettings, SplittingSample
from lagbif.bifurcation.tracking import SaddleTracker, matching_branch
from lagbif.exceptions import (CausticCrossingException, InvalidArgumentException, InvalidSampleException,
                               TrackingException)
from lagbif.flow.integrate import first_crossing
from lagbif.flow.model import Branch, FlowSettings

logger = logging.getLogger(__name__)


class SplittingContext(object):
    """
    Everything needed to evaluate the splitting function of one ordered saddle
    pair along a path: the labelled critical points and the selected branches.

    :ivar tuple pair: saddle labels (i, j)
    :ivar tuple branches: (unstable branch of s_i, stable branch of s_j), or None before selection
    :ivar CausticCurve caustic: used to reject segments that cross it, may be None
    """

    def __init__(self, f, tracker, pair, branches=None, flow_settings=None, settings=None, caustic=None):
        self.f = f
        self.tracker = tracker
        self.pair = (int(pair[0]), int(pair[1]))
        self.branches = None if branches is None else tuple(branches)
        self.flow_settings = flow_settings or FlowSettings()
        self.settings = settings or DiagramSettings()
        self.caustic = caustic

        if self.pair[0] == self.pair[1]:
            raise InvalidArgumentException("A splitting pair needs two distinct saddles")
        if self.branches is not None:
            if not Branch.is_unstable(self.branches[0]) or Branch.is_unstable(self.branches[1]):
                raise InvalidArgumentException("Branches must be (unstable branch of s_i, stable branch of s_j)")

    @staticmethod
    def start(f, x, pair, window, branches=None, flow_settings=None, settings=None, caustic=None):
        """
        Solves the critical points at x, labels them by their ids there and selects
        branches when none are given.

        :param Window window: fiber window
        """
        flow_settings = flow_settings or FlowSettings()
        tracker = SaddleTracker.start(f, x, window, flow_settings)
        context = SplittingContext(f, tracker, pair, branches, flow_settings, settings, caustic)

        for label in context.pair:
            if not tracker.point(label).is_saddle:
                raise InvalidArgumentException("Critical point {0} at x = {1} is not a saddle"
                                               .format(label, tuple(x)))
        if branches is None:
            context.select_branches(x)
        return context

    @property
    def window(self):
        return self.tracker.window

    def copy(self):
        return SplittingContext(self.f, self.tracker.copy(), self.pair, self.branches, self.flow_settings,
                                self.settings, self.caustic)

    def evaluate(self, x, branches=None):
        """
        :return SplittingSample: invalid when tracking fails or a branch misses the segment
        """
        x = np.array(x, dtype=float)
        branches = tuple(branches) if branches is not None else self.branches
        if branches is None:
            raise InvalidArgumentException("No branch selection for pair {0}".format(self.pair))

        try:
            points = self.tracker.move(x)
            si = self.tracker.point(self.pair[0])
            sj = self.tracker.point(self.pair[1])
        except TrackingException as e:
            return SplittingSample(x, self.pair, None, None, branches, valid=False, reason=str(e))

        midpoint, normal, tangent, half = _section(si.position, sj.position, self.settings.section_scale)
        section = [midpoint - half * tangent, midpoint + half * tangent]

        offsets = []
        for saddle, branch in ((si, branches[0]), (sj, branches[1])):
            crossing = first_crossing(self.f, x, saddle, branch, points, self.window, (midpoint, normal),
                                      self.flow_settings)
            if crossing is None:
                return SplittingSample(x, self.pair, None, section, branches, valid=False,
                                       reason="{0} of saddle {1} does not reach the section".format(branch, saddle.id))
            offset = float(np.dot(crossing - midpoint, tangent))
            if abs(offset) > half:
                return SplittingSample(x, self.pair, None, section, branches, valid=False,
                                       reason="{0} of saddle {1} crosses the section line off the segment"
                                       .format(branch, saddle.id))
            offsets.append(offset)

        return SplittingSample(x, self.pair, offsets[0] - offsets[1], section, branches)

    def select_branches(self, x):
        """
        Picks the branch pair with a valid sample of smallest magnitude at x.

        :return SplittingSample: the sample for the selected branches
        :raises InvalidSampleException: when no branch pair crosses the segment
        """
        best = None
        for branches in itertools.product(Branch.UNSTABLE, Branch.STABLE):
            sample = self.evaluate(x, branches)
            logger.debug("Pair %s, branches %s at (%g, %g): %s", self.pair, branches, x[0], x[1], sample)
            if sample.valid and (best is None or abs(sample.value) < abs(best.value)):
                best = sample

        if best is None:
            raise InvalidSampleException("No separatrix branches of pair {0} cross the section".format(self.pair), x)

        self.branches = best.branches
        return best


def splitting(f, x, pair, context):
    """
    Splitting function of the ordered saddle pair (i, j) at base point x.

    The value is the signed offset, along the segment bisecting s_i s_j, between the
    first crossings of the selected unstable branch of s_i and stable branch of s_j.
    It vanishes exactly where the two branches coincide, i.e. on a connection s_i -> s_j.

    :param GeneratingFunction f: generating function
    :param x: base point
    :param tuple pair: saddle labels (i, j) of the context
    :param SplittingContext context: labelled saddles and branch selection
    :return SplittingSample: the sample, marked invalid when a branch misses the segment
    """
    if context.f is not f:
        raise InvalidArgumentException("Context was built for another generating function")
    if tuple(pair) != context.pair:
        raise InvalidArgumentException("Context tracks pair {0}, not {1}".format(context.pair, tuple(pair)))
    return context.evaluate(x)


def _section(si, sj, section_scale):
    gap = sj - si
    distance = float(np.linalg.norm(gap))
    normal = gap / distance
    tangent = np.array([-normal[1], normal[0]])
    return 0.5 * (si + sj), normal, tangent, 0.5 * section_scale * distance


def _polyline_offset(trajectory, section):
    """ Offset along the section segment of the first crossing of a separatrix polyline, or None. """
    if trajectory is None:
        return None
    midpoint, normal, tangent, half = section
    # the first vertex is the saddle itself
    points = np.asarray(trajectory, dtype=float)[1:]
    side = np.dot(points - midpoint, normal)
    crossed = np.nonzero(side[:-1] * side[1:] <= 0.0)[0]
    if len(crossed) == 0:
        return None

    k = crossed[0]
    span = side[k] - side[k + 1]
    s = side[k] / span if span != 0.0 else 0.0
    offset = float(np.dot(points[k] + s * (points[k + 1] - points[k]) - midpoint, tangent))
    return offset if abs(offset) <= half else None


def sampled_splittings(portrait, mapping, reference, section_scale):
    """
    Splitting values of every ordered saddle pair and branch pair, read off the
    separatrix polylines of a portrait instead of integrating again. Accurate
    enough for sign comparisons between neighbouring base points.

    :param PhasePortrait portrait: portrait at some base point
    :param dict mapping: portrait id -> label, from match_labels
    :param list reference: labelled critical points whose branch orientation is used
    :param float section_scale: section length relative to the saddle distance
    :return dict: ((i, j), (unstable branch, stable branch)) -> value, None where a branch
                  misses the section segment
    """
    by_label = dict((cp.id, cp) for cp in reference)
    saddles = dict((mapping[cp.id], cp.position) for cp in portrait.saddles)
    lines = {}
    for s in portrait.separatrices:
        label = mapping[s.saddle_id]
        lines[(label, matching_branch(portrait.point(s.saddle_id), s.branch, by_label[label]))] = s.trajectory

    result = {}
    for i, j in itertools.permutations(sorted(saddles), 2):
        section = _section(saddles[i], saddles[j], section_scale)
        for branches in itertools.product(Branch.UNSTABLE, Branch.STABLE):
            source = _polyline_offset(lines.get((i, branches[0])), section)
            target = _polyline_offset(lines.get((j, branches[1])), section)
            result[((i, j), branches)] = None if source is None or target is None else source - target
    return result


def locate_on_segment(f, x0, x1, pair, context):
    """
    Bisects the splitting function on the segment x0-x1.

    :return numpy.ndarray: base point with a sign change of the splitting function
                           inside a bracket of width settings.bracket_tol, or None when
                           both ends have the same sign
    :raises InvalidSampleException: when a sample on the way is invalid
    :raises CausticCrossingException: when the segment meets the caustic
    """
    settings = context.settings
    x0 = np.array(x0, dtype=float)
    x1 = np.array(x1, dtype=float)

    if np.linalg.norm(x1 - x0) == 0.0:
        raise InvalidArgumentException("Segment end points coincide")
    caustic = context.caustic
    if caustic is not None:
        if caustic.crosses(x0, x1) or min(caustic.distance_to(x0), caustic.distance_to(x1)) < settings.caustic_margin:
            raise CausticCrossingException("Segment ({0:.6g}, {1:.6g})-({2:.6g}, {3:.6g}) meets the caustic"
                                           .format(x0[0], x0[1], x1[0], x1[1]))

    def value_at(x):
        sample = splitting(f, x, pair, context)
        if not sample.valid:
            raise InvalidSampleException(sample.reason, x)
        return sample.value

    low, high = x0, x1
    value_low = value_at(x0)
    value_high = value_at(x1)

    if value_low == 0.0:
        return x0
    if value_high == 0.0:
        return x1
    if np.sign(value_low) == np.sign(value_high):
        return None

    while np.linalg.norm(high - low) > settings.bracket_tol:
        middle = 0.5 * (low + high)
        value = value_at(middle)
        if value == 0.0:
            return middle
        if np.sign(value) == np.sign(value_low):
            low, value_low = middle, value
        else:
            high = middle

    result = 0.5 * (low + high)
    residual = value_at(result)
    if abs(residual) > settings.tol_psi:
        logger.warning("Splitting of pair %s is %.3e at the located point (%g, %g)", pair, residual,
                       result[0], result[1])
    logger.debug("Located zero of pair %s at (%.12g, %.12g)", pair, result[0], result[1])
    return result
