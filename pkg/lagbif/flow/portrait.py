# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import csv
import io
import logging

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException
from lagbif.flow.critical import solve_critical_points
from lagbif.flow.integrate import integrate_branch
from lagbif.flow.model import Branch, FlowSettings, Limit, PhasePortrait, make_signature, EMPTY_SIGNATURE

logger = logging.getLogger(__name__)


def separatrices(f, x, critical_points, window, settings=None):
    """
    The four separatrices of every saddle.

    :param list critical_points: output of solve_critical_points at the same x
    :return list: Separatrix objects ordered by saddle id and branch
    """
    settings = settings or FlowSettings()
    degenerate = [cp for cp in critical_points if cp.is_degenerate]
    if degenerate:
        raise InvalidArgumentException("Cannot integrate separatrices with degenerate critical point(s) {0}"
                                       .format([cp.id for cp in degenerate]))

    result = []
    for saddle in (cp for cp in critical_points if cp.is_saddle):
        for branch in Branch.ALL:
            result.append(integrate_branch(f, x, saddle, branch, critical_points, window, settings))
    return result


def portrait(f, x, window, settings=None):
    """
    Phase portrait of grad f_x: critical points, separatrices, saddle connections,
    node lines and the signature.

    :param GeneratingFunction f: generating function
    :param x: base point
    :param Window window: fiber window
    :param FlowSettings settings: numerical settings
    :return PhasePortrait: the portrait, flagged on_caustic when a critical point is degenerate
    """
    settings = settings or FlowSettings()
    x = np.asarray(x, dtype=float)
    warnings = []

    critical_points = solve_critical_points(f, x, window, settings, warnings)

    if any(cp.is_degenerate for cp in critical_points):
        logger.info("x = (%g, %g) is on or near the caustic", x[0], x[1])
        return PhasePortrait(x, critical_points, [], [], EMPTY_SIGNATURE, on_caustic=True,
                             warnings=warnings, window=window)

    lines = separatrices(f, x, critical_points, window, settings)
    connections = []
    node_saddle = []
    saddle_node = []

    for s in lines:
        if s.limit.kind == Limit.MAX_STEPS:
            warnings.append("separatrix {0} of saddle {1} reached the step budget".format(s.branch, s.saddle_id))
        if Branch.is_unstable(s.branch):
            if s.limit.kind == Limit.SADDLE:
                connections.append((s.saddle_id, s.limit.point_id))
            elif s.limit.kind == Limit.NODE:
                saddle_node.append((s.saddle_id, s.limit.point_id))
        elif s.limit.kind == Limit.NODE:
            node_saddle.append((s.limit.point_id, s.saddle_id))

    result = PhasePortrait(x, critical_points, lines, sorted(set(connections)), make_signature(lines),
                           node_saddle_lines=sorted(set(node_saddle)),
                           saddle_node_lines=sorted(set(saddle_node)),
                           warnings=warnings, window=window)

    logger.debug("Portrait at x = (%g, %g): census %s, %d connection(s)", x[0], x[1], result.census,
                 len(result.connections))
    return result


def trajectories_csv(portrait):
    """
    Separatrix trajectories as CSV text with columns saddle_id, branch, limit, step, y1, y2.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["saddle_id", "branch", "limit", "step", "y1", "y2"])

    for s in portrait.separatrices:
        for step, (y1, y2) in enumerate(s.trajectory):
            writer.writerow([s.saddle_id, s.branch, str(s.limit), step, repr(round(float(y1), 12)),
                             repr(round(float(y2), 12))])

    return buffer.getvalue()
