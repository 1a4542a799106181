# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Structural checks of a bifurcation diagram. Failures are report entries with
witnesses, never exceptions.
"""

# Python standard library
import itertools
import logging

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.bifurcation.model import Check, ValidationReport
from lagbif.bifurcation.tracking import parse_limits
from lagbif.flow.model import Branch, Limit
from lagbif.utility.geometry import point_polyline_distance, polyline_distance, polyline_intersections

logger = logging.getLogger(__name__)

UNRELATED = "unrelated"
SAME = "same"
REVERSED = "reversed"
# first = (i, j), second = (j, k)
CHAIN = "chain"
# first = (i, j), second = (k, i)
CHAIN_BACK = "chain-back"

NEAR_STEPS = 10


def _format(x):
    return "({0:.9g}, {1:.9g})".format(float(x[0]), float(x[1]))


def _relation(first, second, x):
    """ How the saddle pairs of two strata relate at base point x. """
    p, _ = first.saddles_near(x)
    q, _ = second.saddles_near(x)

    if p is None or q is None:
        def same(u, v):
            return first.pair[u] == second.pair[v]
    else:
        radius = 0.25 * min(np.linalg.norm(p[0] - p[1]), np.linalg.norm(q[0] - q[1]))

        def same(u, v):
            return np.linalg.norm(p[u] - q[v]) <= radius

    if same(0, 0) and same(1, 1):
        return SAME
    if same(0, 1) and same(1, 0):
        return REVERSED
    if same(1, 0):
        return CHAIN
    if same(0, 1):
        return CHAIN_BACK
    return UNRELATED


def _meeting_points(strata, tol):
    """
    Points where two strata cross or come within tol of each other.

    :return list: (x, index of first stratum, index of second stratum)
    """
    result = []
    for a, b in itertools.combinations(range(len(strata)), 2):
        crossings = polyline_intersections(strata[a].polyline, strata[b].polyline)
        if crossings:
            result.extend((point, a, b) for point, _, _ in crossings)
            continue
        distance, witness = polyline_distance(strata[a].polyline, strata[b].polyline)
        if witness is not None and distance <= tol:
            result.append((witness, a, b))
    return result


def _check_reversed(diagram, meetings):
    check = Check("a", "no point carries both (i, j) and (j, i)")
    for witness in diagram.exclusion_witnesses:
        check.fail("reversed splitting also vanishes at x = {0}".format(_format(witness)))
    for x, a, b in meetings:
        if _relation(diagram.strata[a], diagram.strata[b], x) == REVERSED:
            check.fail("strata {0} {1} and {2} {3} meet at x = {4}".format(
                a, diagram.strata[a].pair, b, diagram.strata[b].pair, _format(x)))
    return check


def _check_same_pair(diagram, meetings):
    check = Check("b", "strata of one ordered pair meet only with equal branch selections")
    for x, a, b in meetings:
        first, second = diagram.strata[a], diagram.strata[b]
        if _relation(first, second, x) == SAME and tuple(first.branches) != tuple(second.branches):
            check.fail("strata {0} {1} and {2} {3} meet at x = {4}".format(
                a, list(first.branches), b, list(second.branches), _format(x)))
    return check


def _check_admissible(diagram):
    check = Check("c", "connections are admissible in the adjacent portraits")
    for k, curve in enumerate(diagram.strata):
        if curve.admissible is None:
            check.notes.append("stratum {0} {1}: admissibility not evaluated".format(k, curve.pair))
        elif not curve.admissible:
            check.fail("stratum {0} {1} {2}: unstable and stable manifolds lie in different components"
                       .format(k, curve.pair, list(curve.branches)))
    return check


def _check_multiplicity(diagram, meetings):
    check = Check("d", "no point carries three or more connections")
    tol = diagram.settings.tol_point

    for x, _, _ in meetings:
        through = [k for k, curve in enumerate(diagram.strata)
                   if point_polyline_distance(x, curve.polyline)[0] <= tol]

        # duplicates of one stratum count once
        distinct = []
        for k in through:
            curve = diagram.strata[k]
            if not any(_relation(diagram.strata[m], curve, x) == SAME and
                       tuple(diagram.strata[m].branches) == tuple(curve.branches) for m in distinct):
                distinct.append(k)

        if len(distinct) >= 3:
            witness = "x = {0} on strata {1}".format(_format(x), distinct)
            if witness not in check.witnesses:
                check.fail(witness)
    return check


def _follows(side, key, partner, branches):
    """ True when the record `key` ends where one of the partner's branches ends. """
    return side.get(key) in set(side.get((partner, b)) for b in branches)


def _check_toggles(diagram):
    check = Check("e", "each stratum toggles only its own connection")

    for k, curve in enumerate(diagram.strata):
        if len(curve.sides) < 2 or None in curve.branches:
            check.notes.append("stratum {0} {1}: sides not evaluated".format(k, curve.pair))
            continue

        left = parse_limits(curve.sides[0]["signature"])
        right = parse_limits(curve.sides[1]["signature"])
        i, j = curve.pair
        source = (i, curve.branches[0])
        target = (j, curve.branches[1])

        changed = set(key for key in set(left) | set(right) if left.get(key) != right.get(key))
        if not changed:
            check.notes.append("stratum {0} {1}: both sides have equal records".format(k, curve.pair))
            continue

        extra = sorted(changed - set([source, target]))
        if extra:
            check.fail("stratum {0} {1}: records {2} also change".format(k, curve.pair, extra))
            continue

        if source in changed:
            for side in (left, right):
                if not _follows(side, source, j, Branch.UNSTABLE):
                    check.fail("stratum {0} {1}: {2} of saddle {3} does not follow an unstable branch of saddle {4}"
                               .format(k, curve.pair, source[1], i, j))
                    break

        if target in changed:
            for side in (left, right):
                if not _follows(side, target, i, Branch.STABLE):
                    check.fail("stratum {0} {1}: {2} of saddle {3} does not follow a stable branch of saddle {4}"
                               .format(k, curve.pair, target[1], j, i))
                    break

            limits = [Limit.parse(side[target]) for side in (left, right) if target in side]
            if len(limits) == 2 and (limits[0].kind == Limit.NODE) != (limits[1].kind == Limit.NODE):
                node = limits[0] if limits[0].kind == Limit.NODE else limits[1]
                check.notes.append("stratum {0} {1}: line {2} -> saddle {3} breaks".format(k, curve.pair, node, j))

    return check


def _check_chains(diagram, meetings):
    check = Check("f", "B_(i,j),(j,k) points lie near a B_(i,k) stratum")
    reach = NEAR_STEPS * max(diagram.grid_step, diagram.settings.step_max)

    for x, a, b in meetings:
        relation = _relation(diagram.strata[a], diagram.strata[b], x)
        if relation == CHAIN:
            first, second = diagram.strata[a], diagram.strata[b]
        elif relation == CHAIN_BACK:
            first, second = diagram.strata[b], diagram.strata[a]
        else:
            continue

        # first = (i, j), second = (j, k): look for a stratum of (i, k)
        p, _ = first.saddles_near(x)
        q, _ = second.saddles_near(x)
        best = None
        for m, curve in enumerate(diagram.strata):
            if m in (a, b):
                continue
            r, distance = curve.saddles_near(x)
            if r is None or p is None or q is None:
                matches = curve.pair == (first.pair[0], second.pair[1])
            else:
                radius = 0.25 * np.linalg.norm(r[0] - r[1])
                matches = np.linalg.norm(r[0] - p[0]) <= radius and np.linalg.norm(r[1] - q[1]) <= radius
            if matches and (best is None or distance < best[1]):
                best = (m, distance)

        if best is None:
            check.notes.append("no (i, k) stratum found for the crossing at x = {0}".format(_format(x)))
        elif best[1] > reach:
            check.fail("crossing at x = {0} is {1:.3g} from stratum {2}".format(_format(x), best[1], best[0]))

    return check


def validate_diagram(diagram):
    """
    Runs the structural checks on a diagram:

    a. no point carries both (i, j) and (j, i) connections
    b. strata of the same ordered pair meet only when their branch selections agree
    c. every connection is admissible given the other separatrices of the adjacent portraits
    d. no point carries three or more connections
    e. crossing a stratum changes only the records of its own two branches, each following
       a branch of the partner saddle (a node -> s_j line may break)
    f. crossings of (i, j) and (j, k) strata lie near an (i, k) stratum

    :param BifurcationDiagram diagram: the diagram
    :return ValidationReport: pass/fail per check with witnesses
    """
    meetings = _meeting_points(diagram.strata, diagram.settings.tol_point)
    checks = [
        _check_reversed(diagram, meetings),
        _check_same_pair(diagram, meetings),
        _check_admissible(diagram),
        _check_multiplicity(diagram, meetings),
        _check_toggles(diagram),
        _check_chains(diagram, meetings),
    ]
    report = ValidationReport(checks, unresolved=len(diagram.unresolved))

    for check in checks:
        if not check.passed:
            logger.warning("Check %s failed: %s", check.key, "; ".join(check.witnesses))
    return report
