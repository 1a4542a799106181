# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Bifurcation diagrams: a grid scan of phase portraits over a base window, strata
traced from sign changes of the splitting function between neighbouring samples,
their crossings and the region signatures.
"""

# Python standard library
import itertools
import logging

# 3rd party libraries
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

# lagbif libraries
from lagbif.bifurcation.continuation import trace_curve
from lagbif.bifurcation.model import BifurcationDiagram, Codim2Point, DiagramSettings, Region
from lagbif.bifurcation.splitting import SplittingContext, locate_on_segment, sampled_splittings
from lagbif.bifurcation.tracking import SaddleTracker, format_limits, match_labels, translate_limits
from lagbif.bifurcation.validation import validate_diagram
from lagbif.caustic import Window, compute_caustic
from lagbif.exceptions import (CausticCrossingException, InvalidArgumentException, InvalidSampleException,
                               TrackingException)
from lagbif.flow import Branch, FlowSettings, label_free_signature, phase_components, portrait
from lagbif.utility.geometry import polyline_intersections, segment_polyline_intersections
from lagbif.utility.parallel import ordered_map

logger = logging.getLogger(__name__)

DEFAULT_FIBER = Window((0.0, 0.0), 3.0, 96)
COARSE_GRID = 16
REGION_SAMPLES = 3


def scan_points(window, grid):
    """
    Base points of a grid x grid scan, row by row (x1 fastest).

    :return numpy.ndarray: grid^2 x 2 array
    """
    axis1 = np.linspace(window.lower[0], window.upper[0], grid)
    axis2 = np.linspace(window.lower[1], window.upper[1], grid)
    g1, g2 = np.meshgrid(axis1, axis2)
    return np.column_stack([g1.ravel(), g2.ravel()])


def neighbour_pairs(grid):
    """ Index pairs of horizontally and vertically adjacent scan points. """
    pairs = []
    for row in range(grid):
        for column in range(grid):
            k = row * grid + column
            if column + 1 < grid:
                pairs.append((k, k + 1))
            if row + 1 < grid:
                pairs.append((k, k + grid))
    return pairs


def _portrait_job(job):
    f, x, fiber, flow_settings, caustic, margin = job
    if caustic.distance_to(x) < margin:
        return None
    result = portrait(f, x, fiber, flow_settings)
    if result.on_caustic:
        return None
    return result


def _identity(points):
    return dict((cp.id, cp.id) for cp in points)


def _candidates(changed, saddles):
    """
    Ordered saddle pairs (i, j) whose connection can explain the changed records: a
    changed unstable branch of s_i or a changed stable branch of s_j. Pairs where
    both changed come first.
    """
    unstable = {}
    stable = {}
    for label, branch in changed:
        if label not in saddles:
            continue
        if Branch.is_unstable(branch):
            unstable.setdefault(label, []).append(branch)
        else:
            stable.setdefault(label, []).append(branch)

    result = []
    for i, j in itertools.permutations(sorted(saddles), 2):
        if i not in unstable and j not in stable:
            continue
        score = int(i in unstable) + int(j in stable)
        result.append((-score, (i, j), tuple(unstable.get(i, Branch.UNSTABLE)),
                       tuple(stable.get(j, Branch.STABLE))))

    return [(pair, u, s) for _, pair, u, s in sorted(result)]


def _bracket_job(job):
    """
    Looks for zeros of the splitting function on the segment between two
    neighbouring samples. A saddle pair is tried when its sampled splitting changes
    sign between the samples or when it can explain a changed separatrix limit.
    """
    f, a, b, fiber, flow_settings, settings, caustic = job
    outcome = {"seeds": [], "changed": [], "flipped": [], "unresolved": False, "message": None}
    # portraits that differ only in their ids are the same portrait
    differ = label_free_signature(a) != label_free_signature(b)

    try:
        tracked = SaddleTracker(f, a.x, a.critical_points, fiber, flow_settings).move(b.x)
    except TrackingException as e:
        outcome.update(unresolved=differ, message=str(e))
        return outcome

    mapping = match_labels(tracked, b.critical_points)
    if mapping is None:
        outcome.update(unresolved=differ, message="critical points do not correspond")
        return outcome

    identity = _identity(a.critical_points)
    before = translate_limits(a, identity, a.critical_points)
    after = translate_limits(b, mapping, a.critical_points)
    changed = sorted(k for k in set(before) | set(after) if before.get(k) != after.get(k))

    at_a = sampled_splittings(a, identity, a.critical_points, settings.section_scale)
    at_b = sampled_splittings(b, mapping, a.critical_points, settings.section_scale)
    flipped = sorted(key for key, value in at_a.items()
                     if value is not None and at_b.get(key) is not None and value * at_b[key] < 0.0)

    outcome["changed"] = changed
    outcome["flipped"] = flipped
    if not changed and not flipped:
        return outcome

    candidates = list(flipped)
    for pair, unstable, stable in _candidates(changed, [cp.id for cp in a.saddles]):
        for branches in itertools.product(unstable, stable):
            if (pair, branches) not in candidates:
                candidates.append((pair, branches))

    potential_a = f.potential(a.x)
    potential_b = f.potential(b.x)
    positions_b = dict((cp.id, cp.position) for cp in tracked)

    for pair, branches in candidates:
        # a connection s_i -> s_j needs f_x(s_i) < f_x(s_j) near the segment
        rising_a = potential_a(a.point(pair[0]).position) < potential_a(a.point(pair[1]).position)
        rising_b = potential_b(positions_b[pair[0]]) < potential_b(positions_b[pair[1]])
        if not (rising_a or rising_b):
            continue

        tracker = SaddleTracker(f, a.x, a.critical_points, fiber, flow_settings)
        context = SplittingContext(f, tracker, pair, branches, flow_settings, settings, caustic)
        try:
            seed = locate_on_segment(f, a.x, b.x, pair, context)
        except (InvalidSampleException, CausticCrossingException) as e:
            logger.debug("No bracket for %s %s between (%g, %g) and (%g, %g): %s", pair, branches,
                         a.x[0], a.x[1], b.x[0], b.x[1], e)
            continue
        if seed is None:
            continue

        positions = [tracker.point(label).position.tolist() for label in pair]
        outcome["seeds"].append({"x": seed, "pair": pair, "branches": branches, "saddles": positions,
                                 "a": a, "b": b})

    if not outcome["seeds"]:
        if changed:
            outcome.update(unresolved=True, message="no saddle pair brackets the change {0}".format(changed))
        else:
            logger.debug("Sampled splitting of %s changes sign between (%g, %g) and (%g, %g) without a zero",
                         flipped, a.x[0], a.x[1], b.x[0], b.x[1])
    return outcome


def _reverse_zero(f, seed, tracker, pair, flow_settings, settings):
    """ True when the reversed pair also has a vanishing splitting value at the seed. """
    reverse = SplittingContext(f, tracker.copy(), (pair[1], pair[0]), None, flow_settings, settings)
    for branches in itertools.product(Branch.UNSTABLE, Branch.STABLE):
        sample = reverse.evaluate(seed, branches)
        if sample.valid and abs(sample.value) <= settings.tol_psi:
            return True
    return False


def _trace_job(job):
    f, record, fiber, window, flow_settings, settings, caustic = job
    a, b, pair = record["a"], record["b"], record["pair"]
    seed = np.asarray(record["x"], dtype=float)

    context = SplittingContext(f, SaddleTracker(f, a.x, a.critical_points, fiber, flow_settings), pair,
                               record["branches"], flow_settings, settings, caustic)
    try:
        curve = trace_curve(f, seed, pair, context, window)
    except (InvalidArgumentException, InvalidSampleException) as e:
        logger.warning("Seed (%g, %g) of pair %s not traced: %s", seed[0], seed[1], pair, e)
        return None, False
    seed_points = context.tracker.points
    exclusion = _reverse_zero(f, seed, context.tracker, pair, flow_settings, settings)

    # the scan segment crosses the stratum at the seed
    direction = (b.x - a.x) / np.linalg.norm(b.x - a.x)
    sides = []
    for sign in (-1.0, 1.0):
        x = seed + sign * settings.side_offset * direction
        side = portrait(f, x, fiber, flow_settings)
        if side.on_caustic:
            continue
        try:
            tracked = SaddleTracker(f, seed, seed_points, fiber, flow_settings).move(x)
        except TrackingException:
            continue
        mapping = match_labels(tracked, side.critical_points)
        if mapping is None:
            continue

        inverse = dict((label, point_id) for point_id, label in mapping.items())
        limits = translate_limits(side, mapping, seed_points)
        admissible = phase_components(side, inverse[pair[0]], inverse[pair[1]])
        sides.append({"x": x.tolist(), "signature": format_limits(limits), "admissible": bool(admissible)})

    curve.sides = sides
    curve.admissible = all(s["admissible"] for s in sides) if sides else None
    return curve, exclusion


def _same_stratum(curve, record, settings):
    if tuple(curve.branches) != tuple(record["branches"]):
        return False
    positions, distance = curve.saddles_near(record["x"])
    if distance > 2.0 * settings.step_max or positions is None:
        return False
    return _same_saddles(positions, record["saddles"])


def _same_saddles(first, second):
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    radius = 0.25 * float(np.linalg.norm(first[0] - first[1]))
    return bool(np.all(np.linalg.norm(first - second, axis=1) <= radius))


def _trace_all(f, records, fiber, window, flow_settings, settings, caustic, workers):
    """
    Traces strata in rounds; seeds already on a traced stratum are dropped and seeds
    that may lie on the same stratum never trace in the same round.
    """
    curves = []
    witnesses = []
    pending = list(records)

    while pending:
        batch = []
        deferred = []
        for record in pending:
            if any(_same_stratum(curve, record, settings) for curve in curves):
                continue
            if any(tuple(record["branches"]) == tuple(other["branches"]) and
                   _same_saddles(record["saddles"], other["saddles"]) for other in batch):
                deferred.append(record)
                continue
            batch.append(record)

        if not batch:
            break

        jobs = [(f, record, fiber, window, flow_settings, settings, caustic) for record in batch]
        for record, (curve, exclusion) in zip(batch, ordered_map(_trace_job, jobs, workers)):
            if curve is not None:
                curves.append(curve)
            if exclusion:
                logger.error("Reversed pair of %s also vanishes at (%g, %g)", record["pair"], record["x"][0],
                             record["x"][1])
                witnesses.append(list(record["x"]))
        pending = deferred

    return curves, witnesses


def _codim2_points(curves):
    points = []
    for a, b in itertools.combinations(range(len(curves)), 2):
        for x, _, _ in polyline_intersections(curves[a].polyline, curves[b].polyline):
            points.append(Codim2Point(x, (a, b), (curves[a].pair, curves[b].pair)))
    return points


def _regions(points, portraits, grid, caustic, curves, rng):
    valid = [k for k, p in enumerate(portraits) if p is not None]
    rows, columns = [], []

    for k, l in neighbour_pairs(grid):
        if portraits[k] is None or portraits[l] is None:
            continue
        if caustic.crosses(points[k], points[l]):
            continue
        if any(segment_polyline_intersections(points[k], points[l], c.polyline) for c in curves):
            continue
        rows.append(k)
        columns.append(l)

    graph = coo_matrix((np.ones(len(rows)), (rows, columns)), shape=(len(points), len(points)))
    _, labels = connected_components(graph, directed=False)

    regions = []
    warnings = []
    seen = set()
    for k in valid:
        if labels[k] in seen:
            continue
        seen.add(labels[k])
        members = [m for m in valid if labels[m] == labels[k]]
        checked = sorted(rng.choice(members, size=min(REGION_SAMPLES, len(members)), replace=False).tolist())
        canonical = label_free_signature(portraits[k])
        consistent = all(label_free_signature(portraits[m]) == canonical for m in checked)
        if not consistent:
            message = "Region around ({0:.6g}, {1:.6g}) has more than one portrait type".format(*points[k])
            logger.warning(message)
            warnings.append(message)
        regions.append(Region(points[k], portraits[k].signature, canonical, portraits[k].census, len(members),
                              consistent))

    return regions, warnings


def assemble_diagram(f, window, fiber=None, settings=None, flow_settings=None, workers=1, seed=0):
    """
    Bifurcation diagram of f over a base window.

    :param GeneratingFunction f: generating function
    :param Window window: base window
    :param Window fiber: fiber window for critical points, locus and portraits
    :param DiagramSettings settings: scan, splitting and continuation settings
    :param FlowSettings flow_settings: portrait settings
    :param int workers: worker processes for the scan and for tracing
    :param int seed: seed of the region sampling
    :return BifurcationDiagram: diagram with its validation report
    """
    settings = settings or DiagramSettings()
    flow_settings = flow_settings or FlowSettings()
    fiber = fiber or DEFAULT_FIBER
    rng = np.random.default_rng(seed)
    warnings = []

    if settings.grid < COARSE_GRID:
        message = "Diagram grid {0} is coarse; region boundaries may be unresolved".format(settings.grid)
        logger.warning(message)
        warnings.append(message)

    logger.info("Computing caustic")
    caustic = compute_caustic(f, fiber)

    points = scan_points(window, settings.grid)
    # scan portraits only feed limits and splitting signs; brackets integrate at full accuracy
    scan_settings = flow_settings.relaxed(settings.scan_rtol)
    logger.info("Scanning %d base points", len(points))
    portraits = ordered_map(_portrait_job, [(f, x, fiber, scan_settings, caustic, settings.caustic_margin)
                                            for x in points], workers)

    jobs = []
    for k, l in neighbour_pairs(settings.grid):
        a, b = portraits[k], portraits[l]
        if a is None or b is None or a.census != b.census or caustic.crosses(points[k], points[l]):
            continue
        jobs.append((f, a, b, fiber, flow_settings, settings, caustic))

    logger.info("Comparing %d neighbouring sample pair(s)", len(jobs))
    records = []
    unresolved = []
    for job, outcome in zip(jobs, ordered_map(_bracket_job, jobs, workers)):
        records.extend(outcome["seeds"])
        if outcome["unresolved"]:
            a, b = job[1], job[2]
            middle = 0.5 * (a.x + b.x)
            unresolved.append(middle.tolist())
            message = "Unresolved boundary near ({0:.6g}, {1:.6g}): {2}".format(middle[0], middle[1],
                                                                                outcome["message"])
            logger.warning(message)
            warnings.append(message)

    logger.info("Tracing from %d seed(s)", len(records))
    curves, exclusion = _trace_all(f, records, fiber, window, flow_settings, settings, caustic, workers)
    codim2 = _codim2_points(curves)
    regions, region_warnings = _regions(points, portraits, settings.grid, caustic, curves, rng)
    warnings.extend(region_warnings)

    diagram = BifurcationDiagram(caustic, curves, codim2, regions, window=window, settings=settings,
                                 warnings=warnings, unresolved=unresolved, exclusion_witnesses=exclusion)
    diagram.report = validate_diagram(diagram)
    logger.info("Diagram: %d stratum/strata, %d codim-2 point(s), %d region(s)", len(curves), len(codim2),
                len(regions))
    return diagram
