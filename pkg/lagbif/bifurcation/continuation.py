# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Pseudo-arclength continuation of the zero set of the splitting function.
"""

# Python standard library
import logging

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.bifurcation.model import BifurcationCurve, EndpointKind
from lagbif.bifurcation.splitting import splitting
from lagbif.exceptions import InvalidArgumentException, InvalidSampleException

logger = logging.getLogger(__name__)

GRADIENT_STEP = 1e-6
MIN_GRADIENT = 1e-12
CORRECTOR_ITERATIONS = 8
# vertices are accepted up to this residual when the corrector stalls above tol_psi
RESIDUAL_LIMIT = 1e-6


def _gradient(f, x, pair, context):
    values = []
    for offset in (np.array([GRADIENT_STEP, 0.0]), np.array([0.0, GRADIENT_STEP])):
        plus = splitting(f, x + offset, pair, context)
        minus = splitting(f, x - offset, pair, context)
        if not plus.valid or not minus.valid:
            return None
        values.append((plus.value - minus.value) / (2.0 * GRADIENT_STEP))
    return np.array(values)


def _distance_to_edge(window, x, direction):
    """ Distance from x along a unit direction to the window boundary. """
    distances = []
    for k in range(2):
        if direction[k] > 0.0:
            distances.append((window.upper[k] - x[k]) / direction[k])
        elif direction[k] < 0.0:
            distances.append((window.lower[k] - x[k]) / direction[k])
    return max(0.0, min(distances)) if distances else np.inf


def _correct(f, predicted, normal, slope, pair, context, step):
    """
    Newton (secant after the first update) along the normal through the predicted point.

    :return tuple: (corrected point, sample, iterations) or (None, None, iterations)
    """
    tol = context.settings.tol_psi
    shift = 0.0
    sample = splitting(f, predicted, pair, context)
    if not sample.valid:
        return None, None, 0

    previous = None
    for iteration in range(1, CORRECTOR_ITERATIONS + 1):
        if abs(sample.value) <= tol:
            return predicted + shift * normal, sample, iteration - 1

        if previous is not None and sample.value != previous[1]:
            slope = (sample.value - previous[1]) / (shift - previous[0])
        if slope == 0.0:
            break
        previous = (shift, sample.value)
        shift -= sample.value / slope

        if abs(shift) > step:
            return None, None, iteration
        sample = splitting(f, predicted + shift * normal, pair, context)
        if not sample.valid:
            return None, None, iteration

    if abs(sample.value) <= RESIDUAL_LIMIT:
        return predicted + shift * normal, sample, CORRECTOR_ITERATIONS
    return None, None, CORRECTOR_ITERATIONS


class _Branch(object):
    """ One direction of continuation away from the seed. """

    def __init__(self):
        self.vertices = []
        self.saddles = []
        self.residuals = []
        self.end = EndpointKind.STRATUM_INTERSECTION
        self.flags = []

    def add(self, x, sample, context):
        self.vertices.append(np.array(x, dtype=float))
        self.saddles.append([context.tracker.point(label).position.copy() for label in context.pair])
        self.residuals.append(sample.value)


def _continue(f, seed, seed_sample, pair, context, window, sign, max_vertices):
    settings = context.settings
    branch = _Branch()
    branch.add(seed, seed_sample, context)

    x = np.array(seed, dtype=float)
    step = settings.step_max
    previous_tangent = None

    while len(branch.vertices) < max_vertices:
        gradient = _gradient(f, x, pair, context)
        if gradient is None:
            branch.flags.append("invalid splitting near ({0:.6g}, {1:.6g})".format(x[0], x[1]))
            break

        slope = float(np.linalg.norm(gradient))
        if slope < MIN_GRADIENT:
            branch.flags.append("fold of the stratum at ({0:.6g}, {1:.6g})".format(x[0], x[1]))
            if step > settings.step_min:
                step = max(0.5 * step, settings.step_min)
                continue
            break

        normal = gradient / slope
        tangent = np.array([-normal[1], normal[0]])
        if previous_tangent is None:
            tangent = sign * tangent
        elif np.dot(tangent, previous_tangent) < 0.0:
            tangent = -tangent

        h = step
        if context.caustic is not None:
            clearance = context.caustic.distance_to(x)
            if clearance < settings.caustic_margin:
                branch.end = EndpointKind.CAUSTIC_CONTACT
                break
            h = min(h, clearance - 0.5 * settings.caustic_margin)

        exiting = not window.contains(x + h * tangent)
        if exiting:
            h = _distance_to_edge(window, x, tangent)
            if h <= 1e-12:
                branch.end = EndpointKind.WINDOW_EXIT
                break

        corrected, sample, iterations = _correct(f, x + h * tangent, normal, slope, pair, context, h)

        if corrected is None:
            if h > settings.step_min:
                step = max(0.5 * h, settings.step_min)
                continue
            if context.caustic is not None and \
                    context.caustic.distance_to(x) < 10.0 * settings.caustic_margin:
                branch.end = EndpointKind.CAUSTIC_CONTACT
            else:
                branch.flags.append("corrector failed at ({0:.6g}, {1:.6g})".format(x[0], x[1]))
            break

        branch.add(corrected, sample, context)
        previous_tangent = tangent
        x = corrected

        if exiting or not window.contains(x, margin=-1e-9):
            branch.end = EndpointKind.WINDOW_EXIT
            break
        if iterations <= 2:
            step = min(1.5 * step, settings.step_max)
    else:
        branch.flags.append("vertex limit reached")

    return branch


def trace_curve(f, seed, pair, context, window):
    """
    Traces the stratum of the pair (i, j) through a seed in both directions.

    Tangents come from a central finite-difference gradient of the splitting
    function; each predicted point is corrected along the gradient direction.
    Continuation stops at the window boundary, near the caustic, or when the
    corrector fails (a candidate crossing with another stratum).

    :param GeneratingFunction f: generating function
    :param seed: base point with a splitting value within tol_psi
    :param tuple pair: saddle labels (i, j) of the context
    :param SplittingContext context: labelled saddles and branch selection at the seed
    :param Window window: base window
    :return BifurcationCurve: the traced stratum
    """
    seed = np.array(seed, dtype=float)
    seed_sample = splitting(f, seed, pair, context)
    if not seed_sample.valid:
        raise InvalidSampleException(seed_sample.reason, seed)
    if abs(seed_sample.value) > context.settings.tol_psi:
        raise InvalidArgumentException("Seed ({0:.6g}, {1:.6g}) is not on the stratum: splitting {2:.3e}"
                                       .format(seed[0], seed[1], seed_sample.value))

    logger.info("Tracing stratum %s from (%.6g, %.6g)", pair, seed[0], seed[1])
    max_vertices = max(2, context.settings.max_vertices // 2)
    forward = _continue(f, seed, seed_sample, pair, context.copy(), window, 1.0, max_vertices)
    backward = _continue(f, seed, seed_sample, pair, context.copy(), window, -1.0, max_vertices)

    vertices = backward.vertices[:0:-1] + forward.vertices
    saddles = backward.saddles[:0:-1] + forward.saddles
    residuals = backward.residuals[:0:-1] + forward.residuals

    curve = BifurcationCurve(pair, vertices, (backward.end, forward.end), branches=context.branches,
                             saddles=saddles, residuals=residuals, flags=backward.flags + forward.flags)
    logger.info("Stratum %s: %d vertices, ends %s, max residual %.3e", pair, len(vertices), curve.endpoints,
                curve.max_residual)
    return curve
