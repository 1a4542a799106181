# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import logging

# 3rd party libraries
import numpy as np
from scipy.spatial import cKDTree

# lagbif libraries
from lagbif.exceptions import DegenerateLoopException, InvalidArgumentException
from lagbif.flow.model import CriticalPoint, FlowSettings, PointKind

logger = logging.getLogger(__name__)

DEDUPE_RADIUS = 1e-6
MAX_MERGE_RADIUS = 1e-3
NEWTON_ITERATIONS = 80
MAX_SEED_REFINEMENTS = 3


def classify(eigenvalues, tol_degenerate=1e-7):
    """
    Morse index and kind of a critical point from its Hessian eigenvalues.

    :param eigenvalues: pair of reals
    :return tuple: (number of negative eigenvalues, PointKind); kind is DEGENERATE when an
                   eigenvalue is within tol_degenerate of zero
    """
    eigenvalues = [float(v) for v in eigenvalues]
    if len(eigenvalues) != 2:
        raise InvalidArgumentException("Expected two eigenvalues, got {0}".format(len(eigenvalues)))

    index = sum(1 for v in eigenvalues if v < 0.0)
    if any(abs(v) < tol_degenerate for v in eigenvalues):
        return index, PointKind.DEGENERATE
    return index, PointKind.BY_INDEX[index]


def unstable_dimension(cp):
    """ Number of positive Hessian eigenvalues. """
    return sum(1 for v in cp.hessian_eigenvalues if v > 0.0)


def moduli_dimension(source, target):
    """
    Dimension of the space of unparametrized gradient lines from `source` to `target`
    under the flow +grad f_x.

    :return int: u(source) - u(target) - 1
    """
    if source.is_degenerate or target.is_degenerate:
        raise InvalidArgumentException("moduli_dimension needs non-degenerate critical points")
    return unstable_dimension(source) - unstable_dimension(target) - 1


def _angle_step(a, b):
    return (b - a + np.pi) % (2.0 * np.pi) - np.pi


def poincare_index(f, x, loop, max_depth=16):
    """
    Winding number of grad f_x along a closed loop.

    Each loop edge is bisected until the field turns by at most pi/4 across it.

    :param GeneratingFunction f: generating function
    :param x: base point
    :param loop: N x 2 vertices of the closed loop (first vertex not repeated)
    :return int: the winding number
    :raises DegenerateLoopException: when the loop passes through or too close to a zero
    """
    field = f.field(x)
    loop = np.asarray(loop, dtype=float)
    if len(loop) < 3:
        raise InvalidArgumentException("A loop needs at least three vertices")

    values = np.asarray(field(loop.T)).T
    norms = np.linalg.norm(values, axis=1)
    scale = max(float(np.max(norms)), 1.0)
    tiny = 1e-12 * scale

    if np.any(norms <= tiny):
        raise DegenerateLoopException("Loop passes through a zero of the field")

    def angle(v):
        return np.arctan2(v[1], v[0])

    total = 0.0
    n = len(loop)

    for k in range(n):
        stack = [(loop[k], loop[(k + 1) % n], values[k], values[(k + 1) % n], 0)]
        while stack:
            a, b, va, vb, depth = stack.pop()
            step = _angle_step(angle(va), angle(vb))
            if abs(step) <= np.pi / 4.0:
                total += step
                continue
            if depth >= max_depth:
                if abs(step) >= np.pi - 1e-9:
                    raise DegenerateLoopException("Field turns by pi across a loop edge near ({0:.6g}, {1:.6g})"
                                                  .format(*a))
                total += step
                continue
            middle = (a + b) / 2.0
            vm = np.asarray(field(middle))
            if np.linalg.norm(vm) <= tiny:
                raise DegenerateLoopException("Loop passes through a zero of the field")
            # second half first so the first half is processed next
            stack.append((middle, b, vm, vb, depth + 1))
            stack.append((a, middle, va, vm, depth + 1))

    return int(round(total / (2.0 * np.pi)))


def newton_roots(f, x, seeds, max_step):
    """
    Damped Newton on grad f(y) = x from every seed at once.

    :return tuple: (points 2 x N, residual norms)
    """
    y = np.array(seeds, dtype=float)
    x = np.asarray(x, dtype=float).reshape(2, 1)
    active = np.ones(y.shape[1], dtype=bool)

    for _ in range(NEWTON_ITERATIONS):
        if not np.any(active):
            break
        ya = y[:, active]
        residual = np.asarray(f.gradient(ya)) - x
        h = f.hessian(ya)
        det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        ok = np.abs(det) > 1e-300
        safe = np.where(ok, det, 1.0)
        step = np.array([(h[1, 1] * residual[0] - h[0, 1] * residual[1]) / safe,
                         (-h[1, 0] * residual[0] + h[0, 0] * residual[1]) / safe])
        step[:, ~ok] = 0.0

        length = np.linalg.norm(step, axis=0)
        damping = np.where(length > max_step, max_step / np.where(length > 0.0, length, 1.0), 1.0)
        ya = ya - step * damping

        indices = np.nonzero(active)[0]
        y[:, active] = ya
        # run on past tol_root: near a double root the error only halves per step
        tiny_step = length * damping <= 1e-15 * (1.0 + np.linalg.norm(ya, axis=0))
        finished = tiny_step | ~ok | ~np.all(np.isfinite(ya), axis=0)
        active[indices[finished]] = False

    residual = np.linalg.norm(np.asarray(f.gradient(y)) - x, axis=0)
    return y, residual


def make_critical_point(f, position, point_id, settings):
    values, vectors = np.linalg.eigh(f.hessian(position))
    for column in range(2):
        v = vectors[:, column]
        if v[0] < -1e-14 or (abs(v[0]) <= 1e-14 and v[1] < 0.0):
            vectors[:, column] = -v

    index, kind = classify(values, settings.tol_degenerate)
    if kind != PointKind.DEGENERATE and abs(f.hessian_det(position)) < settings.tol_degenerate:
        kind = PointKind.DEGENERATE
    return CriticalPoint(position, values, index, kind, point_id, vectors)


def _solve_once(f, x, window, settings, seed_grid):
    lower = window.lower - 0.05 * window.half_widths
    upper = window.upper + 0.05 * window.half_widths
    g1, g2 = np.meshgrid(np.linspace(lower[0], upper[0], seed_grid),
                         np.linspace(lower[1], upper[1], seed_grid), indexing='ij')
    seeds = np.vstack([g1.ravel(), g2.ravel()])

    y, residual = newton_roots(f, x, seeds, max_step=window.diameter / 4.0)
    finite = np.all(np.isfinite(y), axis=0)
    converged = finite & (residual <= settings.tol_root)
    inside = np.array([window.contains(p) for p in y.T]) if y.size else np.zeros(0, dtype=bool)
    candidates = y[:, converged & inside].T

    if len(candidates) == 0:
        return []

    # keep the best-converged representative of every cluster; the merge radius grows
    # with the error estimate residual / |smallest eigenvalue| near double roots
    residual = residual[converged & inside]
    order = np.argsort(residual)
    candidates = candidates[order]
    residual = residual[order]
    smallest = np.array([np.min(np.abs(np.linalg.eigvalsh(f.hessian(p)))) for p in candidates])
    error = np.minimum(residual / np.maximum(smallest, 1e-300), MAX_MERGE_RADIUS)
    radius = np.maximum(DEDUPE_RADIUS, np.minimum(10.0 * error, MAX_MERGE_RADIUS))

    tree = cKDTree(candidates)
    taken = np.zeros(len(candidates), dtype=bool)
    unique = []
    for k in range(len(candidates)):
        if taken[k]:
            continue
        for neighbour in tree.query_ball_point(candidates[k], radius[k]):
            taken[neighbour] = True
        unique.append(candidates[k])

    unique.sort(key=lambda p: (round(p[0], 9), round(p[1], 9)))
    return [make_critical_point(f, p, k, settings) for k, p in enumerate(unique)]


def solve_critical_points(f, x, window, settings=None, warnings=None):
    """
    All solutions of grad f(y) = x inside the fiber window.

    Multi-start Newton over a seed grid; the census is checked against the winding
    number of the window boundary and the grid is refined on a mismatch.

    :param GeneratingFunction f: generating function
    :param x: base point
    :param Window window: fiber window
    :param FlowSettings settings: tolerances and seed grid
    :param list warnings: receives degradation messages when given
    :return list: CriticalPoint objects ordered by position, ids 0..n-1
    """
    settings = settings or FlowSettings()
    x = np.asarray(x, dtype=float)
    warnings = warnings if warnings is not None else []

    try:
        boundary = poincare_index(f, x, window.boundary_loop())
    except DegenerateLoopException as e:
        boundary = None
        message = "Boundary index unavailable at x = ({0:.6g}, {1:.6g}): {2}".format(x[0], x[1], e)
        logger.warning(message)
        warnings.append(message)

    seed_grid = settings.seed_grid
    points = []

    for attempt in range(MAX_SEED_REFINEMENTS + 1):
        points = _solve_once(f, x, window, settings, seed_grid)
        if boundary is None or any(cp.is_degenerate for cp in points):
            break

        census = sum(cp.poincare_sign for cp in points)
        if census == boundary:
            break

        logger.debug("Index mismatch at x = (%g, %g): census %d, boundary %d, seed grid %d",
                     x[0], x[1], census, boundary, seed_grid)
        seed_grid *= 2
    else:
        message = "Critical point census does not match boundary index {0} at x = ({1:.6g}, {2:.6g})" \
            .format(boundary, x[0], x[1])
        logger.warning(message)
        warnings.append(message)

    return points
