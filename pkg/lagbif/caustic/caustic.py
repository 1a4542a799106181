# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import logging

# 3rd party libraries
import numpy as np
from scipy import optimize

# lagbif libraries
from lagbif.caustic.locus import critical_locus, DEFAULT_TOL_LOCUS
from lagbif.caustic.model import CausticCurve, CausticLabel, Window
from lagbif.exceptions import InvalidArgumentException
from lagbif.field.generating import pyramid_family

logger = logging.getLogger(__name__)

CUSP_TOLERANCE = 1e-10


def _image(f, points):
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return np.zeros((0, 2))
    return np.asarray(f.gradient(points.T)).T


def push_forward(f, locus):
    """
    Maps the critical locus through y -> grad f(y), component by component.

    :param GeneratingFunction f: the generating function the locus was computed for
    :param CriticalLocus locus: the critical locus
    :return CausticCurve: caustic polylines with unset labels
    """
    components = [_image(f, c) for c in locus.components]
    nonmorse = [tuple(_image(f, [p])[0]) for p in locus.degenerate_points]

    return CausticCurve(components=components,
                        labels=[[None] * len(c) for c in components],
                        nonmorse_points=nonmorse,
                        closed=locus.closed,
                        preimages=locus.components,
                        warnings=locus.warnings)


def _kernels(f, points):
    """
    Kernel directions of the Hessian: eigenvector of the smaller-magnitude eigenvalue.
    """
    hessians = np.moveaxis(f.hessian(points.T), -1, 0) if len(points) else np.zeros((0, 2, 2))
    values, vectors = np.linalg.eigh(hessians)
    smaller = np.argmin(np.abs(values), axis=1)
    return vectors[np.arange(len(points)), :, smaller]


def _kernel(f, point):
    return _kernels(f, np.asarray([point], dtype=float))[0]


def _tangent(f, point):
    g = f.hessian_det_gradient(point)
    return np.array([-g[1], g[0]])


def _tangency(k, t):
    return k[0] * t[1] - k[1] * t[0]


def _project(f, point):
    """ Newton projection of a point onto det H = 0. """
    point = np.array(point, dtype=float)
    for _ in range(50):
        g = f.hessian_det(point)
        grad = f.hessian_det_gradient(point)
        norm2 = float(np.dot(grad, grad))
        if norm2 == 0.0:
            break
        step = g / norm2 * grad
        point = point - step
        if np.linalg.norm(step) <= 1e-15:
            break
    return point


def _refine_cusp(f, a, b, k_a):
    """
    Locates the zero of det[k t] between two locus vertices with opposite signs.

    :return numpy.ndarray: the cusp preimage on the critical locus
    """
    def measure(s):
        q = _project(f, (1.0 - s) * a + s * b)
        k = _kernel(f, q)
        if np.dot(k, k_a) < 0.0:
            k = -k
        t = _tangent(f, q)
        return abs(_tangency(k, t / max(np.linalg.norm(t), 1e-300)))

    chord = max(np.linalg.norm(b - a), 1e-300)
    result = optimize.minimize_scalar(measure, bounds=(0.0, 1.0), method='bounded',
                                      options={'xatol': CUSP_TOLERANCE / chord})
    return _project(f, (1.0 - result.x) * a + result.x * b)


def _classify_component(f, points, closed, singular):
    """
    :return tuple: (preimage vertices, labels, cusp preimages)
    """
    n = len(points)
    is_singular = np.array([any(np.linalg.norm(p - s) <= 1e-12 for s in singular) for p in points])

    kernels = _kernels(f, points)
    for v in range(1, n):
        # continuity does not carry across a singular point
        if not is_singular[v] and not is_singular[v - 1] and np.dot(kernels[v], kernels[v - 1]) < 0.0:
            kernels[v] = -kernels[v]

    tangents = np.asarray(f.hessian_det_gradient(points.T)).T
    tangents = np.column_stack([-tangents[:, 1], tangents[:, 0]])
    norms = np.linalg.norm(tangents, axis=1)
    tangents = tangents / np.where(norms > 0.0, norms, 1.0)[:, None]
    c = kernels[:, 0] * tangents[:, 1] - kernels[:, 1] * tangents[:, 0]

    labels = [CausticLabel.NON_MORSE if is_singular[v] else CausticLabel.FOLD for v in range(n)]
    insertions = []
    cusps = []

    segments = [(v, v + 1, 1.0) for v in range(n - 1)]
    if closed and n > 2:
        # closing segment; the kernel may come back with the opposite sign
        segments.append((n - 1, 0, -1.0 if np.dot(kernels[n - 1], kernels[0]) < 0.0 else 1.0))

    for a, b, flip in segments:
        if is_singular[a] or is_singular[b]:
            continue
        if c[a] * c[b] * flip < 0.0:
            cusp = _refine_cusp(f, points[a], points[b], kernels[a])
            insertions.append((a, cusp))
            cusps.append(cusp)

    for v in range(n):
        if is_singular[v] or c[v] != 0.0:
            continue
        before = v - 1 if v > 0 else (n - 1 if closed else None)
        after = v + 1 if v < n - 1 else (0 if closed else None)
        if before is not None and after is not None and c[before] * c[after] < 0.0:
            labels[v] = CausticLabel.CUSP
            cusps.append(points[v])

    vertices = []
    merged = []
    pending = dict((a, q) for a, q in insertions)
    for v in range(n):
        vertices.append(points[v])
        merged.append(labels[v])
        if v in pending:
            vertices.append(pending[v])
            merged.append(CausticLabel.CUSP)

    return np.array(vertices), merged, cusps


def _dedupe_points(points, radius=1e-9):
    unique = []
    for p in points:
        if all(np.linalg.norm(np.asarray(p) - np.asarray(q)) > radius for q in unique):
            unique.append(p)
    return unique


def classify_caustic(f, locus):
    """
    Pushes the critical locus forward and labels every caustic vertex as fold, cusp
    or non-Morse point. A cusp sits where the Hessian kernel is tangent to the
    critical locus, i.e. where det[k t] changes sign; each one is refined between
    the bracketing vertices and inserted into the polyline.

    :param GeneratingFunction f: the generating function
    :param CriticalLocus locus: its critical locus
    :return CausticCurve: labelled caustic
    """
    singular = [np.asarray(s) for s in locus.singular_points]
    components = []
    labels = []
    preimages = []
    cusp_points = []

    for points, closed in zip(locus.components, locus.closed):
        vertices, component_labels, cusps = _classify_component(f, points, closed, singular)
        preimages.append(vertices)
        components.append(_image(f, vertices))
        labels.append(component_labels)
        cusp_points.extend(tuple(p) for p in _image(f, cusps))

    nonmorse = [tuple(p) for p in _image(f, list(locus.degenerate_points) + list(locus.singular_points))]

    caustic = CausticCurve(components=components,
                           labels=labels,
                           cusp_points=_dedupe_points(cusp_points),
                           nonmorse_points=_dedupe_points(nonmorse),
                           closed=locus.closed,
                           preimages=preimages,
                           warnings=locus.warnings)

    logger.info("Caustic of %s: %d component(s), %d cusp(s), %d non-Morse point(s)",
                f.label or "f", len(caustic.components), caustic.cusp_count, len(caustic.nonmorse_points))
    return caustic


def compute_caustic(f, window, tol_locus=DEFAULT_TOL_LOCUS):
    """ Critical locus and labelled caustic of f in one call. """
    return classify_caustic(f, critical_locus(f, window, tol_locus))


def slice_window(t, resolution=64):
    """
    Fiber window enclosing the critical circle of elliptic-umbilic + t*y1^2.
    """
    if t == 0.0:
        return Window((0.0, 0.0), 1.0, resolution)
    return Window((-t / 2.0, 0.0), abs(t), resolution)


def pyramid_slices(t_values, resolution=64, tol_locus=DEFAULT_TOL_LOCUS):
    """
    Caustics of elliptic-umbilic + t*y1^2 for each t: tricuspoids for t != 0, the
    single non-Morse point (0, 0) for t = 0.

    :param list t_values: slice parameters
    :return list: CausticCurve per t, in input order
    """
    if t_values is None:
        raise InvalidArgumentException("t_values must be provided")

    family = pyramid_family()
    result = []

    for t in t_values:
        t = float(t)
        f = family.at(t=t)
        result.append(compute_caustic(f, slice_window(t, resolution), tol_locus))

    return result
