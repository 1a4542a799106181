# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""Polyline helpers shared by the caustic and bifurcation code."""

import numpy as np


def as_polyline(points):
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        points = points.reshape(-1, 2)
    return points


def point_polyline_distance(point, polyline):
    """
    Distance from a point to a polyline (a single vertex counts as a point).

    :return tuple: (distance, nearest point on the polyline)
    """
    polyline = as_polyline(polyline)
    point = np.asarray(point, dtype=float)

    if len(polyline) == 0:
        return np.inf, None
    if len(polyline) == 1:
        return float(np.linalg.norm(point - polyline[0])), polyline[0]

    a = polyline[:-1]
    b = polyline[1:]
    ab = b - a
    length2 = np.einsum('ij,ij->i', ab, ab)
    safe = np.where(length2 > 0.0, length2, 1.0)
    s = np.clip(np.einsum('ij,ij->i', point - a, ab) / safe, 0.0, 1.0)
    s = np.where(length2 > 0.0, s, 0.0)
    nearest = a + s[:, None] * ab
    distances = np.linalg.norm(nearest - point, axis=1)
    k = int(np.argmin(distances))
    return float(distances[k]), nearest[k]


def polyline_length(polyline):
    polyline = as_polyline(polyline)
    if len(polyline) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(polyline, axis=0), axis=1)))


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def segment_polyline_intersections(p, q, polyline):
    """
    Intersections of the segment pq with a polyline.

    :return list: (point, segment index, parameter along pq) for each proper crossing
    """
    polyline = as_polyline(polyline)
    if len(polyline) < 2:
        return []

    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a = polyline[:-1]
    b = polyline[1:]
    r = q - p
    s = b - a
    denominator = _cross(np.broadcast_to(r, s.shape), s)
    result = []

    with np.errstate(divide='ignore', invalid='ignore'):
        t = _cross(a - p, s) / denominator
        u = _cross(a - p, np.broadcast_to(r, s.shape)) / denominator

    hits = np.nonzero((denominator != 0.0) & (t >= 0.0) & (t <= 1.0) & (u >= 0.0) & (u <= 1.0))[0]
    for k in hits:
        result.append((p + t[k] * r, int(k), float(t[k])))

    return result


def polyline_intersections(first, second):
    """
    Proper crossings between two polylines.

    :return list: (point, index in first, index in second)
    """
    first = as_polyline(first)
    second = as_polyline(second)
    result = []

    if len(first) < 2 or len(second) < 2:
        return result

    # bounding-box prefilter per segment of the first polyline
    lo2 = np.minimum(second[:-1], second[1:])
    hi2 = np.maximum(second[:-1], second[1:])

    for k in range(len(first) - 1):
        p, q = first[k], first[k + 1]
        lo = np.minimum(p, q)
        hi = np.maximum(p, q)
        overlap = np.all((lo2 <= hi) & (hi2 >= lo), axis=1)
        if not np.any(overlap):
            continue
        for point, index, _ in segment_polyline_intersections(p, q, second):
            if overlap[index]:
                result.append((point, k, index))

    return result


def polyline_distance(first, second):
    """
    Smallest vertex-to-polyline distance between two polylines, with the witness point.

    :return tuple: (distance, witness point on the first polyline)
    """
    first = as_polyline(first)
    best = (np.inf, None)

    crossings = polyline_intersections(first, second)
    if crossings:
        return 0.0, crossings[0][0]

    for vertex in first:
        distance, _ = point_polyline_distance(vertex, second)
        if distance < best[0]:
            best = (distance, vertex)

    for vertex in as_polyline(second):
        distance, nearest = point_polyline_distance(vertex, first)
        if distance < best[0]:
            best = (distance, nearest)

    return best
