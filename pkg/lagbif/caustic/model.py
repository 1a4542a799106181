# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException
from lagbif.utility.geometry import as_polyline, point_polyline_distance, segment_polyline_intersections


class CausticLabel(object):
    FOLD = "fold"
    CUSP = "cusp"
    NON_MORSE = "non-Morse point"


class Window(object):
    """
    Axis-aligned rectangle with a sampling resolution, used both in the fiber
    plane (critical locus, portraits) and in the base plane (diagram scans).
    """

    MIN_RESOLUTION = 16

    def __init__(self, center, half_widths, resolution=64):
        """
        :param center: (c1, c2)
        :param half_widths: (h1, h2) or a single positive number
        :param resolution: samples per axis, an int or a pair
        """
        if np.isscalar(half_widths):
            half_widths = (half_widths, half_widths)
        if np.isscalar(resolution):
            resolution = (resolution, resolution)

        self.center = np.array(center, dtype=float)
        self.half_widths = np.array(half_widths, dtype=float)
        self.resolution = (int(resolution[0]), int(resolution[1]))

        if self.center.shape != (2,) or self.half_widths.shape != (2,):
            raise InvalidArgumentException("Window center and half-widths must be pairs")
        if np.any(self.half_widths <= 0.0) or not np.all(np.isfinite(self.half_widths)):
            raise InvalidArgumentException("Window half-widths must be positive, got {0}"
                                           .format(tuple(self.half_widths)))
        if min(self.resolution) < Window.MIN_RESOLUTION:
            raise InvalidArgumentException("Window resolution must be at least {0}, got {1}"
                                           .format(Window.MIN_RESOLUTION, self.resolution))

    @property
    def lower(self):
        return self.center - self.half_widths

    @property
    def upper(self):
        return self.center + self.half_widths

    @property
    def step(self):
        """ Grid spacing per axis. """
        return 2.0 * self.half_widths / (np.array(self.resolution) - 1)

    @property
    def diameter(self):
        return float(2.0 * np.linalg.norm(self.half_widths))

    def axes(self):
        """ :return tuple: (coordinates along axis 1, coordinates along axis 2) """
        lower, upper = self.lower, self.upper
        return (np.linspace(lower[0], upper[0], self.resolution[0]),
                np.linspace(lower[1], upper[1], self.resolution[1]))

    def contains(self, point, margin=0.0):
        point = np.asarray(point, dtype=float)
        return bool(np.all(np.abs(point - self.center) <= self.half_widths - margin))

    def refined(self, factor):
        return Window(self.center, self.half_widths,
                      (self.resolution[0] * factor, self.resolution[1] * factor))

    def boundary_loop(self, points_per_side=64):
        """ Closed counter-clockwise loop along the window boundary (first point not repeated). """
        lower, upper = self.lower, self.upper
        s = np.linspace(0.0, 1.0, points_per_side, endpoint=False)
        bottom = np.column_stack([lower[0] + s * (upper[0] - lower[0]), np.full_like(s, lower[1])])
        right = np.column_stack([np.full_like(s, upper[0]), lower[1] + s * (upper[1] - lower[1])])
        top = np.column_stack([upper[0] - s * (upper[0] - lower[0]), np.full_like(s, upper[1])])
        left = np.column_stack([np.full_like(s, lower[0]), upper[1] - s * (upper[1] - lower[1])])
        return np.vstack([bottom, right, top, left])

    def to_dict(self):
        return {"center": list(self.center), "half_widths": list(self.half_widths),
                "resolution": list(self.resolution)}

    @staticmethod
    def from_dict(data):
        return Window(data["center"], data["half_widths"], data["resolution"])

    def __repr__(self):
        return "Window(center={0}, half_widths={1}, resolution={2})".format(
            tuple(self.center), tuple(self.half_widths), self.resolution)


class CriticalLocus(object):
    """
    Zero set of det Hf inside a fiber window.

    :ivar list components: polylines (N x 2 arrays) in fiber coordinates
    :ivar list closed: whether each component is a closed loop
    :ivar list degenerate_points: isolated zeros of det Hf
    :ivar list singular_points: points of 1D components where det Hf has a critical point
    :ivar list warnings: resolution warnings
    """

    def __init__(self, components=None, closed=None, degenerate_points=None, singular_points=None,
                 warnings=None, window=None):
        self.components = [as_polyline(c) for c in (components or [])]
        self.closed = list(closed) if closed is not None else [False] * len(self.components)
        self.degenerate_points = [tuple(float(v) for v in p) for p in (degenerate_points or [])]
        self.singular_points = [tuple(float(v) for v in p) for p in (singular_points or [])]
        self.warnings = list(warnings or [])
        self.window = window

    @property
    def is_empty(self):
        return not self.components and not self.degenerate_points

    def vertices(self):
        if not self.components:
            return np.zeros((0, 2))
        return np.vstack(self.components)


class CausticCurve(object):
    """
    Caustic in the base plane: polylines with per-vertex fold/cusp labels.

    `preimages` holds, per component, the critical-locus vertices each caustic vertex
    is the image of (cusp vertices are inserted into both).
    """

    def __init__(self, components=None, labels=None, cusp_points=None, nonmorse_points=None,
                 closed=None, preimages=None, warnings=None):
        self.components = [as_polyline(c) for c in (components or [])]
        self.labels = [list(l) for l in labels] if labels is not None else [[] for _ in self.components]
        self.cusp_points = [tuple(float(v) for v in p) for p in (cusp_points or [])]
        self.nonmorse_points = [tuple(float(v) for v in p) for p in (nonmorse_points or [])]
        self.closed = list(closed) if closed is not None else [False] * len(self.components)
        self.preimages = [as_polyline(c) for c in (preimages or [])]
        self.warnings = list(warnings or [])

    @property
    def cusp_count(self):
        return len(self.cusp_points)

    @property
    def is_empty(self):
        return not self.components and not self.nonmorse_points

    def _polylines(self):
        for component, closed in zip(self.components, self.closed):
            if closed and len(component) > 1:
                yield np.vstack([component, component[:1]])
            else:
                yield component

    def distance_to(self, x):
        """
        Distance from a base point to the caustic (infinite for an empty caustic).
        """
        x = np.asarray(x, dtype=float)
        best = np.inf

        for polyline in self._polylines():
            distance, _ = point_polyline_distance(x, polyline)
            best = min(best, distance)

        for point in self.nonmorse_points:
            best = min(best, float(np.linalg.norm(x - np.asarray(point))))

        return best

    def crosses(self, x0, x1):
        """ True when the segment x0-x1 meets the caustic. """
        for polyline in self._polylines():
            if segment_polyline_intersections(x0, x1, polyline):
                return True
        return False

    def crossings(self, x0, x1):
        """
        Points where the segment x0-x1 meets the caustic, ordered from x0.

        :return list: crossing points as numpy arrays
        """
        hits = []
        for polyline in self._polylines():
            hits.extend((t, point) for point, _, t in segment_polyline_intersections(x0, x1, polyline))
        return [point for _, point in sorted(hits, key=lambda hit: hit[0])]

    def to_document(self):
        return {
            "components": [c.tolist() for c in self.components],
            "labels": self.labels,
            "closed": self.closed,
            "cusps": [list(p) for p in self.cusp_points],
            "degenerate_points": [list(p) for p in self.nonmorse_points],
            "warnings": self.warnings,
        }

    @staticmethod
    def from_document(data):
        return CausticCurve(components=data.get("components", []),
                            labels=data.get("labels"),
                            cusp_points=data.get("cusps", []),
                            nonmorse_points=data.get("degenerate_points", []),
                            closed=data.get("closed"),
                            warnings=data.get("warnings", []))
