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
from lagbif.caustic.model import CriticalLocus

logger = logging.getLogger(__name__)

DEFAULT_TOL_LOCUS = 1e-9
DEGENERATE_THRESHOLD = 1e-12
ZERO_NODE_TOLERANCE = 1e-12
MAX_DEGENERATE_CANDIDATES = 64

# cell corners counter-clockwise: (i, j), (i+1, j), (i+1, j+1), (i, j+1)
_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))
# cell edges as corner index pairs: bottom, right, top, left
_EDGES = ((0, 1), (1, 2), (3, 2), (0, 3))


def _edge_key(i, j, edge):
    if edge == 0:
        return ('h', i, j)
    if edge == 1:
        return ('v', i + 1, j)
    if edge == 2:
        return ('h', i, j + 1)
    return ('v', i, j)


def _neighbour_views(array, fill):
    """ The eight shifted copies of a 2D array, padded with fill. """
    n1, n2 = array.shape
    padded = np.pad(array, 1, mode='constant', constant_values=fill)
    return [padded[1 + di:1 + di + n1, 1 + dj:1 + dj + n2]
            for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj]


def _signs(values):
    """ Sign of each grid value, 0 where |v| is within ZERO_NODE_TOLERANCE of the scale. """
    scale = max(1.0, float(np.max(np.abs(values))))
    signs = np.sign(values)
    signs[np.abs(values) <= ZERO_NODE_TOLERANCE * scale] = 0.0
    return signs


def _node_signs(values):
    """
    Side of zero of every grid node for marching squares. A node carrying an exact
    zero takes the majority side of its nonzero neighbours, so an isolated zero on a
    node does not close a spurious loop around itself.
    """
    signs = _signs(values)
    positive = signs > 0.0
    zero = signs == 0.0
    if not np.any(zero):
        return positive

    views = _neighbour_views(signs, 0.0)
    above = sum((v > 0.0).astype(int) for v in views)
    below = sum((v < 0.0).astype(int) for v in views)
    positive[zero] = above[zero] >= below[zero]
    return positive


class _LocusBuilder(object):
    """
    Marching squares over det Hf on the window grid, stitched into polylines.
    """

    def __init__(self, f, window, tol_locus):
        self.f = f
        self.window = window
        self.tol_locus = tol_locus
        self.axes = window.axes()
        grid = np.meshgrid(self.axes[0], self.axes[1], indexing='ij')
        self.values = np.asarray(f.hessian_det(grid), dtype=float)
        self.positive = _node_signs(self.values)
        self.positions = {}
        self.adjacency = {}
        self.singular = []
        self.warnings = []

    def _point(self, i, j):
        return np.array([self.axes[0][i], self.axes[1][j]])

    def _crossing(self, key):
        if key in self.positions:
            return key

        kind, i, j = key
        i1, j1 = (i + 1, j) if kind == 'h' else (i, j + 1)
        v0 = self.values[i, j]
        v1 = self.values[i1, j1]
        t = 0.0 if v0 == v1 else min(max(v0 / (v0 - v1), 0.0), 1.0)
        self.positions[key] = (1.0 - t) * self._point(i, j) + t * self._point(i1, j1)
        return key

    def _link(self, a, b):
        self.adjacency.setdefault(a, []).append(b)
        self.adjacency.setdefault(b, []).append(a)

    def _find_singular_point(self, i, j):
        """
        Looks for a zero of grad det H inside an ambiguous cell.
        """
        lower = self._point(i, j)
        upper = self._point(i + 1, j + 1)
        center = (lower + upper) / 2.0
        solution = optimize.root(lambda p: self.f.hessian_det_gradient(p), center, method='hybr')

        if not solution.success:
            return None

        point = solution.x
        half_cell = (upper - lower) / 2.0
        if np.any(np.abs(point - center) > 1.5 * half_cell):
            return None
        if abs(self.f.hessian_det(point)) > 1e3 * self.tol_locus:
            return None
        return point

    def scan(self):
        positive = self.positive
        n1, n2 = positive.shape

        # cells with mixed corner signs
        corners = np.stack([positive[:-1, :-1], positive[1:, :-1], positive[1:, 1:], positive[:-1, 1:]])
        mixed = np.any(corners != corners[0], axis=0)

        for i, j in zip(*np.nonzero(mixed)):
            signs = [positive[i + di, j + dj] for di, dj in _CORNERS]
            crossing_edges = [e for e, (a, b) in enumerate(_EDGES) if signs[a] != signs[b]]

            if len(crossing_edges) == 2:
                self._link(self._crossing(_edge_key(i, j, crossing_edges[0])),
                           self._crossing(_edge_key(i, j, crossing_edges[1])))
                continue

            # saddle cell: all four edges are crossed
            keys = [self._crossing(_edge_key(i, j, e)) for e in range(4)]
            singular = self._find_singular_point(i, j)

            if singular is not None:
                node = ('s', len(self.singular))
                self.singular.append(singular)
                self.positions[node] = singular
                for key in keys:
                    self._link(node, key)
                continue

            center = self._point(i, j) + self.window.step / 2.0
            center_positive = self.f.hessian_det(center) >= 0.0
            if center_positive == signs[0]:
                # corners 0 and 2 connect through the centre; cut off corners 1 and 3
                self._link(keys[0], keys[1])
                self._link(keys[2], keys[3])
            else:
                self._link(keys[3], keys[0])
                self._link(keys[1], keys[2])

            message = "ambiguous cell at ({0:.6g}, {1:.6g}) resolved by midpoint".format(*center)
            logger.debug(message)
            self.warnings.append(message)

    def _split_singular_nodes(self):
        """
        Continues branches straight through singular points: each degree-4 node is
        replaced by two pass-through nodes pairing the most opposite directions.
        """
        for index, point in enumerate(self.singular):
            node = ('s', index)
            neighbours = self.adjacency.pop(node, [])
            for neighbour in neighbours:
                self.adjacency[neighbour] = [n for n in self.adjacency[neighbour] if n != node]

            if len(neighbours) != 4:
                # leave the point as the end of every branch meeting it
                for k, neighbour in enumerate(neighbours):
                    end = ('s', index, k)
                    self.positions[end] = point
                    self._link(end, neighbour)
                continue

            directions = []
            for neighbour in neighbours:
                d = self.positions[neighbour] - point
                norm = np.linalg.norm(d)
                directions.append(d / norm if norm > 0 else d)

            best = None
            for partner in range(1, 4):
                score = float(np.dot(directions[0], directions[partner]))
                if best is None or score < best[0]:
                    best = (score, partner)

            partner = best[1]
            rest = [k for k in range(1, 4) if k != partner]
            for pass_index, (a, b) in enumerate(((0, partner), (rest[0], rest[1]))):
                through = ('s', index, pass_index)
                self.positions[through] = point
                self._link(through, neighbours[a])
                self._link(through, neighbours[b])

    def _walk(self, start, visited):
        chain = [start]
        visited.add(start)
        previous, current = None, start

        while True:
            candidates = [n for n in self.adjacency.get(current, []) if n != previous and n not in visited]
            if not candidates:
                closed = len(chain) > 2 and start in self.adjacency.get(current, []) and current != start
                return chain, closed
            previous, current = current, candidates[0]
            visited.add(current)
            chain.append(current)

    def components(self):
        self._split_singular_nodes()
        visited = set()
        chains = []

        for node, neighbours in self.adjacency.items():
            if node not in visited and len(neighbours) == 1:
                chains.append(self._walk(node, visited))

        for node in self.adjacency:
            if node not in visited:
                chains.append(self._walk(node, visited))

        return [(np.array([self.positions[n] for n in chain]),
                 closed,
                 np.array([n[0] == 's' for n in chain]))
                for chain, closed in chains if len(chain) > 1]

    def refine(self, points, frozen):
        """
        Newton projection of every vertex onto det H = 0.
        """
        points = points.copy()
        active = ~frozen
        cell = float(np.linalg.norm(self.window.step))
        start = points.copy()

        for _ in range(40):
            if not np.any(active):
                break
            p = points[active].T
            g = np.atleast_1d(self.f.hessian_det(p))
            grad = np.atleast_2d(self.f.hessian_det_gradient(p).T)
            norm2 = np.einsum('ij,ij->i', grad, grad)
            ok = norm2 > 0.0
            step = np.zeros_like(grad)
            step[ok] = (g[ok] / norm2[ok])[:, None] * grad[ok]
            points[active] = points[active] - step
            done = (np.abs(g) <= self.tol_locus * 1e-3) | (np.linalg.norm(step, axis=1) <= 1e-15 * (1.0 + cell)) | ~ok
            indices = np.nonzero(active)[0]
            active[indices[done]] = False

        residual = np.abs(np.atleast_1d(self.f.hessian_det(points.T)))
        moved = np.linalg.norm(points - start, axis=1)
        bad = (~frozen) & ((residual > self.tol_locus) | (moved > cell))

        if np.any(bad):
            message = "{0} locus vertices did not refine within one cell".format(int(np.sum(bad)))
            logger.warning(message)
            self.warnings.append(message)
            points[bad] = start[bad]

        return points


def _dedupe(points, closed):
    keep = [0]
    for k in range(1, len(points)):
        if np.linalg.norm(points[k] - points[keep[-1]]) > 1e-12:
            keep.append(k)
    if closed and len(keep) > 1 and np.linalg.norm(points[keep[-1]] - points[keep[0]]) <= 1e-12:
        keep.pop()
    return keep


def _isolated_zeros(f, window, values, tol_locus):
    """
    Isolated zeros of det H: local minima of |det H| with no sign change nearby,
    polished to a critical point of det H. A node where det H vanishes exactly is a
    candidate as long as its nonzero neighbours share one sign.
    """
    if np.ptp(values) == 0.0:
        return []

    magnitude = np.abs(values)
    signs = _signs(values)
    is_min = np.ones_like(magnitude, dtype=bool)
    has_above = np.zeros_like(magnitude, dtype=bool)
    has_below = np.zeros_like(magnitude, dtype=bool)

    for neighbour in _neighbour_views(magnitude, np.inf):
        is_min &= magnitude <= neighbour
    for neighbour in _neighbour_views(signs, 0.0):
        has_above |= neighbour > 0.0
        has_below |= neighbour < 0.0

    # a nonzero node also needs no zero next to it; that zero is the candidate
    has_zero = np.zeros_like(magnitude, dtype=bool)
    for neighbour in _neighbour_views(np.where(signs == 0.0, 1, 0), 0):
        has_zero |= neighbour == 1
    one_sided = np.where(signs > 0.0, ~has_below & ~has_zero,
                         np.where(signs < 0.0, ~has_above & ~has_zero, ~(has_above & has_below)))

    candidates = np.argwhere(is_min & one_sided)
    if len(candidates) > MAX_DEGENERATE_CANDIDATES:
        order = np.argsort(magnitude[candidates[:, 0], candidates[:, 1]])
        candidates = candidates[order[:MAX_DEGENERATE_CANDIDATES]]

    axes = window.axes()
    radius = float(np.min(window.step))
    ring = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
    found = []

    for i, j in candidates:
        start = np.array([axes[0][i], axes[1][j]])
        solution = optimize.root(lambda p: f.hessian_det_gradient(p), start, method='hybr')
        if not solution.success:
            continue
        point = solution.x
        if not window.contains(point):
            continue
        if f.hessian_det(point) ** 2 > DEGENERATE_THRESHOLD:
            continue

        around = np.array([point[0] + radius * np.cos(ring), point[1] + radius * np.sin(ring)])
        ring_values = f.hessian_det(around)
        if not (np.all(ring_values > 0.0) or np.all(ring_values < 0.0)):
            continue

        if all(np.linalg.norm(point - np.asarray(p)) > radius for p in found):
            found.append(point)

    return found


def critical_locus(f, window, tol_locus=DEFAULT_TOL_LOCUS):
    """
    Computes the critical locus {det Hf = 0} of a generating function inside a fiber window.

    :param GeneratingFunction f: the generating function
    :param Window window: fiber window and grid resolution
    :param float tol_locus: bound on |det H| at refined vertices
    :return CriticalLocus: polylines, isolated degenerate points and singular points
    """
    builder = _LocusBuilder(f, window, tol_locus)
    builder.scan()

    components = []
    closed_flags = []

    for points, closed, frozen in builder.components():
        points = builder.refine(points, frozen)
        keep = _dedupe(points, closed)
        if len(keep) < 2:
            continue
        components.append(points[keep])
        closed_flags.append(closed)

    degenerate = _isolated_zeros(f, window, builder.values, tol_locus)

    logger.info("Critical locus of %s: %d component(s), %d isolated point(s), %d singular point(s)",
                f.label or "f", len(components), len(degenerate), len(builder.singular))

    return CriticalLocus(components=components,
                         closed=closed_flags,
                         degenerate_points=degenerate,
                         singular_points=builder.singular,
                         warnings=builder.warnings,
                         window=window)
