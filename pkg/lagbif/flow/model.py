# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import re

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException
from lagbif.utility.geometry import as_polyline


class PointKind(object):
    UNSTABLE_NODE = "unstable-node"
    SADDLE = "saddle"
    STABLE_NODE = "stable-node"
    DEGENERATE = "degenerate"

    BY_INDEX = {0: UNSTABLE_NODE, 1: SADDLE, 2: STABLE_NODE}


class Branch(object):
    UNSTABLE_PLUS = "unstable+"
    UNSTABLE_MINUS = "unstable-"
    STABLE_PLUS = "stable+"
    STABLE_MINUS = "stable-"

    ALL = (UNSTABLE_PLUS, UNSTABLE_MINUS, STABLE_PLUS, STABLE_MINUS)
    UNSTABLE = (UNSTABLE_PLUS, UNSTABLE_MINUS)
    STABLE = (STABLE_PLUS, STABLE_MINUS)

    @staticmethod
    def is_unstable(branch):
        return branch in Branch.UNSTABLE

    @staticmethod
    def sign(branch):
        return 1.0 if branch.endswith("+") else -1.0


class Limit(object):
    """
    Where a separatrix ends: node(id), saddle(id), window-exit or max-steps.
    """
    NODE = "node"
    SADDLE = "saddle"
    WINDOW_EXIT = "window-exit"
    MAX_STEPS = "max-steps"

    _PATTERN = re.compile(r"^(node|saddle)\((\d+)\)$")

    def __init__(self, kind, point_id=None):
        if kind in (Limit.NODE, Limit.SADDLE):
            if point_id is None:
                raise InvalidArgumentException("Limit '{0}' needs a critical point id".format(kind))
            point_id = int(point_id)
        elif kind in (Limit.WINDOW_EXIT, Limit.MAX_STEPS):
            point_id = None
        else:
            raise InvalidArgumentException("Unknown limit kind '{0}'".format(kind))

        self.kind = kind
        self.point_id = point_id

    @staticmethod
    def node(point_id):
        return Limit(Limit.NODE, point_id)

    @staticmethod
    def saddle(point_id):
        return Limit(Limit.SADDLE, point_id)

    @staticmethod
    def parse(text):
        match = Limit._PATTERN.match(text)
        if match:
            return Limit(match.group(1), int(match.group(2)))
        return Limit(text)

    def __eq__(self, other):
        if not isinstance(other, Limit):
            return NotImplemented
        return self.kind == other.kind and self.point_id == other.point_id

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.kind, self.point_id))

    def __str__(self):
        if self.point_id is None:
            return self.kind
        return "{0}({1})".format(self.kind, self.point_id)

    __repr__ = __str__


class FlowSettings(object):
    """
    Numerical parameters of critical point solving and separatrix integration.
    """

    def __init__(self,
                 tol_root=1e-10,
                 tol_degenerate=1e-7,
                 tol_capture=1e-4,
                 tol_align_deg=5.0,
                 delta0=1e-5,
                 rtol=1e-9,
                 max_steps=1000000,
                 seed_grid=24,
                 monotone_tol=1e-10):
        self.tol_root = float(tol_root)
        self.tol_degenerate = float(tol_degenerate)
        self.tol_capture = float(tol_capture)
        self.tol_align_deg = float(tol_align_deg)
        self.delta0 = float(delta0)
        self.rtol = float(rtol)
        self.max_steps = int(max_steps)
        self.seed_grid = int(seed_grid)
        self.monotone_tol = float(monotone_tol)

        for name in ("tol_root", "tol_degenerate", "tol_capture", "delta0", "rtol"):
            if getattr(self, name) <= 0.0:
                raise InvalidArgumentException("{0} must be positive".format(name))
        if self.max_steps < 1 or self.seed_grid < 2:
            raise InvalidArgumentException("max_steps must be >= 1 and seed_grid >= 2")

    def refined(self):
        """ Settings with a 2x finer seed grid and half the initial offset. """
        return FlowSettings(self.tol_root, self.tol_degenerate, self.tol_capture, self.tol_align_deg,
                            self.delta0 / 2.0, self.rtol, self.max_steps, self.seed_grid * 2, self.monotone_tol)

    def relaxed(self, rtol):
        """ Settings with the integration tolerance loosened to at least rtol. """
        settings = FlowSettings(**self.to_dict())
        settings.rtol = max(self.rtol, float(rtol))
        return settings

    def to_dict(self):
        return dict(self.__dict__)


class CriticalPoint(object):
    """
    Zero of grad f_x with its Hessian spectrum.

    :ivar numpy.ndarray eigenvectors: columns match `hessian_eigenvalues` (ascending)
    """

    def __init__(self, position, hessian_eigenvalues, morse_index, kind, point_id, eigenvectors=None):
        self.position = np.array(position, dtype=float)
        self.hessian_eigenvalues = tuple(float(v) for v in hessian_eigenvalues)
        self.morse_index = int(morse_index)
        self.kind = kind
        self.id = int(point_id)
        self.eigenvectors = np.eye(2) if eigenvectors is None else np.array(eigenvectors, dtype=float)

    @property
    def is_saddle(self):
        return self.kind == PointKind.SADDLE

    @property
    def is_node(self):
        return self.kind in (PointKind.UNSTABLE_NODE, PointKind.STABLE_NODE)

    @property
    def is_degenerate(self):
        return self.kind == PointKind.DEGENERATE

    @property
    def poincare_sign(self):
        """ +1 for nodes, -1 for saddles. """
        return -1 if self.is_saddle else 1

    def unstable_direction(self):
        return self.eigenvectors[:, 1]

    def stable_direction(self):
        return self.eigenvectors[:, 0]

    def to_dict(self):
        return {
            "id": self.id,
            "position": list(self.position),
            "eigenvalues": list(self.hessian_eigenvalues),
            "morse_index": self.morse_index,
            "kind": self.kind,
        }

    def __repr__(self):
        return "CriticalPoint(id={0}, kind={1}, position={2})".format(self.id, self.kind, tuple(self.position))


class Separatrix(object):
    def __init__(self, saddle_id, branch, trajectory, limit, monotone=True):
        self.saddle_id = int(saddle_id)
        self.branch = branch
        self.trajectory = as_polyline(trajectory)
        self.limit = limit
        self.monotone = bool(monotone)

    @property
    def record(self):
        """ The (saddle_id, branch, limit) triple entering the portrait signature. """
        return self.saddle_id, self.branch, str(self.limit)

    def to_dict(self):
        return {
            "saddle_id": self.saddle_id,
            "branch": self.branch,
            "limit": str(self.limit),
            "monotone": self.monotone,
            "trajectory": self.trajectory.tolist(),
        }


EMPTY_SIGNATURE = u"∅"


def make_signature(separatrices):
    """
    Canonical signature text: sorted (saddle_id, branch, limit) records.
    """
    records = sorted(s.record for s in separatrices)
    if not records:
        return EMPTY_SIGNATURE
    return ";".join("{0}:{1}:{2}".format(*r) for r in records)


def label_free_signature(portrait):
    """
    Signature with critical point ids and branch signs dropped: the census followed by
    the sorted limit kinds of every saddle. Unlike `signature` it does not change when
    points are renumbered or eigenvectors flip sign.
    """
    census = ",".join(str(v) for v in portrait.census)
    saddles = {}
    for s in portrait.separatrices:
        side = "u" if Branch.is_unstable(s.branch) else "s"
        saddles.setdefault(s.saddle_id, []).append("{0}:{1}".format(side, s.limit.kind))
    if not saddles:
        return "{0}|{1}".format(census, EMPTY_SIGNATURE)
    parts = sorted("[{0}]".format(",".join(sorted(kinds))) for kinds in saddles.values())
    return "{0}|{1}".format(census, "".join(parts))


class PhasePortrait(object):
    """
    Critical points, separatrices and saddle connections of grad f_x at a base point.

    :ivar list connections: ordered saddle pairs (i, j) with an unstable branch of s_i ending at s_j
    :ivar list node_saddle_lines: (node id, saddle id) pairs joined by a stable branch
    :ivar list saddle_node_lines: (saddle id, node id) pairs joined by an unstable branch
    """

    def __init__(self, x, critical_points, separatrices, connections, signature, node_saddle_lines=None,
                 saddle_node_lines=None, on_caustic=False, warnings=None, window=None):
        self.x = np.array(x, dtype=float)
        self.critical_points = list(critical_points)
        self.separatrices = list(separatrices)
        self.connections = list(connections)
        self.signature = signature
        self.node_saddle_lines = list(node_saddle_lines or [])
        self.saddle_node_lines = list(saddle_node_lines or [])
        self.on_caustic = bool(on_caustic)
        self.warnings = list(warnings or [])
        self.window = window

    @property
    def saddles(self):
        return [cp for cp in self.critical_points if cp.is_saddle]

    @property
    def census(self):
        """ (#unstable nodes, #saddles, #stable nodes, #degenerate) """
        kinds = [cp.kind for cp in self.critical_points]
        return (kinds.count(PointKind.UNSTABLE_NODE), kinds.count(PointKind.SADDLE),
                kinds.count(PointKind.STABLE_NODE), kinds.count(PointKind.DEGENERATE))

    def point(self, point_id):
        for cp in self.critical_points:
            if cp.id == point_id:
                return cp
        raise InvalidArgumentException("No critical point with id {0}".format(point_id))

    def separatrix(self, saddle_id, branch):
        for s in self.separatrices:
            if s.saddle_id == saddle_id and s.branch == branch:
                return s
        return None

    def limits(self):
        """ :return dict: (saddle_id, branch) -> Limit """
        return dict(((s.saddle_id, s.branch), s.limit) for s in self.separatrices)

    def to_document(self):
        return {
            "x": list(self.x),
            "critical_points": [cp.to_dict() for cp in self.critical_points],
            "separatrices": [s.to_dict() for s in self.separatrices],
            "connections": [list(c) for c in self.connections],
            "node_lines": {"node_saddle": [list(l) for l in self.node_saddle_lines],
                           "saddle_node": [list(l) for l in self.saddle_node_lines]},
            "signature": self.signature,
            "census": list(self.census),
            "on_caustic": self.on_caustic,
            "warnings": self.warnings,
        }
