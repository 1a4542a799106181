# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Separatrix integration of dy/ds = +-(grad f_x)/|grad f_x|, parametrized by arclength.
"""

# Python standard library
import logging

# 3rd party libraries
import numpy as np
from scipy import optimize
from scipy.integrate import RK45

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException
from lagbif.flow.model import Branch, FlowSettings, Limit, Separatrix

logger = logging.getLogger(__name__)

STALL_SPEED = 1e-14


def branch_direction(saddle, branch):
    """
    Initial direction of a saddle branch: the unstable (stable) eigenvector with the
    sign carried by the branch name.
    """
    if not saddle.is_saddle:
        raise InvalidArgumentException("Branches exist only for saddles, got {0}".format(saddle.kind))
    vector = saddle.unstable_direction() if Branch.is_unstable(branch) else saddle.stable_direction()
    return Branch.sign(branch) * vector


def initial_offset(saddle, critical_points, delta0):
    """
    Distance from the saddle at which integration starts: delta0 scaled by the
    distance to the nearest other critical point and the eigenvalue balance.
    """
    others = [np.linalg.norm(cp.position - saddle.position) for cp in critical_points if cp.id != saddle.id]
    nearest = min([1.0] + others)
    magnitudes = sorted(abs(v) for v in saddle.hessian_eigenvalues)
    balance = np.sqrt(magnitudes[0] / magnitudes[1]) if magnitudes[1] > 0.0 else 1.0
    return delta0 * nearest * balance


class _Follower(object):
    """
    Steps an RK45 solver along the normalized gradient field and reports each
    accepted step to a stop test.
    """

    def __init__(self, f, x, start, sign, critical_points, exclude_id, window, settings):
        self.f = f
        self.field = f.field(x)
        self.potential = f.potential(x)
        self.sign = sign
        self.window = window
        self.settings = settings
        self.others = [cp for cp in critical_points if cp.id != exclude_id]
        self.positions = np.array([cp.position for cp in self.others]).reshape(-1, 2)

        def rhs(_, y):
            v = np.asarray(self.field(y), dtype=float)
            speed = np.linalg.norm(v)
            if speed < STALL_SPEED:
                return np.zeros(2)
            return sign * v / speed

        bound = 100.0 * window.diameter * max(1.0, settings.max_steps / 1000.0)
        self.solver = RK45(rhs, 0.0, np.array(start, dtype=float), bound,
                           max_step=self._max_step(start), rtol=settings.rtol, atol=1e-12)

    def _nearest(self, y):
        if len(self.positions) == 0:
            return np.inf, None
        distances = np.linalg.norm(self.positions - y, axis=1)
        k = int(np.argmin(distances))
        return float(distances[k]), self.others[k]

    def _max_step(self, y):
        distance, _ = self._nearest(np.asarray(y))
        return max(min(0.25 * distance, self.window.diameter / 16.0), 1e-12)

    def step(self):
        """
        :return bool: False when the solver failed or finished
        """
        if self.solver.status != 'running':
            return False
        self.solver.max_step = self._max_step(self.solver.y)
        message = self.solver.step()
        if self.solver.status == 'failed':
            logger.debug("RK45 failed: %s", message)
            return False
        return True

    def captured(self, y):
        """
        :return tuple: (Limit, CriticalPoint) for the capture of a node, or of a saddle
                       approached along its incoming eigendirection; (None, None) otherwise
        """
        distance, cp = self._nearest(y)
        if cp is None or distance > self.settings.tol_capture:
            return None, None
        if cp.is_node:
            return Limit.node(cp.id), cp
        if not cp.is_saddle:
            return None, None

        incoming = cp.stable_direction() if self.sign > 0 else cp.unstable_direction()
        offset = y - cp.position
        norm = np.linalg.norm(offset)
        if norm == 0.0:
            return Limit.saddle(cp.id), cp
        cosine = abs(float(np.dot(offset / norm, incoming)))
        if cosine >= np.cos(np.radians(self.settings.tol_align_deg)):
            return Limit.saddle(cp.id), cp
        return None, None


def integrate_branch(f, x, saddle, branch, critical_points, window, settings=None):
    """
    Integrates one separatrix from a saddle until it is captured, leaves the window
    or runs out of steps.

    :return Separatrix: trajectory and limit
    """
    settings = settings or FlowSettings()
    sign = 1.0 if Branch.is_unstable(branch) else -1.0
    start = saddle.position + initial_offset(saddle, critical_points, settings.delta0) * \
        branch_direction(saddle, branch)

    follower = _Follower(f, x, start, sign, critical_points, saddle.id, window, settings)
    trajectory = [saddle.position.copy(), start.copy()]
    monotone = True
    previous_value = follower.potential(start)
    limit = None

    for _ in range(settings.max_steps):
        if not follower.step():
            break
        y = follower.solver.y.copy()
        trajectory.append(y)

        value = follower.potential(y)
        if sign * (value - previous_value) < -settings.monotone_tol:
            monotone = False
        previous_value = value

        limit, target = follower.captured(y)
        if limit is not None:
            trajectory.append(target.position.copy())
            break
        if not window.contains(y):
            limit = Limit(Limit.WINDOW_EXIT)
            break

    if limit is None:
        limit = Limit(Limit.MAX_STEPS)
        logger.warning("Separatrix %s of saddle %d at x = (%g, %g) hit the step budget",
                       branch, saddle.id, x[0], x[1])

    if not monotone:
        logger.warning("f_x not monotone along separatrix %s of saddle %d", branch, saddle.id)

    return Separatrix(saddle.id, branch, np.array(trajectory), limit, monotone)


def first_crossing(f, x, saddle, branch, critical_points, window, section, settings=None):
    """
    Follows a saddle branch to its first crossing of a section line.

    :param tuple section: (point on the line, unit normal of the line)
    :return numpy.ndarray: the crossing point, or None when the branch is captured or
                           leaves the window first
    """
    settings = settings or FlowSettings()
    sign = 1.0 if Branch.is_unstable(branch) else -1.0
    origin, normal = (np.asarray(v, dtype=float) for v in section)
    start = saddle.position + initial_offset(saddle, critical_points, settings.delta0) * \
        branch_direction(saddle, branch)

    follower = _Follower(f, x, start, sign, critical_points, saddle.id, window, settings)

    def side(y):
        return float(np.dot(y - origin, normal))

    previous = side(start)
    if previous == 0.0:
        return start

    for _ in range(settings.max_steps):
        t_old = follower.solver.t
        if not follower.step():
            return None
        y = follower.solver.y
        current = side(y)

        if previous * current <= 0.0:
            dense = follower.solver.dense_output()
            t = optimize.brentq(lambda s: side(dense(s)), t_old, follower.solver.t, xtol=1e-14)
            return np.asarray(dense(t))

        previous = current
        if follower.captured(y)[0] is not None or not window.contains(y):
            return None

    return None
