# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""Critical points, separatrices and phase portraits of grad f_x."""

from lagbif.flow.model import (PointKind, Branch, Limit, FlowSettings, CriticalPoint, Separatrix, PhasePortrait,
                               EMPTY_SIGNATURE, make_signature, label_free_signature)
from lagbif.flow.critical import (classify, poincare_index, solve_critical_points, moduli_dimension, newton_roots,
                                  make_critical_point)
from lagbif.flow.integrate import integrate_branch, first_crossing
from lagbif.flow.portrait import separatrices, portrait, trajectories_csv
from lagbif.flow.components import phase_components
