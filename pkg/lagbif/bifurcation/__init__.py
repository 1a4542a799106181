# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""Saddle-connection strata, their continuation and diagram validation."""

from lagbif.bifurcation.model import (EndpointKind, DiagramSettings, SplittingSample, BifurcationCurve, Codim2Point,
                                      Region, Check, ValidationReport, BifurcationDiagram)
from lagbif.bifurcation.tracking import SaddleTracker, match_labels, translate_limits, parse_limits, format_limits
from lagbif.bifurcation.splitting import SplittingContext, splitting, locate_on_segment, sampled_splittings
from lagbif.bifurcation.continuation import trace_curve
from lagbif.bifurcation.validation import validate_diagram
from lagbif.bifurcation.diagram import DEFAULT_FIBER, scan_points, neighbour_pairs, assemble_diagram
