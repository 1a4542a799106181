# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""Critical loci and caustics of Lagrangian maps."""

from lagbif.caustic.model import Window, CriticalLocus, CausticCurve, CausticLabel
from lagbif.caustic.locus import critical_locus
from lagbif.caustic.caustic import push_forward, classify_caustic, compute_caustic, pyramid_slices
