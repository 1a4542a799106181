# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""Polynomial generating functions, normal forms and their deformations."""

from lagbif.field.poly import Poly2
from lagbif.field.generating import (GeneratingFunction, QuadraticPerturbation, FamilySpec, NormalForm,
                                     normal_form, perturb, versal_family, pyramid_family)
