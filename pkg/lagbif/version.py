# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

""" Version definition for lagbif. """

LAGBIF_VERSION = "0.3.1"
