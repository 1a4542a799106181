# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""Package marker file."""
