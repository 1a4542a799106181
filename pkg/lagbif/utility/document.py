# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import json
import logging
import os
import tempfile

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException
from lagbif.version import LAGBIF_VERSION

logger = logging.getLogger(__name__)

DECIMALS = 12


def canonical(value):
    """
    Plain JSON types with floats rounded to DECIMALS places, so equal results
    serialize to equal text.
    """
    if isinstance(value, dict):
        return dict((str(k), canonical(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    if isinstance(value, np.ndarray):
        return canonical(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = round(float(value), DECIMALS)
        # no negative zero in the output
        return value + 0.0 if value == 0.0 else value
    return value


def to_json(document):
    return json.dumps(canonical(document), sort_keys=True, indent=4, separators=(',', ': '))


def write_text(path, text):
    """
    Writes through a temporary file in the target directory, then renames it
    over the target.
    """
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)

    handle, temp_path = tempfile.mkstemp(dir=directory, prefix=".lagbif-", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(temp_path, path)
    except Exception:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise

    logger.info("Wrote %s", path)


def write_json(path, document):
    write_text(path, to_json(document) + "\n")


def read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (IOError, OSError, ValueError) as e:
        raise InvalidArgumentException("Cannot read document {0}: {1}".format(path, e))


def manifest(command, config, outputs, seed=None, workers=None):
    """
    Run manifest: tool version, command, resolved configuration and written files.

    :param str command: CLI command name
    :param RunConfig config: resolved configuration
    :param list outputs: file names written by the run
    """
    return {
        "tool": "lagbif",
        "version": LAGBIF_VERSION,
        "command": command,
        "config": config.to_dict(),
        "seed": seed,
        "workers": workers,
        "outputs": sorted(outputs),
    }
