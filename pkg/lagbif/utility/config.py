# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Run configuration: built-in defaults, overridden by an INI file, overridden by
LAGBIF_<SECTION>_<KEY> environment variables.
"""

# Python standard library
import configparser
import copy
import logging
import os
import re
from abc import ABCMeta, abstractmethod

# lagbif libraries
from lagbif.bifurcation.model import DiagramSettings
from lagbif.caustic.locus import DEFAULT_TOL_LOCUS
from lagbif.caustic.model import Window
from lagbif.exceptions import ConfigException, InvalidArgumentException
from lagbif.field import GeneratingFunction, NormalForm, Poly2, QuadraticPerturbation, normal_form, perturb
from lagbif.flow.model import FlowSettings

logger = logging.getLogger(__name__)

MAX_DEGREE = 8


def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


# section -> key -> (converter, default)
DEFAULTS = {
    "function": {
        "form": (str, NormalForm.ELLIPTIC_UMBILIC),
        "poly": (str, ""),
        "eps": (float, 0.0),
        "a": (float, 0.0),
        "b": (float, 0.0),
        "c": (float, 0.0),
        "t": (float, 0.0),
        "extra": (str, ""),
    },
    "window": {
        "center_x1": (float, -0.5),
        "center_x2": (float, 0.0),
        "half_width_x1": (float, 1.0),
        "half_width_x2": (float, 1.0),
        "resolution": (int, 64),
    },
    "fiber": {
        "center_y1": (float, 0.0),
        "center_y2": (float, 0.0),
        "half_width_y1": (float, 3.0),
        "half_width_y2": (float, 3.0),
        "resolution": (int, 96),
    },
    "tolerances": {
        "tol_locus": (float, DEFAULT_TOL_LOCUS),
        "tol_root": (float, 1e-10),
        "tol_degenerate": (float, 1e-7),
        "tol_capture": (float, 1e-4),
        "tol_align_deg": (float, 5.0),
        "delta0": (float, 1e-5),
        "tol_psi": (float, 1e-8),
        "rtol": (float, 1e-9),
        "max_steps": (int, 1000000),
    },
    "portrait": {
        "x1": (float, -0.25),
        "x2": (float, 0.0),
        "seed_grid": (int, 24),
    },
    "diagram": {
        "grid": (int, 64),
        "caustic_margin": (float, 1e-3),
        "section_scale": (float, 0.5),
        "step_min": (float, 1e-3),
        "step_max": (float, 1e-2),
        "scan_rtol": (float, 1e-6),
    },
    "slices": {
        "t_values": (_floats, "-1,-0.5,-0.25,0,0.25,0.5,1"),
    },
    "output": {
        "directory": (str, "."),
    },
}


class ConfigSource(object, metaclass=ABCMeta):
    # unknown sections and keys raise; a lenient source has them skipped
    strict = True

    @abstractmethod
    def get_values(self):
        """ :return dict: section -> {key: text} """
        pass


class FileConfigSource(ConfigSource):
    def __init__(self, filename):
        self.filename = filename
        self.values = None

    def get_values(self):
        if self.values is None:
            parser = configparser.ConfigParser(interpolation=None)
            try:
                with open(self.filename, "r") as f:
                    parser.read_file(f)
            except (IOError, OSError) as e:
                raise ConfigException("Cannot read config file {0}: {1}".format(self.filename, e))
            except configparser.Error as e:
                raise ConfigException("Malformed config file {0}: {1}".format(self.filename, e))

            self.values = dict((section, dict(parser.items(section))) for section in parser.sections())

        return self.values


class EnvConfigSource(ConfigSource):
    strict = False
    PATTERN = r"^LAGBIF_(?P<section>[A-Z]+)_(?P<key>[A-Z0-9_]+)$"

    def __init__(self, environ=None):
        self.environ = environ
        self.values = None

    def get_values(self):
        if self.values is None:
            self.values = {}
            environ = os.environ if self.environ is None else self.environ

            for name, value in environ.items():
                match = re.match(EnvConfigSource.PATTERN, name)
                if match:
                    section = match.group("section").lower()
                    self.values.setdefault(section, {})[match.group("key").lower()] = value

        return self.values


class RunConfig(object):
    """
    Fully resolved run configuration with typed values.

    :ivar dict values: section -> {key: value}, every default filled in
    :ivar set explicit: (section, key) pairs that a source set
    """

    def __init__(self, values, explicit=None):
        self.values = values
        self.explicit = set(explicit or [])

    def get(self, section, key):
        return self.values[section][key]

    def generating_function(self):
        """
        :return GeneratingFunction: the configured function
        :raises ConfigException: on a conflicting or too large function description
        :raises PolynomialParseException: on malformed polynomial text
        """
        spec = self.values["function"]

        if spec["poly"]:
            if ("function", "form") in self.explicit:
                raise ConfigException("function.form and function.poly are mutually exclusive", "function.poly")
            f = GeneratingFunction(Poly2.parse(spec["poly"]), "poly")
        else:
            try:
                f = normal_form(spec["form"])
            except InvalidArgumentException as e:
                raise ConfigException(str(e), "function.form")

        if spec["t"] != 0.0:
            f = perturb(f, Poly2({(2, 0): spec["t"]}))
        if spec["extra"]:
            f = perturb(f, Poly2.parse(spec["extra"]))
        if spec["eps"] != 0.0:
            try:
                f = perturb(f, QuadraticPerturbation(spec["eps"], spec["a"], spec["b"], spec["c"]))
            except InvalidArgumentException as e:
                raise ConfigException(str(e), "function.eps")

        if f.poly.degree > MAX_DEGREE:
            raise ConfigException("Polynomial degree {0} exceeds the limit of {1}".format(f.poly.degree, MAX_DEGREE),
                                  "function.poly")
        return f

    def _window(self, section, names):
        spec = self.values[section]
        try:
            return Window((spec["center_" + names[0]], spec["center_" + names[1]]),
                          (spec["half_width_" + names[0]], spec["half_width_" + names[1]]),
                          spec["resolution"])
        except InvalidArgumentException as e:
            raise ConfigException("[{0}] {1}".format(section, e), section)

    def base_window(self):
        return self._window("window", ("x1", "x2"))

    def fiber_window(self):
        return self._window("fiber", ("y1", "y2"))

    def flow_settings(self):
        tol = self.values["tolerances"]
        try:
            return FlowSettings(tol_root=tol["tol_root"],
                                tol_degenerate=tol["tol_degenerate"],
                                tol_capture=tol["tol_capture"],
                                tol_align_deg=tol["tol_align_deg"],
                                delta0=tol["delta0"],
                                rtol=tol["rtol"],
                                max_steps=tol["max_steps"],
                                seed_grid=self.values["portrait"]["seed_grid"])
        except InvalidArgumentException as e:
            raise ConfigException(str(e), "tolerances")

    def diagram_settings(self):
        spec = self.values["diagram"]
        try:
            return DiagramSettings(tol_psi=self.values["tolerances"]["tol_psi"],
                                   grid=spec["grid"],
                                   caustic_margin=spec["caustic_margin"],
                                   section_scale=spec["section_scale"],
                                   step_min=spec["step_min"],
                                   step_max=spec["step_max"],
                                   scan_rtol=spec["scan_rtol"])
        except InvalidArgumentException as e:
            raise ConfigException(str(e), "diagram")

    @property
    def tol_locus(self):
        return self.values["tolerances"]["tol_locus"]

    @property
    def portrait_point(self):
        return self.values["portrait"]["x1"], self.values["portrait"]["x2"]

    @property
    def t_values(self):
        return list(self.values["slices"]["t_values"])

    @property
    def output_directory(self):
        return self.values["output"]["directory"]

    def to_dict(self):
        return copy.deepcopy(self.values)


class ConfigRegistry(object):
    def __init__(self, sources=None):
        """
        :param list sources: ConfigSource objects, later ones override earlier ones
        """
        self.sources = list(sources or [])

    @staticmethod
    def standard(filename=None):
        """ Optional file first, environment last. """
        sources = [FileConfigSource(filename)] if filename else []
        return ConfigRegistry(sources + [EnvConfigSource()])

    def resolve(self):
        """
        :return RunConfig: defaults merged with every source
        :raises ConfigException: on unknown sections or keys of a strict source and on values of the wrong type
        """
        values = dict((section, dict((key, default[1]) for key, default in keys.items()))
                      for section, keys in DEFAULTS.items())
        explicit = set()

        for source in self.sources:
            for section, entries in source.get_values().items():
                if section not in DEFAULTS:
                    if not source.strict:
                        logger.debug("Ignoring unknown config section '%s' from %s", section,
                                     type(source).__name__)
                        continue
                    raise ConfigException("Unknown config section '{0}'".format(section), section)
                for key, text in entries.items():
                    name = "{0}.{1}".format(section, key)
                    if key not in DEFAULTS[section]:
                        if not source.strict:
                            logger.debug("Ignoring unknown config key '%s' from %s", name, type(source).__name__)
                            continue
                        raise ConfigException("Unknown config key '{0}'".format(name), name)
                    values[section][key] = text
                    explicit.add((section, key))

        for section, keys in DEFAULTS.items():
            for key, (convert, _) in keys.items():
                try:
                    values[section][key] = convert(values[section][key])
                except (TypeError, ValueError):
                    name = "{0}.{1}".format(section, key)
                    raise ConfigException("Invalid value '{0}' for '{1}'".format(values[section][key], name), name)

        logger.debug("Resolved configuration: %s", values)
        return RunConfig(values, explicit)
