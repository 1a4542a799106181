# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.caustic.model import CausticCurve, Window
from lagbif.exceptions import InvalidArgumentException
from lagbif.utility.geometry import as_polyline, point_polyline_distance


class EndpointKind(object):
    CAUSTIC_CONTACT = "caustic-contact"
    WINDOW_EXIT = "window-exit"
    STRATUM_INTERSECTION = "stratum-intersection"

    ALL = (CAUSTIC_CONTACT, WINDOW_EXIT, STRATUM_INTERSECTION)


class DiagramSettings(object):
    """
    Numerical parameters of splitting evaluation, continuation and diagram assembly.
    """

    def __init__(self,
                 tol_psi=1e-8,
                 grid=64,
                 caustic_margin=1e-3,
                 section_scale=0.5,
                 step_min=1e-3,
                 step_max=1e-2,
                 bracket_tol=1e-10,
                 side_offset=5e-3,
                 tol_point=1e-6,
                 max_vertices=5000,
                 scan_rtol=1e-6):
        self.tol_psi = float(tol_psi)
        self.grid = int(grid)
        self.caustic_margin = float(caustic_margin)
        self.section_scale = float(section_scale)
        self.step_min = float(step_min)
        self.step_max = float(step_max)
        self.bracket_tol = float(bracket_tol)
        self.side_offset = float(side_offset)
        self.tol_point = float(tol_point)
        self.max_vertices = int(max_vertices)
        self.scan_rtol = float(scan_rtol)

        if self.grid < 2:
            raise InvalidArgumentException("Diagram grid must have at least 2 samples per axis")
        if not 0.0 < self.step_min <= self.step_max:
            raise InvalidArgumentException("Continuation steps must satisfy 0 < step_min <= step_max")
        for name in ("tol_psi", "caustic_margin", "section_scale", "bracket_tol", "side_offset", "tol_point",
                     "scan_rtol"):
            if getattr(self, name) <= 0.0:
                raise InvalidArgumentException("{0} must be positive".format(name))

    def to_dict(self):
        return dict(self.__dict__)

    @staticmethod
    def from_dict(data):
        return DiagramSettings(**data)


class SplittingSample(object):
    """
    Value of the splitting function of an ordered saddle pair at a base point.

    :ivar section: 2 x 2 array, the end points of the transversal segment
    :ivar bool valid: False when a selected branch missed the segment
    """

    def __init__(self, x, pair, value, section, branches, valid=True, reason=None):
        self.x = np.array(x, dtype=float)
        self.pair = tuple(pair)
        self.value = None if value is None else float(value)
        self.section = None if section is None else np.array(section, dtype=float)
        self.branches = tuple(branches)
        self.valid = bool(valid) and value is not None
        self.reason = reason

    def __repr__(self):
        if not self.valid:
            return "SplittingSample(x={0}, pair={1}, invalid: {2})".format(tuple(self.x), self.pair, self.reason)
        return "SplittingSample(x={0}, pair={1}, value={2:.3e})".format(tuple(self.x), self.pair, self.value)


class BifurcationCurve(object):
    """
    Traced zero set of the splitting function of one ordered saddle pair.

    :ivar tuple pair: saddle labels (i, j) at the seed
    :ivar tuple branches: unstable branch of s_i and stable branch of s_j
    :ivar polyline: N x 2 vertices in the base plane
    :ivar tuple endpoints: how each end of the polyline terminated
    :ivar saddles: N x 2 x 2 positions of s_i and s_j at each vertex, or None
    :ivar residuals: splitting values re-evaluated at the vertices
    :ivar admissible: component test result at the seed, None when not evaluated
    :ivar sides: per side of the seed, the limit records in seed labels
    """

    def __init__(self, pair, polyline, endpoints, branches=None, saddles=None, residuals=None,
                 admissible=None, sides=None, flags=None):
        self.pair = (int(pair[0]), int(pair[1]))
        self.polyline = as_polyline(polyline)
        self.endpoints = tuple(endpoints)
        self.branches = tuple(branches) if branches is not None else (None, None)
        self.saddles = None if saddles is None else np.array(saddles, dtype=float).reshape(-1, 2, 2)
        self.residuals = [] if residuals is None else [float(r) for r in residuals]
        self.admissible = admissible
        self.sides = list(sides or [])
        self.flags = list(flags or [])

        for kind in self.endpoints:
            if kind not in EndpointKind.ALL:
                raise InvalidArgumentException("Unknown curve endpoint '{0}'".format(kind))
        if self.saddles is not None and len(self.saddles) != len(self.polyline):
            raise InvalidArgumentException("Need saddle positions for every curve vertex")

    @property
    def max_residual(self):
        return max([abs(r) for r in self.residuals] or [0.0])

    def saddles_near(self, x):
        """
        Positions of s_i and s_j at the vertex closest to x.

        :return tuple: (2 x 2 array or None, distance from x to the polyline)
        """
        distance, _ = point_polyline_distance(x, self.polyline)
        if self.saddles is None:
            return None, distance
        k = int(np.argmin(np.linalg.norm(self.polyline - np.asarray(x, dtype=float), axis=1)))
        return self.saddles[k], distance

    def to_document(self):
        return {
            "pair": list(self.pair),
            "branches": list(self.branches),
            "polyline": self.polyline.tolist(),
            "endpoints": list(self.endpoints),
            "saddles": None if self.saddles is None else self.saddles.tolist(),
            "residuals": self.residuals,
            "admissible": self.admissible,
            "sides": self.sides,
            "flags": self.flags,
        }

    @staticmethod
    def from_document(data):
        return BifurcationCurve(data["pair"], data["polyline"], data["endpoints"],
                                branches=data.get("branches"),
                                saddles=data.get("saddles"),
                                residuals=data.get("residuals"),
                                admissible=data.get("admissible"),
                                sides=data.get("sides"),
                                flags=data.get("flags"))


class Codim2Point(object):
    """ Crossing of two strata; `curves` are indices into the diagram strata. """

    def __init__(self, x, curves, pairs):
        self.x = np.array(x, dtype=float)
        self.curves = (int(curves[0]), int(curves[1]))
        self.pairs = tuple(tuple(int(v) for v in p) for p in pairs)

    def to_dict(self):
        return {"x": list(self.x), "curves": list(self.curves), "pairs": [list(p) for p in self.pairs]}

    @staticmethod
    def from_dict(data):
        return Codim2Point(data["x"], data["curves"], data["pairs"])


class Region(object):
    """
    Connected component of the sampled window minus caustic and strata.

    :ivar str signature: portrait signature at the representative sample
    :ivar str canonical: label-free form of the signature, constant over the region
    :ivar bool consistent: all checked samples share the canonical signature
    """

    def __init__(self, x, signature, canonical, census, size, consistent=True):
        self.x = np.array(x, dtype=float)
        self.signature = signature
        self.canonical = canonical
        self.census = tuple(int(v) for v in census)
        self.size = int(size)
        self.consistent = bool(consistent)

    def to_dict(self):
        return {"x": list(self.x), "signature": self.signature, "canonical": self.canonical,
                "census": list(self.census), "size": self.size, "consistent": self.consistent}

    @staticmethod
    def from_dict(data):
        return Region(data["x"], data["signature"], data["canonical"], data["census"], data["size"],
                      data.get("consistent", True))


class Check(object):
    def __init__(self, key, description, passed=True, witnesses=None, notes=None):
        self.key = key
        self.description = description
        self.passed = bool(passed)
        self.witnesses = list(witnesses or [])
        self.notes = list(notes or [])

    def fail(self, witness):
        self.passed = False
        self.witnesses.append(witness)

    def to_dict(self):
        return {"key": self.key, "description": self.description, "passed": self.passed,
                "witnesses": self.witnesses, "notes": self.notes}

    @staticmethod
    def from_dict(data):
        return Check(data["key"], data["description"], data["passed"], data.get("witnesses"), data.get("notes"))


class ValidationReport(object):
    def __init__(self, checks=None, unresolved=0):
        self.checks = list(checks or [])
        self.unresolved = int(unresolved)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def check(self, key):
        for check in self.checks:
            if check.key == key:
                return check
        raise InvalidArgumentException("No check '{0}' in report".format(key))

    def to_text(self):
        lines = []
        for check in self.checks:
            lines.append("check {0} ({1}): {2}".format(check.key, check.description,
                                                       "passed" if check.passed else "FAILED"))
            for witness in check.witnesses:
                lines.append("    witness: {0}".format(witness))
            for note in check.notes:
                lines.append("    note: {0}".format(note))
        if self.unresolved:
            lines.append("unresolved boundaries: {0}".format(self.unresolved))
        lines.append("all checks passed" if self.passed else "validation failed")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"checks": [c.to_dict() for c in self.checks], "unresolved": self.unresolved,
                "passed": self.passed}

    @staticmethod
    def from_dict(data):
        return ValidationReport([Check.from_dict(c) for c in data.get("checks", [])], data.get("unresolved", 0))


class BifurcationDiagram(object):
    """
    Caustic, bifurcation strata, codimension-2 points and region signatures of a family
    over a base window.
    """

    def __init__(self, caustic, strata, codim2_points=None, regions=None, report=None, window=None,
                 settings=None, warnings=None, unresolved=None, exclusion_witnesses=None):
        self.caustic = caustic if caustic is not None else CausticCurve()
        self.strata = list(strata)
        self.codim2_points = list(codim2_points or [])
        self.regions = list(regions or [])
        self.report = report
        self.window = window
        self.settings = settings or DiagramSettings()
        self.warnings = list(warnings or [])
        self.unresolved = [list(map(float, u)) for u in (unresolved or [])]
        self.exclusion_witnesses = [list(map(float, w)) for w in (exclusion_witnesses or [])]

    @property
    def grid_step(self):
        if self.window is None:
            return 0.0
        return float(np.max(2.0 * self.window.half_widths / (self.settings.grid - 1)))

    def to_document(self):
        return {
            "caustic": self.caustic.to_document(),
            "strata": [c.to_document() for c in self.strata],
            "codim2_points": [p.to_dict() for p in self.codim2_points],
            "regions": [r.to_dict() for r in self.regions],
            "report": None if self.report is None else self.report.to_dict(),
            "window": None if self.window is None else self.window.to_dict(),
            "settings": self.settings.to_dict(),
            "warnings": self.warnings,
            "unresolved": self.unresolved,
            "exclusion_witnesses": self.exclusion_witnesses,
        }

    @staticmethod
    def from_document(data):
        window = data.get("window")
        report = data.get("report")
        return BifurcationDiagram(CausticCurve.from_document(data.get("caustic", {})),
                                  [BifurcationCurve.from_document(c) for c in data.get("strata", [])],
                                  codim2_points=[Codim2Point.from_dict(p) for p in data.get("codim2_points", [])],
                                  regions=[Region.from_dict(r) for r in data.get("regions", [])],
                                  report=None if report is None else ValidationReport.from_dict(report),
                                  window=None if window is None else Window.from_dict(window),
                                  settings=DiagramSettings.from_dict(data["settings"])
                                  if "settings" in data else None,
                                  warnings=data.get("warnings"),
                                  unresolved=data.get("unresolved"),
                                  exclusion_witnesses=data.get("exclusion_witnesses"))
