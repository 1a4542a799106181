# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
SVG figures of caustics, portraits and diagrams. Coordinates are mapped from a
window onto a fixed viewBox; styling lives in an embedded stylesheet.
"""

# Python standard library
import logging
import xml.etree.ElementTree as ET

# 3rd party libraries
import numpy as np

logger = logging.getLogger(__name__)

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
SIZE = 600.0
DECIMALS = 3

STYLE = {
    ".frame": {"fill": "none", "stroke": "#999999", "stroke-width": 0.5},
    ".fold": {"fill": "none", "stroke": "#1f4e9c", "stroke-width": 1.5},
    ".cusp": {"fill": "#c0392b", "stroke": "none"},
    ".nonmorse": {"fill": "#8e44ad", "stroke": "none"},
    ".stratum": {"fill": "none", "stroke": "#d35400", "stroke-width": 1.2},
    ".codim2": {"fill": "#000000", "stroke": "none"},
    ".separatrix": {"fill": "none", "stroke": "#2c3e50", "stroke-width": 0.8},
    ".connection": {"fill": "none", "stroke": "#c0392b", "stroke-width": 1.6},
    ".saddle": {"fill": "#ffffff", "stroke": "#2c3e50", "stroke-width": 1.0},
    ".node": {"fill": "#2c3e50", "stroke": "none"},
    ".degenerate": {"fill": "#8e44ad", "stroke": "none"},
    ".label": {"font-family": "sans-serif", "font-size": "10px", "fill": "#333333"},
}


def _style_text():
    blocks = []
    for selector in sorted(STYLE):
        rules = "".join("{0}: {1}; ".format(k, v) for k, v in sorted(STYLE[selector].items()))
        blocks.append("{0} {{ {1}}}".format(selector, rules))
    return "\n".join(blocks)


def _number(value):
    text = "{0:.{1}f}".format(value, DECIMALS).rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


class SvgCanvas(object):
    def __init__(self, window, title=None):
        """
        :param Window window: the plane region shown; its aspect ratio is kept
        :param str title: optional figure title
        """
        self.window = window
        width, height = 2.0 * window.half_widths
        self.scale = SIZE / max(width, height)
        self.width = width * self.scale
        self.height = height * self.scale

        self.root = ET.Element("svg", {
            "xmlns": SVG_NAMESPACE,
            "viewBox": "0 0 {0} {1}".format(_number(self.width), _number(self.height)),
            "width": _number(self.width),
            "height": _number(self.height),
        })
        ET.SubElement(self.root, "style").text = _style_text()
        if title:
            ET.SubElement(self.root, "title").text = title

        self.rectangle(window.lower, window.upper, "frame")

    def map(self, point):
        """ Plane point to viewBox coordinates (y axis up). """
        lower = self.window.lower
        return ((point[0] - lower[0]) * self.scale, self.height - (point[1] - lower[1]) * self.scale)

    def rectangle(self, lower, upper, css):
        x0, y1 = self.map(lower)
        x1, y0 = self.map(upper)
        ET.SubElement(self.root, "rect", {"x": _number(x0), "y": _number(y0), "width": _number(x1 - x0),
                                          "height": _number(y1 - y0), "class": css})

    def polyline(self, points, css, closed=False):
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(points) < 2:
            return
        text = " ".join("{0},{1}".format(*[_number(v) for v in self.map(p)]) for p in points)
        ET.SubElement(self.root, "polygon" if closed else "polyline", {"points": text, "class": css})

    def circle(self, point, radius, css):
        cx, cy = self.map(point)
        ET.SubElement(self.root, "circle", {"cx": _number(cx), "cy": _number(cy), "r": _number(radius),
                                            "class": css})

    def label(self, point, text):
        x, y = self.map(point)
        element = ET.SubElement(self.root, "text", {"x": _number(x + 4.0), "y": _number(y - 4.0), "class": "label"})
        element.text = text

    def to_string(self):
        return ET.tostring(self.root, encoding="unicode") + "\n"


def _draw_caustic(canvas, caustic):
    for component, closed in zip(caustic.components, caustic.closed):
        canvas.polyline(component, "fold", closed=closed)
    for point in caustic.cusp_points:
        canvas.circle(point, 3.0, "cusp")
    for point in caustic.nonmorse_points:
        canvas.circle(point, 3.0, "nonmorse")


def caustic_svg(caustic, window, title=None):
    """
    :param CausticCurve caustic: the caustic
    :param Window window: base-plane region to draw
    :return str: SVG document
    """
    canvas = SvgCanvas(window, title)
    _draw_caustic(canvas, caustic)
    return canvas.to_string()


def slices_svg(caustics, t_values, window):
    """ All slices in one base-plane figure, each labelled with its t at a cusp or vertex. """
    canvas = SvgCanvas(window, "pyramid slices")
    for caustic, t in zip(caustics, t_values):
        _draw_caustic(canvas, caustic)
        anchors = list(caustic.cusp_points) + list(caustic.nonmorse_points)
        if anchors:
            canvas.label(max(anchors, key=lambda p: (p[0], p[1])), "t={0:g}".format(t))
    return canvas.to_string()


def portrait_svg(portrait, window):
    """
    :param PhasePortrait portrait: portrait with separatrix trajectories
    :param Window window: fiber region to draw
    :return str: SVG document
    """
    canvas = SvgCanvas(window, "x = ({0:g}, {1:g})".format(*portrait.x))
    connected = set(portrait.connections)

    for s in portrait.separatrices:
        css = "separatrix"
        if s.limit.point_id is not None and (s.saddle_id, s.limit.point_id) in connected:
            css = "connection"
        canvas.polyline(s.trajectory, css)

    for cp in portrait.critical_points:
        if cp.is_saddle:
            canvas.circle(cp.position, 3.5, "saddle")
        elif cp.is_degenerate:
            canvas.circle(cp.position, 3.5, "degenerate")
        else:
            canvas.circle(cp.position, 3.5, "node")
        canvas.label(cp.position, str(cp.id))
    return canvas.to_string()


def diagram_svg(diagram, window):
    """
    :param BifurcationDiagram diagram: the diagram
    :param Window window: base-plane region to draw
    :return str: SVG document
    """
    canvas = SvgCanvas(window, "bifurcation diagram")
    _draw_caustic(canvas, diagram.caustic)
    for curve in diagram.strata:
        canvas.polyline(curve.polyline, "stratum")
        middle = curve.polyline[len(curve.polyline) // 2]
        canvas.label(middle, "B{0},{1}".format(*curve.pair))
    for point in diagram.codim2_points:
        canvas.circle(point.x, 2.5, "codim2")

    logger.debug("Diagram figure: %d strata, %d cusp(s)", len(diagram.strata), diagram.caustic.cusp_count)
    return canvas.to_string()
