# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# Python standard library
import re
from tokenize import TokenError

# 3rd party libraries
import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, rationalize, standard_transformations

# lagbif libraries
from lagbif.exceptions import PolynomialParseException, InvalidArgumentException


Y1, Y2 = sp.symbols("y1 y2")

# decimal coefficients are read exactly, then rounded once to float
TRANSFORMATIONS = standard_transformations + (convert_xor, rationalize)

_UNEXPECTED_RE = re.compile(r"[^\w\s.+\-*/^()]")
_DIVISION_BY_ZERO_RE = re.compile(r"/\s*(?:0+\.?0*|\.0+)(?![\d.])")


class Poly2(object):
    """
    Bivariate polynomial in (y1, y2) with real coefficients.

    Terms are kept as a mapping (i, j) -> c for the monomial c*y1^i*y2^j. Zero
    coefficients are never stored, so two polynomials are equal exactly when their
    term mappings are. Instances are treated as immutable.
    """

    def __init__(self, terms=None):
        """
        :param terms: dict {(i, j): c} or iterable of (i, j, c) triples; repeated
                      degree pairs are summed
        """
        merged = {}

        if terms is None:
            terms = {}

        items = terms.items() if isinstance(terms, dict) else (((t[0], t[1]), t[2]) for t in terms)

        for (i, j), c in items:
            if int(i) != i or int(j) != j or i < 0 or j < 0:
                raise InvalidArgumentException("Monomial degrees must be non-negative integers, got ({0}, {1})"
                                               .format(i, j))
            key = (int(i), int(j))
            merged[key] = merged.get(key, 0.0) + float(c)

        self._terms = dict((k, v) for k, v in merged.items() if v != 0.0)

    @staticmethod
    def zero():
        return Poly2()

    @staticmethod
    def monomial(i, j, c=1.0):
        return Poly2({(i, j): c})

    @property
    def terms(self):
        """
        Terms sorted by degree pair.

        :return tuple: (i, j, c) triples
        """
        return tuple((i, j, self._terms[(i, j)]) for i, j in sorted(self._terms))

    def coefficient(self, i, j):
        return self._terms.get((i, j), 0.0)

    def is_zero(self):
        return not self._terms

    @property
    def degree(self):
        """ Total degree; -1 for the zero polynomial. """
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def __call__(self, y1, y2):
        """
        Evaluates the polynomial. Accepts scalars or numpy arrays of matching shape.
        """
        y1 = np.asarray(y1, dtype=float)
        y2 = np.asarray(y2, dtype=float)
        result = np.zeros(np.broadcast(y1, y2).shape)

        for i, j, c in self.terms:
            result = result + c * (y1 ** i) * (y2 ** j)

        if result.ndim == 0:
            return float(result)
        return result

    def derivative(self, axis):
        """
        Formal partial derivative.

        :param int axis: 0 for d/dy1, 1 for d/dy2
        :return Poly2: the derivative
        """
        if axis not in (0, 1):
            raise InvalidArgumentException("axis must be 0 or 1, got {0}".format(axis))

        result = {}
        for (i, j), c in self._terms.items():
            if axis == 0 and i > 0:
                result[(i - 1, j)] = c * i
            elif axis == 1 and j > 0:
                result[(i, j - 1)] = c * j

        return Poly2(result)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Poly2.monomial(0, 0, other)
        if not isinstance(other, Poly2):
            return NotImplemented

        result = dict(self._terms)
        for key, c in other._terms.items():
            result[key] = result.get(key, 0.0) + c

        return Poly2(result)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Poly2.monomial(0, 0, other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return Poly2(dict((k, c * scalar) for k, c in self._terms.items()))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._terms == other._terms

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return "Poly2('{0}')".format(self.to_text())

    def to_text(self):
        """
        Serializes as a '+'-separated sum of monomials "c*y1^i*y2^j". Zero powers are
        omitted; the zero polynomial is "0".
        """
        if not self._terms:
            return "0"

        monomials = []
        for i, j, c in self.terms:
            parts = [repr(c)]
            if i:
                parts.append("y1" if i == 1 else "y1^{0}".format(i))
            if j:
                parts.append("y2" if j == 1 else "y2^{0}".format(j))
            monomials.append("*".join(parts))

        return " + ".join(monomials)

    @staticmethod
    def parse(text):
        """
        Parses polynomial text with sympy: whitespace anywhere, unary minus, implicit
        coefficient 1, rational coefficients "p/q", products and powers of sums, '^'
        or '**' for powers.

        :param str text: polynomial text, e.g. "1/3*y1^3 - y1*y2^2"
        :return Poly2: the parsed polynomial
        :raises PolynomialParseException: with the character position of the error
        """
        return _parse(text)


def _error_position(text):
    """ First character sympy cannot read, else the end of the text. """
    match = _UNEXPECTED_RE.search(text)
    return match.start() if match else len(text)


def _parse(text):
    if not text or not text.strip():
        raise PolynomialParseException("Empty polynomial", text, 0)

    try:
        expr = parse_expr(text.strip(), local_dict={"y1": Y1, "y2": Y2}, transformations=TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, ValueError, AttributeError) as e:
        raise PolynomialParseException("Malformed polynomial ({0})".format(e.__class__.__name__),
                                       text, _error_position(text))

    if not isinstance(expr, sp.Expr):
        raise PolynomialParseException("Not a polynomial expression", text, 0)

    unknown = sorted(str(s) for s in expr.free_symbols - set([Y1, Y2]))
    if unknown:
        match = re.search(r"\b{0}\b".format(re.escape(unknown[0])), text)
        raise PolynomialParseException("Unknown variable '{0}'".format(unknown[0]), text,
                                       match.start() if match else 0)

    if expr.has(sp.zoo, sp.oo, sp.nan):
        match = _DIVISION_BY_ZERO_RE.search(text)
        raise PolynomialParseException("Division by zero", text, match.start() if match else 0)

    try:
        poly = sp.Poly(expr, Y1, Y2)
    except sp.PolynomialError:
        raise PolynomialParseException("Not a polynomial in y1, y2", text, 0)

    terms = []
    for (i, j), c in poly.terms():
        if not (c.is_number and c.is_real):
            raise PolynomialParseException("Coefficient '{0}' is not a real number".format(c), text, 0)
        terms.append((i, j, float(c)))
    return Poly2(terms)
