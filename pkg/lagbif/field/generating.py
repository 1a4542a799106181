# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

# 3rd party libraries
import numpy as np

# lagbif libraries
from lagbif.exceptions import InvalidArgumentException, MissingArgumentException
from lagbif.field.poly import Poly2


class NormalForm(object):
    FOLD = "fold"
    CUSP_PLUS = "cusp-plus"
    CUSP_MINUS = "cusp-minus"
    ELLIPTIC_UMBILIC = "elliptic-umbilic"
    HYPERBOLIC_UMBILIC = "hyperbolic-umbilic"

    ALL = (FOLD, CUSP_PLUS, CUSP_MINUS, ELLIPTIC_UMBILIC, HYPERBOLIC_UMBILIC)


class GeneratingFunction(object):
    """
    Generating function f of a Lagrangian map y -> grad f(y).

    Formal derivatives up to third order are computed once at construction; all
    evaluation methods accept scalars or numpy arrays for y1 and y2.
    """

    def __init__(self, poly, label=""):
        if not isinstance(poly, Poly2):
            raise InvalidArgumentException("poly must be a Poly2")

        self.poly = poly
        self.label = label

        d1 = poly.derivative(0)
        d2 = poly.derivative(1)
        self._grad = (d1, d2)

        h11 = d1.derivative(0)
        h12 = d1.derivative(1)
        h22 = d2.derivative(1)
        self._hess = (h11, h12, h22)

        # third partials for the gradient of det H
        self._third = (h11.derivative(0), h11.derivative(1), h12.derivative(1), h22.derivative(1))

    def __eq__(self, other):
        if not isinstance(other, GeneratingFunction):
            return NotImplemented
        return self.poly == other.poly

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return "GeneratingFunction({0!r}, label={1!r})".format(self.poly, self.label)

    def evaluate(self, y):
        return self.poly(y[0], y[1])

    def gradient(self, y):
        """
        Value of the Lagrangian map at y.

        :return numpy.ndarray: (df/dy1, df/dy2), stacked on the first axis for array input
        """
        return np.array([self._grad[0](y[0], y[1]), self._grad[1](y[0], y[1])])

    def hessian(self, y):
        """
        :return numpy.ndarray: symmetric 2x2 matrix of second partials (shape (2, 2, ...) for arrays)
        """
        h11, h12, h22 = (h(y[0], y[1]) for h in self._hess)
        return np.array([[h11, h12], [h12, h22]])

    def hessian_det(self, y):
        h11, h12, h22 = (h(y[0], y[1]) for h in self._hess)
        return h11 * h22 - h12 * h12

    def hessian_det_gradient(self, y):
        """
        Exact gradient of det H, assembled from second and third formal partials.
        """
        h11, h12, h22 = (h(y[0], y[1]) for h in self._hess)
        f111, f112, f122, f222 = (t(y[0], y[1]) for t in self._third)

        # d/dy1 (h11 h22 - h12^2) with h11_1 = f111, h22_1 = f122, h12_1 = f112
        g1 = f111 * h22 + h11 * f122 - 2.0 * h12 * f112
        g2 = f112 * h22 + h11 * f222 - 2.0 * h12 * f122
        return np.array([g1, g2])

    def field(self, x):
        """
        The gradient vector field of f_x(y) = f(y) - x.y as a callable on fiber points.
        """
        x = np.asarray(x, dtype=float)

        def _field(y):
            g = self.gradient(y)
            # y may be a batch of points stacked along the trailing axes
            return g - x.reshape((2,) + (1,) * (g.ndim - 1))

        return _field

    def potential(self, x):
        """ f_x as a callable. """
        x = np.asarray(x, dtype=float)

        def _potential(y):
            return self.evaluate(y) - x[0] * y[0] - x[1] * y[1]

        return _potential


class QuadraticPerturbation(object):
    """
    The quadratic form (eps/2)(a*y1^2 + b*y1*y2 + c*y2^2).
    """

    def __init__(self, eps, a, b, c):
        if eps <= 0:
            raise InvalidArgumentException("eps must be positive, got {0}".format(eps))

        self.eps = float(eps)
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)

    def to_poly(self):
        half = self.eps / 2.0
        return Poly2({(2, 0): half * self.a, (1, 1): half * self.b, (0, 2): half * self.c})

    def critical_circle(self):
        """
        Centre and radius of the critical circle of the elliptic umbilic perturbed by this form.

        :return tuple: ((c1, c2), radius)
        """
        quarter = self.eps / 4.0
        return (-quarter * (self.a - self.c), quarter * self.b), quarter * abs(self.a + self.c)

    def __repr__(self):
        return "QuadraticPerturbation(eps={0}, a={1}, b={2}, c={3})".format(self.eps, self.a, self.b, self.c)


class FamilySpec(object):
    """
    A base generating function plus parameterized deformation terms.
    """

    def __init__(self, base, deformation_terms):
        """
        :param GeneratingFunction base: the undeformed function
        :param list deformation_terms: (Poly2, parameter name) pairs
        """
        self.base = base
        self.deformation_terms = list(deformation_terms)

    @property
    def parameters(self):
        return [name for _, name in self.deformation_terms]

    def at(self, **values):
        """
        Evaluates the family at a parameter assignment. Parameters that are not
        given are zero; unknown parameters are rejected.

        :return GeneratingFunction: the family member
        """
        unknown = set(values) - set(self.parameters)
        if unknown:
            raise InvalidArgumentException("Unknown family parameter(s): {0}".format(", ".join(sorted(unknown))))

        poly = self.base.poly
        assigned = []
        for term, name in self.deformation_terms:
            value = float(values.get(name, 0.0))
            if value != 0.0:
                poly = poly + term * value
                assigned.append("{0}={1!r}".format(name, value))

        label = self.base.label
        if assigned:
            label = "{0}[{1}]".format(label, ",".join(assigned))
        return GeneratingFunction(poly, label)


_NORMAL_FORMS = {
    NormalForm.FOLD: {(3, 0): 1.0, (0, 2): 0.5},
    NormalForm.CUSP_PLUS: {(4, 0): 0.25, (2, 1): 0.5, (0, 2): 0.5},
    NormalForm.CUSP_MINUS: {(4, 0): -0.25, (2, 1): 0.5, (0, 2): 0.5},
    NormalForm.ELLIPTIC_UMBILIC: {(3, 0): 1.0 / 3.0, (1, 2): -1.0},
    NormalForm.HYPERBOLIC_UMBILIC: {(3, 0): 1.0 / 3.0, (0, 3): 1.0 / 3.0},
}


def normal_form(kind):
    """
    Built-in generating functions.

    One-variable normal forms are embedded in the plane with the quadratic y2^2/2.
    The elliptic umbilic is (1/3)y1^3 - y1*y2^2, whose Lagrangian map is
    (y1^2 - y2^2, -2*y1*y2).

    :param str kind: one of NormalForm.ALL
    :return GeneratingFunction: the normal form labelled with its kind
    """
    if kind not in _NORMAL_FORMS:
        raise InvalidArgumentException("Unknown normal form '{0}', expected one of: {1}"
                                       .format(kind, ", ".join(NormalForm.ALL)))

    return GeneratingFunction(Poly2(_NORMAL_FORMS[kind]), kind)


def perturb(f, p):
    """
    Adds a perturbation to a generating function.

    :param GeneratingFunction f: function to perturb
    :param p: QuadraticPerturbation or Poly2
    :return GeneratingFunction: f + p, labelled with its provenance
    """
    if p is None:
        raise MissingArgumentException("perturbation must be provided")

    if isinstance(p, QuadraticPerturbation):
        poly = p.to_poly()
        description = "eps={0!r},a={1!r},b={2!r},c={3!r}".format(p.eps, p.a, p.b, p.c)
    elif isinstance(p, Poly2):
        poly = p
        description = p.to_text()
    else:
        raise InvalidArgumentException("Cannot perturb with {0!r}".format(p))

    if poly.is_zero():
        return f

    return GeneratingFunction(f.poly + poly, "{0}+({1})".format(f.label, description))


def versal_family(kind):
    """
    Four-parameter versal deformation of an umbilic: f + a0 + a1*y1 + a2*y2 + a3*q, with
    q = y1^2 for the elliptic and q = y1*y2 for the hyperbolic umbilic.
    """
    if kind == NormalForm.ELLIPTIC_UMBILIC:
        top = Poly2.monomial(2, 0)
    elif kind == NormalForm.HYPERBOLIC_UMBILIC:
        top = Poly2.monomial(1, 1)
    else:
        raise InvalidArgumentException("No versal family for '{0}'".format(kind))

    return FamilySpec(normal_form(kind),
                      [(Poly2.monomial(0, 0), "a0"),
                       (Poly2.monomial(1, 0), "a1"),
                       (Poly2.monomial(0, 1), "a2"),
                       (top, "a3")])


def pyramid_family():
    """ Elliptic umbilic + t*y1^2; its caustics are the x3 = t slices of the pyramid. """
    return FamilySpec(normal_form(NormalForm.ELLIPTIC_UMBILIC), [(Poly2.monomial(2, 0), "t")])
