# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

class LagbifException(Exception):
    """
    Exception used as based exception for other exceptions defined in this package.
    """
    pass


class InvalidArgumentException(LagbifException):
    """"
    Exception used when a argument is of wrong type or out of range
    """
    pass


class MissingArgumentException(LagbifException):
    """"
    Exception used when a argument is missing
    """
    pass


class PolynomialParseException(InvalidArgumentException):
    """
    Raised when polynomial text cannot be parsed. `position` is the 0-based
    character offset where parsing stopped.
    """
    def __init__(self, message, text, position):
        super(PolynomialParseException, self).__init__(
            "{0} at position {1} in '{2}'".format(message, position, text))
        self.text = text
        self.position = position


class ConfigException(InvalidArgumentException):
    """
    Raised for unknown or malformed run configuration entries.
    """
    def __init__(self, message, key=None):
        super(ConfigException, self).__init__(message)
        self.key = key


class DegenerateLoopException(LagbifException):
    """
    Raised when a winding loop passes too close to a zero of the vector field.
    """
    pass


class TrackingException(LagbifException):
    """
    Raised when continuation of critical points from one base point to the next fails.
    """
    pass


class InvalidSampleException(LagbifException):
    """
    Raised when the splitting function cannot be evaluated at a base point.
    """
    def __init__(self, message, x):
        super(InvalidSampleException, self).__init__("{0} (x = {1})".format(message, tuple(x)))
        self.x = tuple(x)


class CausticCrossingException(InvalidArgumentException):
    """
    Raised when a base-plane segment that must avoid the caustic crosses it.
    """
    pass
