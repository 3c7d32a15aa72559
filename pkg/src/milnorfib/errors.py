"""Exceptions shared across the package."""


class GermFormatError(ValueError):
    """A germ description file is malformed or violates its declared data."""


class NotQuasiHomogeneousError(ValueError):
    """An operation requires a quasi-homogeneous germ and the input is not one."""


class OnVarietyError(ValueError):
    """A point lies on (or numerically too close to) the zero set of the germ."""


class DegenerateSampleError(RuntimeError):
    """Every drawn sample was discarded, so the requested report is empty."""
