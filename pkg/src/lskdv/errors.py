"""Exception hierarchy shared by every module."""


class LSKdVError(Exception):
    """Base class for all errors raised by the package."""


class ZeroDenominator(LSKdVError, ZeroDivisionError):
    """A rational was requested with denominator zero."""


class MixedKindError(LSKdVError, TypeError):
    """Exact and floating-point scalars were combined."""


class PoleError(LSKdVError, ZeroDivisionError):
    """A denominator of an evaluated expression vanished.

    ``what`` names the vanishing expression, ``where`` optionally locates it.
    """

    def __init__(self, what, where=None):
        self.what = what
        self.where = where
        msg = f"vanishing denominator: {what}"
        if where is not None:
            msg += f" at {where}"
        super().__init__(msg)


class SingularCorner(LSKdVError):
    """The coefficient of the free corner in the quad equation vanished."""

    def __init__(self, expression, cell=None, face=None):
        self.expression = expression
        self.cell = cell
        self.face = face
        parts = [f"free-corner coefficient vanishes: {expression}"]
        if cell is not None:
            parts.append(f"cell {cell}")
        if face is not None:
            parts.append(f"face {face}")
        super().__init__("; ".join(parts))


class ConstraintViolated(LSKdVError, ValueError):
    """The gauge constraint alpha1*beta0**2 == alpha2*alpha0**2 does not hold."""


class DegenerateParameters(LSKdVError, ValueError):
    """alpha1 == alpha2: the quad equation factorizes and classification is invalid."""


class UnknownName(LSKdVError, KeyError):
    """Catalog lookup with a name that is not in the catalog."""


class ZeroResidual(LSKdVError):
    """The characteristic is already a symmetry; the combiner is undefined."""


class InconsistentFit(LSKdVError):
    """Residual ratios disagree between sample points."""


class NotProportional(LSKdVError):
    """Two characteristics are not pointwise proportional."""


class CoreEmpty(LSKdVError, ValueError):
    """A window is too small to leave a certified core after erosion."""
