"""Exception hierarchy shared by every module."""


class LRBerryError(Exception):
    """Base class for all package errors."""


class InvalidSpin(LRBerryError, ValueError):
    pass


class InvalidBargmannIndex(LRBerryError, ValueError):
    pass


class InvalidDimension(LRBerryError, ValueError):
    pass


class InvalidWeight(LRBerryError, ValueError):
    pass


class ExpNotConverged(LRBerryError, ArithmeticError):
    pass


class NoExactDiagonalization(LRBerryError, ValueError):
    pass


class TanPole(LRBerryError, ValueError):
    pass


class SeriesNotConverged(LRBerryError, ArithmeticError):
    pass


class AuxiliarySingularity(LRBerryError, ArithmeticError):
    pass


class NoAdiabaticFixedPoint(LRBerryError, ValueError):
    pass


class HyperbolicSingularity(LRBerryError, ValueError):
    pass


class EmptySector(LRBerryError, ValueError):
    pass


class StepTooLarge(LRBerryError, ValueError):
    pass


class TrackingLost(LRBerryError, RuntimeError):
    pass
