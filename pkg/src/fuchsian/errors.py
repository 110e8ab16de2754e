"""Exception types shared across the package."""


class FuchsianError(Exception):
    pass


class FieldMismatchError(FuchsianError, ValueError):
    pass


class PoleError(FuchsianError, ValueError):
    """cz + d vanished for a point that should lie in the half-plane."""


class NoIsometricCircleError(FuchsianError, ValueError):
    pass


class DegeneratePolygonError(FuchsianError, ValueError):
    pass


class AlgebraMismatchError(FuchsianError, ValueError):
    pass


class SearchOverflowError(FuchsianError, OverflowError):
    pass


class UnrealizableTripleError(FuchsianError, ValueError):
    pass


class DomainConstructionError(FuchsianError, RuntimeError):
    pass


class CenterFixedError(DomainConstructionError):
    pass


class ReductionError(FuchsianError, RuntimeError):
    """PRA did not settle within max_iter."""


class CodebookError(FuchsianError, ValueError):
    pass
