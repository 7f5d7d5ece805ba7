"""Exception types raised across the package."""


class GsnnError(Exception):
    pass


class NonOrthogonalGenerator(GsnnError, ValueError):
    pass


class OrderBoundExceeded(GsnnError, RuntimeError):
    pass


class InvalidPair(GsnnError, ValueError):
    pass


class InternalInconsistency(GsnnError, RuntimeError):
    pass


class NotIrreducible(GsnnError, ValueError):
    pass


class DimensionMismatch(GsnnError, ValueError):
    pass


class UnsupportedMode(GsnnError, ValueError):
    pass


class ZeroWeight(GsnnError, ValueError):
    pass


class ZeroOutputScale(GsnnError, ValueError):
    pass


class GroupSpecError(GsnnError, ValueError):
    pass
