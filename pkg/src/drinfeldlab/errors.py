"""Failure modes that callers are expected to handle by name."""


class DrinfeldLabError(Exception):
    pass


class BadReductionError(DrinfeldLabError):
    """A coefficient is non-integral or the leading coefficient vanishes mod p."""


class SplittingCapError(DrinfeldLabError):
    """Torsion splitting degree exceeded the configured cap; never truncated silently."""


class CRTInconsistencyError(DrinfeldLabError):
    """Charpoly reconstruction failed a cross-check; indicates a bug, not bad data."""


class ClosureCapError(DrinfeldLabError):
    """Group closure enumeration exceeded its element cap."""


class EnumerationCapError(DrinfeldLabError):
    """Projective/subfield enumeration too large for the exhaustive strategy."""
