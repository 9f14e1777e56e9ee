"""Exceptions shared across the package."""


class KdfError(Exception):
    """Base class for all library errors."""


class PoleInParameters(KdfError):
    """A denominator Pochhammer product evaluated to zero."""


class ShapeMismatch(KdfError):
    """Operands disagree on variable count, cap, or parameter-list lengths."""


class NotApplicable(KdfError):
    """The identity requires structure the given parameter bundle lacks."""


class ExhaustedRetries(KdfError):
    """Random instance generation hit the resampling budget."""


class ParseError(KdfError):
    """Malformed input document."""
