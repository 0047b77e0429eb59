class WsatError(Exception):
    """Base class for errors raised by wsatlab."""


class FamilyError(WsatError, ValueError):
    """Parameters violate a precondition (dimensions, domination, duplicates)."""


class CapacityError(WsatError, ValueError):
    """A configured size cap was exceeded."""


class CertificateError(WsatError, AssertionError):
    """An internal consistency check failed; indicates a defect, never user error."""
