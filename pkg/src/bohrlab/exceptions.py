class BohrLabError(Exception):
    pass


class DomainError(BohrLabError, ValueError):
    """Argument outside the region where an operation is defined."""


class OracleFailure(BohrLabError, RuntimeError):
    """An independent numerical check did not converge."""


class NotPositiveClass(BohrLabError, ValueError):
    pass


class DiagnosticFailure(BohrLabError, RuntimeError):
    """A sampled estimate failed its own consistency check."""
