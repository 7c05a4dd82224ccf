"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input violates a documented precondition (bad coordinate, short route, ...)."""


class NoRouteError(DomainError):
    """No usable path exists between the requested endpoints."""


class GenerationError(DomainError):
    """Synthetic data generation could not satisfy its constraints."""


class ParseError(ValueError):
    """An input file is malformed; the message carries row/feature context."""
