# app/errors.py
# ------------------------------------------------------------
# Exception hierarchy shared by services, routes and the CLI.
# Routes translate these into HTTP status codes, the CLI into
# exit code 2.
# ------------------------------------------------------------


class BracketError(ValueError):
    """Base class for every error raised by the bracket services."""


class WordParseError(BracketError):
    """A word string contains letters outside the surface's alphabet."""


class RibbonError(BracketError):
    """Malformed ribbon order, or boundary count does not match the surface."""


class CoincidentRaysError(BracketError):
    """cyclic_order3 was asked to order two equal infinite words."""


class UnsupportedError(BracketError):
    """The request is well formed but outside what the engines compute."""


class HolonomyError(BracketError):
    """A holonomy failed its determinant, trace or ribbon checks."""


class IndeterminateError(BracketError):
    """A numeric guard fired (near-coincident endpoints, near tangency, lost crossing)."""


class RadiusInsufficientError(BracketError):
    """The crossing search did not stabilize within the configured halo rounds."""
