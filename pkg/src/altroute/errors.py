"""Exception types shared across the package.

The CLI maps these onto exit codes: data problems (file contents,
schema, validation) exit with 2, algorithmic failures (no route,
iteration caps, degenerate inputs) exit with 3.
"""


class AltRouteError(Exception):
    """Base class for all errors raised by this package."""


class DataError(AltRouteError):
    """A problem with input files or their contents."""


class ParseError(DataError):
    """A file could not be read or a line did not match the format."""


class ValidationError(DataError):
    """Parsed data violates a structural invariant (dangling reference,
    non-positive length or speed, ...)."""


class SchemaMismatch(DataError):
    """A file's header disagrees with its body, or a loaded artifact does
    not fit the network it is used with."""


class EmptyZone(DataError):
    """A demand matrix cell refers to a zone that contains no road edges."""


class AlgorithmError(AltRouteError):
    """A routing computation could not produce the requested result."""


class RouteNotFound(AlgorithmError):
    """Destination unreachable from origin under the given weights."""


class SamplingExhausted(AlgorithmError):
    """Random OD sampling hit its attempt cap without finding a
    connected origin-destination pair (usually a fragmented graph)."""


class IterationCapExceeded(AlgorithmError):
    """An iterative route-diversification loop hit its iteration cap
    before collecting the requested number of distinct routes."""


class InsufficientCandidates(AlgorithmError):
    """Fewer feasible near-shortest candidate routes exist than the
    number of routes requested."""


class DegenerateDistribution(AlgorithmError):
    """A value distribution has too few distinct positive values to be
    binned."""
