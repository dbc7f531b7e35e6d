"""
Exception hierarchy for the graph-TSP toolkit
"""


class GraphTspError(Exception):
    """Base class for every error raised by the solver stack"""


class GraphParseError(GraphTspError, ValueError):
    """Input text does not follow the graph file format"""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeaderError(GraphParseError):
    pass


class MalformedEdgeError(GraphParseError):
    pass


class EdgeCountError(GraphParseError):
    pass


class VertexRangeError(GraphParseError):
    pass


class DuplicateEdgeError(GraphParseError):
    pass


class SelfLoopError(GraphParseError):
    pass


class DisconnectedGraphError(GraphTspError):
    pass


class UnreachableVertexError(GraphTspError):
    pass


class InvalidVertexError(GraphTspError, ValueError):
    """A vertex id outside 0..n-1 was passed to an operation"""


class NotTwoConnectedError(GraphTspError):
    pass


class EulerError(GraphTspError):
    """Parity or connectivity preconditions of an Euler traversal failed"""


class LpError(GraphTspError):
    pass


class NoPerfectMatchingError(GraphTspError):
    pass


class InfeasibleNetworkError(GraphTspError):
    pass


class PairingError(GraphTspError, ValueError):
    pass


class CertificateError(GraphTspError):
    """A runtime-checked invariant or bound does not hold"""


class OracleCutoffError(GraphTspError):
    pass


class InstanceError(GraphTspError, ValueError):
    """Generator parameters describe no valid instance"""


def require(condition: bool, message: str) -> None:
    """Raise CertificateError unless condition holds"""
    if not condition:
        raise CertificateError(message)
