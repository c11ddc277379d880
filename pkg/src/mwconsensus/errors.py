"""Exception hierarchy.

Every error raised for bad input derives from :class:`GraphInputError` (a
``ValueError``) so callers such as the CLI can map them to one exit code.
"""


class GraphInputError(ValueError):
    """Base class for invalid weights, graphs and paths."""


class NotSymmetric(GraphInputError):
    pass


class ZeroMatrix(GraphInputError):
    pass


class Indefinite(GraphInputError):
    pass


class Disconnected(GraphInputError):
    pass


class DuplicateEdge(GraphInputError):
    pass


class SelfLoop(GraphInputError):
    pass


class DimensionMismatch(GraphInputError):
    pass


class NodeOutOfRange(GraphInputError):
    pass


class TooManyNodes(GraphInputError):
    pass


class NotAPath(GraphInputError):
    pass


class PathTouchesCore(GraphInputError):
    pass


class VertexInCore(GraphInputError):
    pass


class NotBalanced(GraphInputError):
    """A check that needs a structurally balanced graph got an imbalanced one."""


class NoPNTree(GraphInputError):
    """A check that needs a positive-negative spanning tree got a graph without one."""


class BadRank(RuntimeError):
    """Random sampling failed to produce linearly independent vectors."""


class NonFiniteState(ArithmeticError):
    pass
