"""Exception hierarchy shared by every module of the package."""


class GraphError(ValueError):
    """Base class for invalid graph input or an illegal graph operation."""


class CycleDetected(GraphError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("directed cycle: " + " -> ".join(map(str, self.cycle)))


class DanglingEndpoint(GraphError):
    pass


class EmptyAction(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class UnknownArc(GraphError):
    pass


class EmptySet(GraphError):
    pass


class OverlappingSets(GraphError):
    pass


class NotProperSubset(GraphError):
    pass


class ContractionCreatesCycle(GraphError):
    pass


class EmptyList(GraphError):
    pass


class NotBipartite(GraphError):
    def __init__(self, message, witness=()):
        self.witness = tuple(witness)
        super().__init__(message)


class UnindexedVertex(GraphError):
    pass


class InvalidSpec(ValueError):
    """A generator spec with unusable size parameters."""


class DocumentSyntaxError(ValueError):
    """The document is not well-formed JSON or misses required fields."""


class DocumentValidationError(ValueError):
    """The document is well-formed but describes an invalid graph."""


class Violation:
    """One failed hypothesis clause of a decomposition theorem.

    ``clause`` is a short machine-readable name, ``witness`` holds the
    offending arcs, vertices or sets.
    """

    __slots__ = ("clause", "message", "witness")

    def __init__(self, clause, message, witness=None):
        self.clause = clause
        self.message = message
        self.witness = witness

    def to_dict(self):
        return {"clause": self.clause, "message": self.message, "witness": _plain(self.witness)}

    def __repr__(self):
        return f"Violation({self.clause!r}, {self.message!r})"


class PreconditionFailed(Exception):
    def __init__(self, theorem, violations):
        self.theorem = theorem
        self.violations = list(violations)
        names = ", ".join(v.clause for v in self.violations)
        super().__init__(f"{theorem}: hypotheses violated ({names})")

    @property
    def clauses(self):
        return [v.clause for v in self.violations]


def _plain(obj):
    # JSON-friendly rendering of witnesses (sets, arcs, labels, nested tuples)
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        from .graph import natural_key

        return sorted((_plain(x) for x in obj), key=lambda s: natural_key(str(s)))
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return str(obj)
