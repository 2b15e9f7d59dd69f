"""Exception types shared across the package."""


class ParseError(ValueError):
    """A dataset file line could not be parsed.

    Carries enough context to point the user at the offending line.
    """

    def __init__(self, path, lineno: int, text: str, reason: str):
        self.path = str(path)
        self.lineno = lineno
        self.text = text
        self.reason = reason
        super().__init__(f"{self.path}:{lineno}: {reason}: {text!r}")


class HierarchyError(ValueError):
    """The type hierarchy is malformed (cycle, unreachable type, parented root)."""


class UnknownEntityError(ValueError):
    """An entity id was not found in the graph."""


class UnknownTypeError(ValueError):
    """A type id was not found in the hierarchy."""


class UnknownRelationError(ValueError):
    """A relation id was not found in the graph."""


class BudgetExceededError(RuntimeError):
    """A configured work budget ran out (instance cap, node budget, nnz limit, deadline)."""
