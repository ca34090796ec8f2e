"""Exception hierarchy shared by every module.

The CLI maps each family onto its own exit status, so callers can tell a
malformed file from a bad placement from a graph of the wrong shape.
"""


class GameError(ValueError):
    """Base class for all errors raised by this package."""


class ParseError(GameError):
    """An edge-list, labeling or playbook file could not be read."""


class PlacementError(GameError):
    """The two players do not sit on an (admissible) edge of the graph."""


class PreconditionError(GameError):
    """The input has the wrong shape for the requested operation."""


class NotATreeError(PreconditionError):
    pass


class InvalidLabelingError(PreconditionError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid labeling: " + "; ".join(self.violations))
