"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    pass


class ContainmentError(ValueError):
    """A point set was expected to lie inside a polytope and does not."""


class PropernessError(ValueError):
    """The origin is not in the interior where it has to be."""


class LatticeCorruption(RuntimeError):
    """The diamond property failed on a computed face lattice."""


class GraphUndefined(ValueError):
    """Some 2-dimensional coordinate section is neither a square nor a diamond."""


class TheoremViolation(AssertionError):
    """A machine-checked proof step failed; ``witness`` says where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(ValueError):
    """Malformed input text; carries 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
