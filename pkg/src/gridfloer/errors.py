"""Exception hierarchy shared by every module."""


class GridFloerError(Exception):
    """Base class for all engine errors."""


class ParseError(GridFloerError, ValueError):
    pass


class InvalidBraid(GridFloerError, ValueError):
    pass


class MultiComponentClosure(GridFloerError):
    def __init__(self, components):
        self.components = components
        super().__init__(
            f"braid closure has {components} components; a knot closure is required"
        )


class InvalidGrid(GridFloerError, ValueError):
    """Raised by ``validate``; subclasses name the offending index."""


class DuplicateBasepointInRow(InvalidGrid):
    def __init__(self, row):
        self.index = row
        super().__init__(f"DuplicateBasepointInRow({row})")


class DuplicateBasepointInColumn(InvalidGrid):
    def __init__(self, col):
        self.index = col
        super().__init__(f"DuplicateBasepointInColumn({col})")


class ZWithoutW(InvalidGrid):
    def __init__(self, index):
        self.index = index
        super().__init__(f"ZWithoutW({index})")


class BothInOneCell(InvalidGrid):
    def __init__(self, row):
        self.index = row
        super().__init__(f"BothInOneCell(row {row})")


class BadAxisLayout(InvalidGrid):
    def __init__(self, reason):
        self.index = reason
        super().__init__(f"BadAxisLayout: {reason}")


class NoAxis(GridFloerError):
    pass


class UnknownComponent(GridFloerError, KeyError):
    pass


class IllegalCommutation(GridFloerError):
    pass


class OccupiedCell(GridFloerError):
    pass


class SizeLimitExceeded(GridFloerError):
    pass


class NotFreeBasepoint(GridFloerError):
    pass


class InhomogeneousChain(GridFloerError):
    pass


class VariableZeroedInFlavor(GridFloerError):
    pass


class NotSmallConfiguration(GridFloerError):
    pass


class HasFreeBasepoints(GridFloerError):
    pass


class NoMatch(GridFloerError):
    pass


class ContractViolation(GridFloerError):
    """A property asserted by the theory failed on a computed example."""
