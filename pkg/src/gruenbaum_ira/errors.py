"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A numeric parameter violates a documented precondition."""


class StructureError(ValueError):
    """A graph, permutation or code object is malformed."""


class ConstructionError(ValueError):
    """No object satisfying the requested constraints exists."""
