"""Exception hierarchy shared by all gridnav modules."""


class GridNavError(Exception):
    """Base class for all gridnav errors."""


# --- map loading ---

class MapError(GridNavError):
    pass


class MissingFileError(MapError):
    pass


class MalformedDescriptorError(MapError):
    pass


class MalformedImageError(MapError):
    pass


class InvalidThresholdsError(MapError):
    pass


# --- geometry / search ---

class OutOfBoundsError(GridNavError):
    pass


class NoFreeCellError(GridNavError):
    pass


class InvalidProblemError(GridNavError):
    pass


class NoPathError(GridNavError):
    pass


class CorruptParentChainError(GridNavError):
    pass


# --- control / estimation ---

class EmptyPathError(GridNavError):
    pass


class NonPositiveTimestepError(GridNavError):
    pass


class DegenerateRangeError(GridNavError):
    pass


class SingularInnovationError(GridNavError):
    pass


# --- scenarios / io ---

class ScenarioError(GridNavError):
    pass
