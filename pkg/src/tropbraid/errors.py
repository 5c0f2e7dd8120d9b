"""Exception hierarchy.

Every error raised on purpose by the package derives from TropBraidError so the
CLI can map families of failures onto exit codes.
"""


class TropBraidError(Exception):
    pass


# combinatorics
class ComplexError(TropBraidError):
    pass


class MissingEdge(ComplexError, KeyError):
    pass


class DegenerateQuad(ComplexError):
    pass


class DuplicateEdge(ComplexError):
    pass


class BoundaryEdge(ComplexError):
    """The edge lies on the boundary of a patch and has only one face."""


class NotFar(ComplexError):
    pass


# geometry
class GeometryError(TropBraidError):
    pass


class DegenerateFace(GeometryError):
    pass


class GeneralPositionViolation(GeometryError):
    def __init__(self, violations):
        self.violations = list(violations)
        # cocircular quadruples are the interesting part; list them first
        order = sorted(self.violations, key=lambda v: getattr(v, "kind", "") != "cocircular")
        shown = "; ".join(str(v) for v in order[:8])
        more = "" if len(self.violations) <= 8 else f" (+{len(self.violations) - 8} more)"
        super().__init__(f"configuration not in general position: {shown}{more}")


# motion
class MotionError(TropBraidError):
    pass


class NonGenericMotion(MotionError):
    pass


class LayoutError(MotionError):
    pass


class ParseError(MotionError, ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class IndexOutOfRange(MotionError, ValueError):
    pass


# data
class DataError(TropBraidError):
    pass


class FileFormatError(DataError, ValueError):
    pass


class MissingEdgeLabel(DataError):
    def __init__(self, edges):
        self.edges = list(edges)
        super().__init__("no label for edges: " + ", ".join(f"{u}-{v}" for u, v in self.edges))


class ShapeMismatch(DataError):
    pass
