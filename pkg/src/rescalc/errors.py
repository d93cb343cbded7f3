"""Exception hierarchy shared by all modules."""


class RescalcError(Exception):
    """Base class. ``path`` is the root path of the offending subterm, if any."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = tuple(path) if path is not None else None

    def __str__(self):
        msg = super().__str__()
        if self.path is not None:
            return f"{msg} (at {format_path(self.path)})"
        return msg


def format_path(path):
    return "/" + "/".join(str(i) for i in path) if path else "/"


class DegreeMismatch(RescalcError):
    pass


class LengthMismatch(RescalcError):
    pass


class InvalidType(RescalcError):
    pass


class DuplicateName(RescalcError):
    pass


class NonRepresentableType(RescalcError):
    pass


class FlavorMismatch(RescalcError):
    pass


class TypingError(RescalcError):
    pass


class NotLinear(TypingError):
    pass


class TypeMismatch(TypingError):
    pass


class ContextMismatch(TypingError):
    pass


class ShuffleViolation(TypingError):
    pass


class FragmentViolation(TypingError):
    pass


class NotSymmetricSystem(RescalcError):
    pass


class ArityMismatch(RescalcError):
    pass


class NotFree(RescalcError):
    pass


class IllTyped(RescalcError):
    pass


class InvalidRedex(RescalcError):
    pass


class StepBudgetExceeded(RescalcError):
    pass


class ShapeMismatch(RescalcError):
    pass


class NotATensor(RescalcError):
    pass


class SpanMismatch(RescalcError):
    pass


class NotAnArrow(RescalcError):
    pass


class BadSuffix(RescalcError):
    pass


class NotSymRep(RescalcError):
    pass


class NonDiscrete(RescalcError):
    pass


class StructureMismatch(RescalcError):
    pass


class ParseError(RescalcError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col
