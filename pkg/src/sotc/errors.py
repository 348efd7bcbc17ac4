"""Exception hierarchy shared by every module of the package."""


class LogicError(Exception):
    """Base class for all errors raised by ``sotc``."""


# sorts and well-formedness
class SortMismatch(LogicError):
    pass


class ArityMismatch(LogicError):
    pass


class TupleSortMismatch(LogicError):
    pass


class TCTuplesNotDisjoint(LogicError):
    pass


class UnboundVariable(LogicError):
    pass


class CaptureDetected(LogicError):
    pass


# text
class FormulaSyntaxError(LogicError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class InconsistentArity(LogicError):
    pass


# structures
class DomainEmpty(LogicError):
    pass


class OutOfRange(LogicError):
    pass


class ElementOutOfRange(OutOfRange):
    pass


class CounterOutOfRange(OutOfRange):
    pass


class NotUnaryVocabulary(LogicError):
    pass


# evaluation and numeric predicates
class UnknownNumericPredicate(LogicError):
    pass


class StateCapExceeded(LogicError):
    pass


class DuplicateName(LogicError):
    pass


class RegistrySealed(LogicError):
    pass


# fragments and transformations
class NotFO1TC(LogicError):
    pass


class NotCMSOTC(LogicError):
    pass


class StraySymbol(LogicError):
    pass


class NotExistsFO(LogicError):
    pass


class NotSecondOrderTuple(LogicError):
    pass


class ShapeMismatch(LogicError):
    pass


class NotInFragment(LogicError):
    pass


class NameClash(LogicError):
    pass


# encoders
class InvalidInstance(LogicError):
    pass


class DimensionMismatch(LogicError):
    pass
