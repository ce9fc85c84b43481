"""Exception hierarchy shared by every rankforge module."""


class RankForgeError(Exception):
    """Base class for all library errors."""


class NotPrime(RankForgeError, ValueError):
    pass


class ReducibleModulus(RankForgeError, ValueError):
    pass


class NotPrimitive(RankForgeError, ValueError):
    pass


class DivisionByZero(RankForgeError, ZeroDivisionError):
    pass


class ContextMismatch(RankForgeError, ValueError):
    pass


class LogOfZero(RankForgeError, ValueError):
    pass


class TableUnavailable(RankForgeError, RuntimeError):
    pass


class StrideNotCoprime(RankForgeError, ValueError):
    pass


class DependentBasis(RankForgeError, ValueError):
    pass


class DependentPoints(RankForgeError, ValueError):
    pass


class DimensionMismatch(RankForgeError, ValueError):
    pass


class ZeroCode(RankForgeError, ValueError):
    pass


class EnumerationTooLarge(RankForgeError, RuntimeError):
    pass


class BadK(RankForgeError, ValueError):
    pass


class InadmissibleEta(RankForgeError, ValueError):
    pass


class InadmissiblePair(RankForgeError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularIsometry(RankForgeError, ValueError):
    pass


class EtaZero(RankForgeError, ValueError):
    pass


class WorkBoundExceeded(RankForgeError, RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotASpreadSet(RankForgeError, ValueError):
    pass


class NotScattered(RankForgeError, ValueError):
    pass


class ParseError(RankForgeError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
