"""Exception hierarchy.

Every error carries a machine-readable ``kind`` so the CLI can emit a
structured record, and an ``exit_code`` (1 = bad input, 2 = a cap or an
inconclusive computation).
"""


class CoxdomError(Exception):
    exit_code = 1

    @property
    def kind(self):
        return type(self).__name__

    def to_record(self):
        return {"type": self.kind, "message": str(self)}


class ParseError(CoxdomError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidBond(CoxdomError):
    pass


class C1Violation(CoxdomError):
    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class UnsupportedBackend(CoxdomError):
    pass


class DimensionMismatch(CoxdomError):
    pass


class IndexOutOfRange(CoxdomError):
    pass


class UnknownRoot(CoxdomError):
    pass


class InsufficientDepth(CoxdomError):
    pass


class NotDominant(CoxdomError):
    pass


class NotIndependent(CoxdomError):
    pass


class FiniteSubsystem(CoxdomError):
    pass


class NotInSubsystem(CoxdomError):
    pass


class CapExceeded(CoxdomError):
    exit_code = 2


class CertificationFailed(CoxdomError):
    exit_code = 2


class InvalidArgument(CoxdomError):
    pass
