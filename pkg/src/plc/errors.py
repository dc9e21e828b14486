"""Exception hierarchy shared by every module."""


class PlcError(Exception):
    """Base class for all library errors."""


class OutOfUniverse(PlcError, ValueError):
    pass


class CapExceeded(PlcError):
    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what, self.size, self.cap = what, size, cap


class UniversesOverlap(PlcError, ValueError):
    pass


class FormulaSyntaxError(PlcError, ValueError):
    def __init__(self, msg, line=1, col=1):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.col = line, col


class UnknownOperator(FormulaSyntaxError):
    pass


class UnknownProp(PlcError, KeyError):
    def __str__(self):
        return f"unknown proposition {self.args[0]!r}"


class BadAgent(PlcError, ValueError):
    pass


class MPUndefined(PlcError):
    def __init__(self, world=None, agent=None):
        super().__init__(f"most plausible set undefined at world {world!r}, agent {agent}")
        self.world, self.agent = world, agent


class HorizonExceeded(PlcError):
    pass


class NoPrior(PlcError):
    pass


class NotSynchronous(PlcError):
    pass


class UnsupportedFormula(PlcError, ValueError):
    pass
