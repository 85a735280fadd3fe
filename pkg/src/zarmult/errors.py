"""Exception hierarchy shared by every calculator in the package."""


class ZarMultError(Exception):
    """Base class for all errors raised by zarmult."""


class DomainMismatchError(ZarMultError, TypeError):
    """Operands live over different coefficient domains or variable sets."""


class InvalidInputError(ZarMultError, ValueError):
    pass


class ParseError(InvalidInputError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaError(InvalidInputError):
    pass


class ResourceLimitError(ZarMultError):
    """Desk-scale guardrail tripped (degree, variable count, or iteration cap)."""


class InseparableInputError(InvalidInputError):
    """Derivative vanishes identically in characteristic p; use frobenius_decompose."""


class PrecisionInsufficientError(ZarMultError):
    """A truncated series cannot certify a zero test at the current precision."""


class NotInvertibleError(ZarMultError, ZeroDivisionError):
    pass


class UnsupportedBranchError(ZarMultError):
    """Wild ramification in characteristic p, or an unsupported cover shape."""


class HenselConditionError(ZarMultError):
    """Jacobian of the system is singular at the seed."""


class NotFiniteOverBaseError(ZarMultError):
    """The fiber over the marked point is not finite (F(x, 0) vanishes identically)."""


class NotFiniteOverPerturbationError(NotFiniteOverBaseError):
    pass


class NonGenericDirectionError(ZarMultError):
    pass


class InternalInconsistencyError(ZarMultError):
    """Two independent computation paths disagree. Always a bug."""


class NotSmoothError(ZarMultError):
    pass


class CommonComponentError(ZarMultError):
    """The curves share a component through the point; multiplicity is infinite."""


class ShearBudgetExhaustedError(ResourceLimitError):
    pass
