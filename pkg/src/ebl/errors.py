"""Exception hierarchy shared by all ebl modules."""


class EblError(Exception):
    """Base class for every error raised by ebl."""


class ZeroDenominator(EblError, ZeroDivisionError):
    pass


class BothZero(EblError, ValueError):
    pass


class NotCoprime(EblError, ValueError):
    pass


class OutOfRange(EblError, ValueError):
    pass


class MalformedDigits(EblError, ValueError):
    pass


class UnknownFormula(EblError, KeyError):
    pass


class DegenerateDesign(EblError, ValueError):
    pass
