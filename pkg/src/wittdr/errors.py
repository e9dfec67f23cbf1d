"""Exception hierarchy shared by every module."""


class WittDRError(Exception):
    """Base class for all library errors."""


class MixedRings(WittDRError):
    pass


class NotAUnit(WittDRError, ArithmeticError):
    pass


class NotDivisible(WittDRError, ArithmeticError):
    pass


class NotInteger(WittDRError, ArithmeticError):
    pass


class UnsupportedRing(WittDRError, ValueError):
    pass


class LevelMismatch(WittDRError, ValueError):
    pass


class LevelTooSmall(WittDRError, ValueError):
    pass


class CapExceeded(WittDRError, ValueError):
    """A prime, level, or size cap was exceeded."""


class RingTooLarge(CapExceeded):
    pass


class NotComposable(WittDRError, ValueError):
    pass


class CharMismatch(WittDRError, ValueError):
    pass


class NotPNilpotent(WittDRError, ValueError):
    pass


class NotInKernel(WittDRError, ValueError):
    pass


class NotSpecialUnit(WittDRError, ValueError):
    pass


class Truncated(WittDRError, ValueError):
    pass


class Inconsistent(WittDRError, AssertionError):
    pass


class NoSolution(WittDRError):
    pass


class NonUnique(WittDRError):
    pass


class NotEigenclass(WittDRError):
    pass


class TruncationTooLarge(CapExceeded):
    pass


class OracleMismatch(WittDRError, AssertionError):
    pass


class ConfigInvalid(WittDRError, ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(WittDRError, ValueError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
            if text:
                message += f": {text!r}"
        super().__init__(message)
