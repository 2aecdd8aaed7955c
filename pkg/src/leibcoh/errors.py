"""Exception types raised by the package."""


class LeibcohError(Exception):
    """Base class for all package errors."""


class NotLeibniz(LeibcohError):
    pass


class NotLie(LeibcohError):
    pass


class NotAnIdeal(LeibcohError):
    pass


class NotASubalgebra(LeibcohError):
    pass


class SingularMatrix(LeibcohError):
    pass


class BadModule(LeibcohError):
    pass


class NotRightModule(BadModule):
    pass


class NotSymmetricModule(BadModule):
    pass


class NotAMorphism(LeibcohError):
    pass


class NotSurjective(LeibcohError):
    pass


class NotAChainMap(LeibcohError):
    pass


class DimensionMismatch(LeibcohError):
    pass


class CompositionNotZero(LeibcohError):
    pass


class HypothesisFailed(LeibcohError):
    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis {hypothesis!r} failed" + (f": {detail}" if detail else ""))


class NegativePowers(LeibcohError):
    def __init__(self, laurent):
        self.laurent = laurent
        super().__init__("contraction has negative powers of t; the limit t -> 0 does not exist")


class UnknownName(LeibcohError):
    pass
