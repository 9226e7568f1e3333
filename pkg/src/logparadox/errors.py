"""Exception hierarchy.

Every error raised by the library derives from :class:`LogParadoxError`, which is
itself a ``ValueError`` so callers that only care about bad input can catch that.
"""


class LogParadoxError(ValueError):
    pass


class EmptyVector(LogParadoxError):
    def __init__(self, msg="vector must contain at least one element"):
        super().__init__(msg)


class NonPositiveElement(LogParadoxError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"element {index} is not strictly positive ({value!r})")


class NonFiniteElement(LogParadoxError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"element {index} is not finite ({value!r})")


class OffsetTooLarge(LogParadoxError):
    pass


class ElementNotPresent(LogParadoxError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"value {value!r} not present with sufficient multiplicity")


class DeleteLargerThanVector(LogParadoxError):
    pass


class ReplaceSizeMismatch(LogParadoxError):
    pass


class VectorTooSmall(LogParadoxError):
    pass


class NonPositiveInput(LogParadoxError):
    pass


class FractionOutOfRange(LogParadoxError):
    pass


class InvalidParams(LogParadoxError):
    pass


class AllZeroCounts(LogParadoxError):
    pass
