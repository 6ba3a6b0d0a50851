"""Exception hierarchy shared by every module."""


class ApproxGroupError(Exception):
    pass


class CayleyError(ApproxGroupError):
    """A multiplication table does not describe a group."""


class NotAssociative(CayleyError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"table is not associative at triple ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentity(CayleyError):
    def __init__(self):
        super().__init__("table has no two-sided identity")


class NoInverse(CayleyError):
    def __init__(self, element: int):
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class GroupMismatch(ApproxGroupError):
    pass


class NotSymmetric(ApproxGroupError):
    pass


class MissingIdentity(ApproxGroupError):
    pass


class EmptyInput(ApproxGroupError):
    pass


class CapExceeded(ApproxGroupError):
    """A configured size cap was hit. Never a silent truncation."""


class OrderCapExceeded(CapExceeded):
    pass


class FamilyTooLargeForExhaustive(CapExceeded):
    pass


class SearchBudgetExceeded(CapExceeded):
    pass


class LemmaViolation(ApproxGroupError):
    """A proved inequality or containment failed on concrete data.

    For valid inputs this can only mean an implementation bug (or a
    deliberately injected fault); ``details`` carries the offending
    certificates or a serialized reproducer.
    """

    def __init__(self, lemma: str, message: str, details=None):
        super().__init__(f"[{lemma}] {message}")
        self.lemma = lemma
        self.details = details or {}
