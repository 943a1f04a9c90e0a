"""Exception hierarchy.

Every error carries a short machine readable ``code`` that the CLI prints
and maps onto an exit status.
"""


class QPMutError(Exception):
    code = "error"
    exit_status = 2


class DimensionError(QPMutError, ValueError):
    code = "dimension"


class DivisibilityError(QPMutError, ArithmeticError):
    code = "divisibility"


class DomainError(QPMutError, ZeroDivisionError):
    code = "domain"


class MutationDomainError(QPMutError, ValueError):
    code = "mutation_domain"


class AdmissibilityError(QPMutError, ValueError):
    code = "admissibility"

    def __init__(self, msg, step=None, vertex=None):
        super().__init__(msg)
        self.step = step
        self.vertex = vertex


class TruncationError(QPMutError, RuntimeError):
    code = "truncation_insufficient"


class InternalConsistencyError(QPMutError, AssertionError):
    code = "internal_consistency"
    exit_status = 3


class RankError(QPMutError, ArithmeticError):
    code = "rank"


class BadPrimeError(QPMutError, ValueError):
    code = "bad_prime"


class PolynomialityError(QPMutError, ArithmeticError):
    code = "polynomiality"
    exit_status = 3


class ResourceCapError(QPMutError, RuntimeError):
    code = "resource_cap"
    exit_status = 4


class ParseError(QPMutError, ValueError):
    code = "parse"

    def __init__(self, msg, offset=None, path=None):
        if offset is not None:
            msg = f"{msg} (at byte {offset})"
        if path:
            msg = f"{msg} (at {path})"
        super().__init__(msg)
        self.offset = offset
        self.path = path
