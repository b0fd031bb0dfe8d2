"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from ``SymdiscError``
so the CLI can map it to an exit code. ``DomainError`` subclasses mark
inputs outside a required domain (exit 2); ``Inconclusive`` marks a search
that ended without a certificate either way (exit 3).
"""


class SymdiscError(Exception):
    pass


class DomainError(SymdiscError):
    """Input lies outside the domain an operation is defined on."""


class ConvergenceFailure(SymdiscError):
    pass


class DegenerateStep(SymdiscError):
    """A Cohn reduction step met |a_0| <= |a_n| (within tolerance)."""

    def __init__(self, margin, step):
        super().__init__(f"degenerate Cohn step {step}: margin {margin:.3e}")
        self.margin = margin
        self.step = step


class SeparationTooSmall(DomainError):
    pass


class Mu1Zero(DomainError):
    pass


class AllCoefficientsZero(DomainError):
    pass


class ConstructionFailed(SymdiscError):
    pass


class SingularResolvent(DomainError):
    pass


class CriteriaDisagreement(SymdiscError):
    def __init__(self, breakdown):
        super().__init__(f"cyclicity criteria disagree: {breakdown}")
        self.breakdown = breakdown


class Order3Violation(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class DenominatorVanishes(DomainError):
    pass


class DivisibilityViolation(DomainError):
    pass


class BudgetExceeded(SymdiscError):
    pass


class Inconclusive(SymdiscError):
    pass


class CertificateMissing(SymdiscError):
    pass


class BranchInconsistency(SymdiscError):
    pass
