"""Exception types shared across the package.

The CLI maps these onto exit codes; see ``hopfobs.cli``.
"""


class HopfobsError(Exception):
    """Base class for all errors raised by this package."""


class MalformedDiagram(HopfobsError):
    """A PD code violates a structural invariant (bad arity, label counts,
    broken arc cycles, or inconsistent orientation data)."""


class SameComponent(HopfobsError):
    """Linking number requested for a component with itself."""


class VariableMismatch(HopfobsError):
    """Arithmetic between Laurent polynomials in different variable counts."""


class BoundExceeded(HopfobsError):
    """A configured resource bound (group order, matrix dimension) was hit."""


class DegenerateDiagram(HopfobsError):
    """An Alexander polynomial computation degenerated (all minors zero)."""


class NotInKernel(HopfobsError):
    """A curve word does not map into the kernel of the covering map."""


class SingularAtOmega(HopfobsError):
    """The signature form has a near-zero eigenvalue at the requested point.

    ``flagged_value`` carries the signature computed with near-zero
    eigenvalues discarded, for callers that accept a flagged value.
    """

    def __init__(self, message, flagged_value=None):
        super().__init__(message)
        self.flagged_value = flagged_value


class HermitianViolation(HopfobsError):
    """A matrix fails the Hermitian-under-involution invariant."""


class Inconsistent(HopfobsError):
    """Two routes that must agree exactly disagreed; always a bug or a
    falsified identity, never a recoverable input problem."""


class FormRequired(HopfobsError):
    """A linking form is needed (metabolisers are form-dependent here) and
    none was supplied."""


class InvalidLinkingForm(HopfobsError):
    """A linking form input is not symmetric, not well defined on the stated
    group, or singular."""


class InvalidSeifertMatrix(HopfobsError):
    """An integer matrix is not a Seifert matrix (det(V - V^T) != +-1)."""
