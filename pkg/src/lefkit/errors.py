"""Exception hierarchy.

Two families matter to callers (and map onto CLI exit codes):
``ContractError`` for malformed input, ``HypothesisViolation`` for
well-formed input on which a theorem's hypotheses fail.
"""


class LefkitError(Exception):
    """Base class for library errors."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [message])


class ContractError(LefkitError):
    """Shape mismatch, malformed data, violated structural invariant."""


class HypothesisViolation(LefkitError):
    """Input is well formed but a required hypothesis does not hold."""


class HardLefschetzFailure(HypothesisViolation):
    def __init__(self, message, report=None):
        diags = [message]
        if report is not None:
            diags.append(f"failing degrees: {list(report.failures)}")
        super().__init__(message, diags)
        self.report = report


class CenterMismatch(HypothesisViolation):
    pass


class ExactnessViolation(HypothesisViolation):
    pass


class OrthogonalityViolation(HypothesisViolation):
    pass


class NotHomologicallyTrivial(HypothesisViolation):
    pass


class IndexViolation(HypothesisViolation):
    """A Hodge-index style positivity hypothesis fails."""


class NonUniqueSolution(HypothesisViolation):
    """A system expected to have a unique solution has a positive-dimensional one."""
