"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class RegimeError(ValueError):
    """A construction was requested for an eigenvalue in the wrong regime."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (iteration counts, last residuals, brackets) for error reporting.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} ({extra})"


class NoRootError(ConvergenceError):
    """A root-finding problem has no admissible root in the search window."""
