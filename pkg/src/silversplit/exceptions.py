"""
Exception hierarchy of silversplit.

Degenerate or bifurcating configurations are not exceptions; they are flagged
on the result objects. Exceptions signal that an operation could not produce
a meaningful result at all.
"""

__all__ = ["SilversplitError", "DomainError", "ConfigError", "ConvergenceError", "HypothesisError"]


class SilversplitError (Exception):
    pass


class DomainError (SilversplitError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError (SilversplitError, ValueError):
    """Invalid run configuration. The CLI maps this to exit code 2."""


class ConvergenceError (SilversplitError, RuntimeError):
    
    def __init__(self, msg, **diagnostics):
        super().__init__(msg)
        self.diagnostics = diagnostics
    
    def __str__(self):
        msg = super().__str__()
        if self.diagnostics:
            details = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
            msg = f"{msg} ({details})"
        return msg


class HypothesisError (SilversplitError, RuntimeError):
    """A smallness hypothesis of a critical point solver does not hold."""
