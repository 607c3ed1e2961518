# -*- coding: utf-8 -*-
"""Exceptions raised by pyanthropic."""

###############################################################################


class AnthropicError(ValueError):
    """Base class; all input and validation errors derive from it."""


class DomainError(AnthropicError):
    """An argument lies outside the domain of an operation."""


class DegenerateEvidenceError(AnthropicError):
    """All posterior weights are zero."""


class InconsistentScenarioError(AnthropicError):
    """A scenario violates one of its structural invariants."""


class RegimeViolationError(AnthropicError):
    """Expected number of matching observers too large for non-indexical conditioning."""


class ContradictionError(AnthropicError):
    """Prior puts no mass on totals compatible with the observed birth rank."""


class ConfigurationError(AnthropicError):
    """Bad settings or a factor specification that does not fit its prior."""


###############################################################################


class SamplerStarvationError(AnthropicError):
    """Rejection sampler accepts too few proposals to be of any use."""

    def __init__(self, V: float, acceptance: float, proposals: int):
        self.V = V
        self.acceptance = acceptance
        self.proposals = proposals
        super().__init__(
            f"sampler starved at V={V}: acceptance {acceptance:.3g} after {proposals} proposals"
        )


class ScenarioSyntaxError(AnthropicError):
    """Malformed line in a scenario document."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, col {column}: {message}")


class ScenarioSemanticError(AnthropicError):
    """Well-formed scenario document that does not describe a valid scenario."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")
