"""
Exception hierarchy for the verification engine.

Rule violations (W1-W7, R1-R6) are report entries, never exceptions. The
classes here cover malformed input and misuse of the API; the CLI maps every
ProcessVerifyError to exit status 2.
"""
from typing import Optional, Sequence


class ProcessVerifyError(Exception):
    """Base class for all engine errors."""


class ConfigurationError(ProcessVerifyError):
    """An environment or override value could not be used."""


class UnknownElementError(ProcessVerifyError, KeyError):
    """An element id does not exist in the model or state."""

    def __init__(self, element_id: str, context: str = "model"):
        self.element_id = element_id
        self.context = context
        super().__init__(f"unknown element '{element_id}' in {context}")

    def __str__(self) -> str:
        return self.args[0]


class CyclicModelError(ProcessVerifyError):
    """The association graph contains a cycle."""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = tuple(cycle)
        super().__init__(f"association graph is cyclic: {' -> '.join(self.cycle)}")


class StateMismatchError(ProcessVerifyError):
    """A state is not total over the model's elements."""


class ModelMismatchError(ProcessVerifyError):
    """A trace was recorded against a different model."""


class DslSyntaxError(ProcessVerifyError):
    """A text file could not be parsed. Carries a SourceSpan when known."""

    def __init__(self, message: str, span=None, filename: Optional[str] = None):
        self.message = message
        self.span = span
        self.filename = filename
        super().__init__(self.located())

    def located(self) -> str:
        prefix = self.filename or "<input>"
        if self.span is not None:
            return f"{prefix}:{self.span.line}:{self.span.column}: {self.message}"
        return f"{prefix}: {self.message}"

    def with_filename(self, filename: str) -> "DslSyntaxError":
        return type(self)(self.message, self.span, filename)


class ModelSyntaxError(DslSyntaxError):
    """Process model text is malformed."""


class TraceSyntaxError(DslSyntaxError):
    """Trace text is malformed."""


class FormulaSyntaxError(ProcessVerifyError):
    """Formula text is malformed; position is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        self.message = message
        self.position = position
        super().__init__(f"{message} (at position {position})")


class TemporalGoalError(ProcessVerifyError):
    """A reachability goal contains temporal operators."""


class ScriptedStepError(ProcessVerifyError):
    """A scripted simulation step is illegal."""

    def __init__(self, step: int, violations):
        self.step = step
        self.violations = list(violations)
        rules = ", ".join(v.rule.value for v in self.violations)
        super().__init__(f"scripted step {step} is illegal: {rules}")


class EnumerationGuardError(ProcessVerifyError):
    """The model is too large for exhaustive enumeration without force."""
