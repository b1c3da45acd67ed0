"""Error types shared across the package.

Every error raised on a parsed artifact carries a ``SourceSpan`` pointing at
the offending region; errors raised on programmatically built objects carry
``span=None``.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """Region of source text, for diagnostics. Offsets are byte positions."""

    line: int
    column: int
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"span start {self.start} > end {self.end}")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class CausalisError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


class ParseError(CausalisError):
    """Malformed concrete syntax (model DSL, formula language, labels file)."""


class DuplicateNameError(CausalisError):
    """A name was declared more than once in a scope that requires uniqueness."""


class UnknownNameError(CausalisError):
    """Reference to a variable, parent, context, or binder that does not exist."""


class UnknownValueError(CausalisError):
    """A value symbol outside the relevant variable's range."""


class NonTotalTableError(CausalisError):
    """An equation table does not cover the full product of its parent ranges."""


class CyclicModelError(CausalisError):
    """The nontrivial-dependency graph of a model contains a cycle."""


class MissingContextError(CausalisError):
    """A model has no context, or an operation needs a context that is absent."""


class UnboundValueError(CausalisError):
    """A value variable is used outside the scope of any binder for it."""


class FormulaError(CausalisError):
    """A formula violates a structural invariant (empty pattern, duplicate
    intervention target, wildcard outside a cause pattern, and so on)."""


class EvaluationError(CausalisError):
    """The evaluator was handed something it cannot judge, e.g. a cause
    pattern that still contains wildcards."""


class ExogenousVariableError(CausalisError):
    """An operation restricted to endogenous variables (intervention, cause
    pattern, policy label) was given an exogenous one."""


class SignatureMismatchError(CausalisError):
    """Two models that were expected to share a signature do not."""


class DependencyMismatchError(CausalisError):
    """Two models that were expected to share a dependency relation do not."""


class AssignmentMismatchError(CausalisError):
    """Two model/context pairs that were expected to solve to the same world
    do not."""


class ConstructionFailedError(CausalisError):
    """The distinguishing-formula construction could not verify any candidate;
    indicates a semantics-mode misconfiguration."""
