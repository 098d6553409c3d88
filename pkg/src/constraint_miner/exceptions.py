"""Exception hierarchy for the constraint miner."""

from typing import Optional


class ConstraintMinerError(Exception):
    """Base class for all errors raised by the toolkit."""


class DslSyntaxError(ConstraintMinerError, ValueError):
    """Raised when a constraint DSL document does not follow the grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownPathError(ConstraintMinerError, KeyError):
    """Raised when a parameter path is not part of the known catalog."""

    def __init__(self, path: str, where: Optional[str] = None):
        message = f"unknown parameter path '{path}'"
        if where:
            message = f"{where}: {message}"
        super().__init__(message)
        self.path = path

    def __str__(self) -> str:
        return self.args[0]


class PartialConstraintError(ConstraintMinerError, ValueError):
    """Raised when an Unparsed atom reaches an automatic equivalence check."""


class DomainCoverageError(ConstraintMinerError, ValueError):
    """Raised when an evaluation domain lacks an entry for a referenced path."""

    def __init__(self, path: str):
        super().__init__(f"no domain entry for parameter path '{path}'")
        self.path = path


class SpecLoadError(ConstraintMinerError, ValueError):
    """Raised when an endpoint specification cannot be loaded."""


class UnsupportedTypeError(SpecLoadError):
    """Raised for a schema type keyword outside the supported subset."""


class DuplicateParameterError(SpecLoadError):
    """Raised when two sibling parameters share a name."""


class UnknownExtraPathError(ConstraintMinerError, ValueError):
    """Raised when a base request asks for a path the spec does not define."""


class PathConflictError(ConstraintMinerError, ValueError):
    """Raised when a request path runs through a non-object value."""


class CandidateError(ConstraintMinerError, ValueError):
    """Raised for candidates that cannot be turned into observation tables."""


class ProbeAbortedError(ConstraintMinerError, RuntimeError):
    """Raised when too many probe rows ended in transport errors."""


class SourceSyntaxError(ConstraintMinerError, ValueError):
    """Raised for lexical and syntax errors in analyzed source files."""

    def __init__(self, message: str, filename: str, line: int, column: int):
        super().__init__(f"{filename}:{line}:{column}: {message}")
        self.filename = filename
        self.line = line
        self.column = column


class UnsupportedConstructError(SourceSyntaxError):
    """Raised for constructs that exist in the source language but not in the analyzed subset."""

    def __init__(self, construct: str, filename: str, line: int, column: int):
        super().__init__(f"unsupported construct: {construct}", filename, line, column)
        self.construct = construct


class ResolutionError(ConstraintMinerError, ValueError):
    """Raised when the program model cannot be resolved."""


class ConfigError(ConstraintMinerError, ValueError):
    """Raised for inconsistent or missing configuration."""


class ScenarioError(ConstraintMinerError, ValueError):
    """Raised for invalid mock API scenarios."""
