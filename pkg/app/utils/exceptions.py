"""
Custom exceptions for the causal knowledge-graph toolkit.

Every error raised on purpose by the toolkit derives from SpearError, which
carries a human readable detail and the process exit code the command line
reports for it.
"""

from typing import Optional

from app.core.constants import EXIT_DATA_ERROR, EXIT_RUNTIME_ERROR, EXIT_USAGE_ERROR


class SpearError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = EXIT_RUNTIME_ERROR

    def __init__(self, detail: str) -> None:
        """
        Initialize SpearError.

        Args:
            detail: Error message describing the failure
        """
        super().__init__(detail)
        self.detail = detail


class UsageError(SpearError):
    """Exception raised when the toolkit is invoked incorrectly."""

    exit_code = EXIT_USAGE_ERROR


class ConfigError(UsageError):
    """Exception raised when configuration is invalid or inconsistent."""


class NotFoundError(UsageError):
    """Exception raised when a requested resource is not found."""

    def __init__(
        self,
        resource_name: str,
        resource_id: Optional[str] = None,
        detail: Optional[str] = None,
    ) -> None:
        """
        Initialize NotFoundError.

        Args:
            resource_name: Name of the resource type (e.g., "Schema", "Checkpoint")
            resource_id: Optional identifier of the resource
            detail: Optional custom error message
        """
        if detail is None:
            if resource_id:
                detail = f"{resource_name} '{resource_id}' not found"
            else:
                detail = f"{resource_name} not found"
        super().__init__(detail)
        self.resource_name = resource_name
        self.resource_id = resource_id


class DataError(SpearError):
    """Exception raised when input data is malformed or violates invariants."""

    exit_code = EXIT_DATA_ERROR


class ParseError(DataError):
    """Exception raised when a file cannot be parsed."""

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        """
        Initialize ParseError.

        Args:
            detail: Error message describing the parse failure
            line: 1-based line of the failure, when known
            column: 1-based column of the failure, when known
        """
        if line is not None:
            detail = f"{detail} (line {line}, column {column})"
        super().__init__(detail)
        self.line = line
        self.column = column


class ValidationError(DataError):
    """Exception raised when an annotated sentence fails validation."""

    def __init__(
        self,
        detail: str,
        sentence_index: Optional[int] = None,
        field: Optional[str] = None,
    ) -> None:
        """
        Initialize ValidationError.

        Args:
            detail: Error message describing the validation failure
            sentence_index: Optional 0-based index of the offending sentence
            field: Optional field name that failed validation
        """
        if field:
            detail = f"Validation error in field '{field}': {detail}"
        if sentence_index is not None:
            detail = f"Sentence {sentence_index}: {detail}"
        super().__init__(detail)
        self.sentence_index = sentence_index
        self.field = field


class DegenerateSplitError(DataError):
    """Exception raised when a corpus is too small to split."""


class EmptyCorpusError(DataError):
    """Exception raised when an operation needs at least one sentence."""


class AlignmentError(DataError):
    """Exception raised when gold and predicted corpora are not aligned."""


class MergeError(DataError):
    """Exception raised when per-sentence graphs cannot be merged."""


class InputTooLongError(DataError):
    """Exception raised when a sentence exceeds the encoder's sequence limit."""

    def __init__(self, piece_count: int, max_length: int) -> None:
        """
        Initialize InputTooLongError.

        Args:
            piece_count: Number of sub-word pieces the sentence expands to
            max_length: Maximum number of pieces the encoder accepts
        """
        super().__init__(
            f"Sentence expands to {piece_count} sub-word pieces, "
            f"encoder accepts at most {max_length}"
        )
        self.piece_count = piece_count
        self.max_length = max_length


class EmptyPoolError(SpearError):
    """Exception raised when max-pooling is asked to pool zero vectors."""


class ContractViolation(SpearError):
    """Exception raised when a caller breaks an operation's precondition."""
