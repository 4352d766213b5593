"""
Exception types shared across the toolkit.
"""

from typing import Optional


class LddToolkitError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class ConlluFormatError(LddToolkitError, ValueError):
    """Malformed CoNLL-U line."""

    def __init__(self, message: str, line_number: Optional[int] = None, source: Optional[str] = None):
        self.line_number = line_number
        self.source = source
        if line_number is not None:
            message = f"line {line_number}: {message}"
        if source is not None:
            message = f"{source}: {message}"
        super().__init__(message)


class AlignmentFormatError(LddToolkitError, ValueError):
    """Pharaoh token that is not of the form i-j."""

    def __init__(self, token: str, line_number: Optional[int] = None):
        self.token = token
        self.line_number = line_number
        where = f" on line {line_number}" if line_number is not None else ""
        super().__init__(f"invalid alignment token '{token}'{where}")


class CorpusMismatchError(LddToolkitError):
    """Parallel inputs that cannot be joined record by record."""


class MissingAnnotationError(LddToolkitError):
    """A detector needs an annotation (parse or alignment) the records do not carry."""

    def __init__(self, config_name: str, annotation: str):
        self.config_name = config_name
        self.annotation = annotation
        super().__init__(f"config '{config_name}' requires {annotation} annotation, "
                         f"but it is missing (pass --{'conllu' if annotation == 'parse' else 'align'})")


class ThresholdError(LddToolkitError, ValueError):
    """Distance threshold outside what a challenge set can answer."""


class MetricInputError(LddToolkitError, ValueError):
    """Inputs a metric cannot be computed on."""


class SamplingError(LddToolkitError):
    """Control corpora that cannot be drawn."""


class PermutationError(LddToolkitError, ValueError):
    """Invalid permutation or a sequence of the wrong length."""


class InputEncodingError(LddToolkitError, ValueError):
    """Input line that is not valid UTF-8."""

    def __init__(self, reason: str, line_number: int, source: Optional[str] = None):
        self.line_number = line_number
        self.source = source
        where = f"{source}: " if source is not None else ""
        super().__init__(f"{where}line {line_number}: invalid UTF-8 ({reason})")
