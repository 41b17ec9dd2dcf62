from typing import List


class DistinctCountError(Exception):
    """Base class for every error raised by this package."""


class DatasetParseError(DistinctCountError):
    """Raised when an input row does not match the tsv/jsonl layout."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DatasetEncodingError(DistinctCountError):
    """Raised when an input row is not valid UTF-8."""

    def __init__(self, line_number: int) -> None:
        super().__init__(f"line {line_number}: input is not valid UTF-8")
        self.line_number = line_number


class InvalidParameterError(DistinctCountError, ValueError):
    """Raised when an argument falls outside its documented range."""


class OracleGuardError(DistinctCountError):
    """Raised when a brute-force oracle is handed an instance above its size guard."""


class SelftestFailure(DistinctCountError):
    def __init__(self, mismatches: List[str]) -> None:
        super().__init__(f"{len(mismatches)} selftest mismatch(es)")
        self.mismatches = mismatches


class ConfigError(DistinctCountError):
    """Raised when the ini file cannot be parsed or holds a value of the wrong type."""
