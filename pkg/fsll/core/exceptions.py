"""
Exception hierarchy for the FSLL toolkit.

Services raise these; the command-line layer maps them to exit codes.
"""


class FsllError(Exception):
    """Base class for all toolkit errors."""


class DomainError(FsllError, ValueError):
    """An argument lies outside the domain of an operation."""


class IndexOutOfRangeError(FsllError, IndexError):
    """A mixed-radix index or digit is out of range."""


class NumericDomainError(FsllError, ArithmeticError):
    """A numeric quantity left its admissible range (e.g. |dual parameter| >= 1)."""


class CapacityError(FsllError):
    """A table or enumeration would exceed the configured capacity."""


class FileFormatError(FsllError, ValueError):
    """An artifact file is malformed."""
