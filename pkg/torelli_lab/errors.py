"""
Error hierarchy for torelli-lab.

Two families map onto the CLI exit codes:
- InputError: malformed input or a violated precondition (exit 2)
- VerificationError: a checked mathematical property failed (exit 1)

Concrete errors live next to the code that raises them and subclass one of
the two families.
"""

from typing import Optional


class TorelliLabError(Exception):
    """Base class for every error raised by torelli-lab."""


class InputError(TorelliLabError, ValueError):
    """Input rejected before any computation."""


class VerificationError(TorelliLabError):
    """A computed object failed one of its defining checks."""


class ParseError(InputError):
    """Raised when a text file does not follow its line format."""
    def __init__(self, source: str, line_no: Optional[int], detail: str):
        self.source = source
        self.line_no = line_no
        self.detail = detail
        where = f"{source}:{line_no}" if line_no is not None else source
        super().__init__(f"{where}: {detail}")


class ConfigError(InputError):
    """Raised when an environment setting cannot be parsed."""
    def __init__(self, name: str, value: str):
        self.name = name
        self.value = value
        super().__init__(f"Invalid value for {name}: {value!r}")


EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the CLI exit code."""
    if isinstance(exc, VerificationError):
        return EXIT_VERIFICATION
    return EXIT_INPUT
