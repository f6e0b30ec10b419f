#!/usr/bin/env python3
"""
APFREE - Errors
Exception hierarchy shared by engine modules and the CLI.
"""


class ApFreeError(Exception):
    """Base class for every error raised by this package"""


class ParameterError(ApFreeError, ValueError):
    """Invalid input parameters (CLI exit code 2)"""


class DimensionMismatchError(ParameterError):
    """Torus points / specs of different dimension used together"""

    def __init__(self, expected: int, got: int):
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class PreconditionError(ApFreeError, ValueError):
    """A probe was called outside its precondition (not a False answer)"""


class SetFileError(ParameterError):
    """Malformed set file; `kind` is duplicate, unsorted, out-of-range or malformed"""

    def __init__(self, kind: str, line_no: int, text: str):
        super().__init__(f"{kind} entry at line {line_no}: {text!r}")
        self.kind = kind
        self.line_no = line_no
        self.text = text


class CertificationError(ApFreeError):
    """A set that should be 3AP-free is not (internal bug, CLI exit code 3)"""
