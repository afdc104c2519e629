#!/usr/bin/env python3
"""
Exception hierarchy shared by every tlnn sub-package.

Library code raises these; only the command-line front end turns them
into exit codes.
"""

from typing import Optional


class TlnnError(Exception):
    """Base class for all tlnn errors"""


class ValidationError(TlnnError, ValueError):
    """Input violates a documented precondition"""


class ConfigurationError(ValidationError):
    """Configuration value out of range or unknown configuration key"""


class FormulaError(ValidationError):
    """Malformed formula"""


class FormulaSyntaxError(FormulaError):
    """Formula text does not follow the grammar"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class FormulaIntervalError(FormulaError):
    """Temporal interval with start > end or negative bounds"""


class FormulaWeightError(FormulaError):
    """Negative weight or weight vector of the wrong length"""


class HorizonError(ValidationError):
    """Formula window reaches past the end of the signal"""


class SignalLengthError(ValidationError):
    """Signal length does not match what the caller expects"""


class DatasetError(ValidationError):
    """Dataset content violates the dataset invariants"""


class DatasetParseError(DatasetError):
    """Row of a dataset file cannot be parsed"""

    def __init__(self, message: str, row: Optional[int] = None):
        text = f"row {row}: {message}" if row is not None else message
        super().__init__(text)
        self.row = row


class DatasetLengthError(DatasetParseError):
    """Ragged rows or mismatched signal lengths"""


class EmptyDatasetError(DatasetError):
    """Dataset with no samples"""


class NetworkStructureError(ValidationError):
    """Parameters do not describe a valid network"""


class NonDifferentiableTraceError(ValidationError):
    """Backward pass requested on a hard-mode trace"""


class CheckpointError(TlnnError):
    """Checkpoint document is malformed or of an unsupported version"""
