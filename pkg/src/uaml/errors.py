"""Exception hierarchy shared across the toolkit."""


class UamlError(Exception):
    """Base class for all toolkit errors."""


class DomainTooSmallError(UamlError):
    """Opinion domains need at least two values."""


class InvalidCountsError(UamlError):
    """Evidence counts must be nonnegative."""


class InvalidOpinionError(UamlError):
    """Belief masses, uncertainty, or base rate violate the opinion invariants."""


class InvalidLevelError(UamlError):
    """Confidence level must lie strictly inside (0, 1)."""


class MalformedRecordError(UamlError):
    """An instantiation record references an unknown variable or state."""


class UnsupportedStructureError(UamlError):
    """Network is not a binary polytree."""


class InconsistentEvidenceError(UamlError):
    """Evidence has zero probability under the model."""


class UnknownNodeError(UamlError):
    """Evidence references a node or state the network does not have."""

    def __init__(self, message: str, node: str):
        super().__init__(message)
        self.node = node


class TooLargeError(UamlError):
    """Problem exceeds the exact-enumeration size limit."""


class InvalidLabelError(UamlError):
    """Class label is not one-hot."""


class TrainingDivergedError(UamlError):
    """Loss became non-finite during training."""

    def __init__(self, epoch: int):
        super().__init__(f"training diverged at epoch {epoch}")
        self.epoch = epoch


class ProgramParseError(UamlError):
    """Syntax error in a ground program, with position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnstratifiedProgramError(UamlError):
    """Negation cycle in the program's dependency graph."""

    def __init__(self, cycle: list[str]):
        super().__init__("negation cycle: " + " -> ".join(cycle + cycle[:1]))
        self.cycle = cycle
