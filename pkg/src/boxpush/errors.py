"""Exception types shared across the package."""


class ContractViolationError(RuntimeError):
    """An API was used outside its contract (e.g. stepping a finished episode)."""


class GenerationStallError(RuntimeError):
    """A rejection-sampling loop exceeded its retry budget."""


class FormatError(ValueError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, source: str, line_no: int, message: str):
        super().__init__(f"{source}:{line_no}: {message}")
        self.source = source
        self.line_no = line_no
        self.reason = message
