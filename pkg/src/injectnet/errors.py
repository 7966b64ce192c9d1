"""Exception types shared across the package."""


class LineFormatError(ValueError):
    """A line-oriented file is malformed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ScenarioFormatError(LineFormatError):
    """A scenario file violates the documented format or its invariants."""


class ScenarioVersionError(ScenarioFormatError):
    """A scenario file declares an unsupported format version."""


class ExperimentConfigError(LineFormatError):
    """An experiment config file violates the documented format."""


class InfeasibleGeometryError(RuntimeError):
    """Cluster placement failed within the retry budget for the given params."""


class DegenerateScenarioError(ValueError):
    """The scenario offers no candidate pairs, so there is nothing to evolve."""
