"""Exception hierarchy shared by the library and the CLI."""


class MoriconeError(Exception):
    """Base class for every error raised by this package."""


class ConeError(MoriconeError, ValueError):
    """A cone-arithmetic precondition was violated (zero class, bad ordering)."""


class ScenarioError(MoriconeError, ValueError):
    """A scenario file or value does not match the schema or its invariants."""


class ParameterError(MoriconeError, ValueError):
    """Family generator parameters fall outside the admissible range."""


class ValidationFailed(MoriconeError):
    """The scenario does not satisfy the hypotheses the engine needs."""

    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"scenario {report.scenario!r} failed validation: {failed}")


class ConsistencyError(MoriconeError, RuntimeError):
    """The engine reached a state the construction rules out (bad oracle data)."""
