"""Package exception types."""


class SnnasError(Exception):
    pass


class ConfigError(SnnasError):
    pass


class BatchFormatError(SnnasError):
    pass


class NoFeasibleArchitectureError(SnnasError):
    """Raised when a search phase ends without a usable candidate.

    phase is "memory" (phase 0), "hardware constraints" (phase 1), or
    "fitness" (candidates fit the budgets but none achieved a valid score).
    """

    def __init__(self, phase, diagnostics=None):
        self.phase = phase
        self.diagnostics = diagnostics or {}
        super().__init__(f"no feasible architecture ({phase})")
