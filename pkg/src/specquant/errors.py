"""Exception types shared across the package."""


class SpecError(ValueError):
    """A coefficient or walk specification violates its invariants."""


class NotQuantizableError(ValueError):
    """A walk (or coefficient list) has no admissible Verblunsky counterpart.

    ``index`` is the first offending coefficient index.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(RuntimeError):
    """An iterative evaluation failed to reach its tolerance.

    ``gap`` is the last achieved difference between successive estimates.
    """

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap
