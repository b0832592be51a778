"""Exception types shared across the package."""


class SizeCapError(ValueError):
    """Exhaustive enumeration was requested above the configured size cap."""


class PremiseViolation(ValueError):
    """A sequence fails the near-superadditivity premise.

    Carries the first violating point: ``n`` and, for a split violation,
    the split ``(n1, n2)``; ``deficit`` is the amount by which the premise
    inequality fails.
    """

    def __init__(self, message, n, split=None, deficit=None):
        super().__init__(message)
        self.n = n
        self.split = split
        self.deficit = deficit
