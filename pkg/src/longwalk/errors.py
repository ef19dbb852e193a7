"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input is outside the supported domain (size caps, unsupported d, ...)."""


class RegimeError(ValueError):
    """Parameters belong to the other protocol regime (wrong alpha range)."""


class PrecisionGuardError(DomainError):
    """Recursion depth too large for the working precision.

    Carries ``max_admissible_l``, the largest even depth that still keeps
    eigenvalue errors at least 1000x below the smallest physical gap.
    """

    def __init__(self, message: str, max_admissible_l: int):
        super().__init__(message)
        self.max_admissible_l = max_admissible_l
