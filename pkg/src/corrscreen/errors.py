"""Shared exception types and process exit codes."""

EXIT_BAD_FLAGS = 64
EXIT_INFEASIBLE = 65
EXIT_IO = 74


class InfeasibleError(ValueError):
    """Raised when a requested operating point cannot be achieved.

    Examples: a familywise error target that would require a cap
    probability above 1, a critical threshold whose defining equation has
    no root in (0, 1), or a cross screen on treatments with unequal
    sample counts.
    """
