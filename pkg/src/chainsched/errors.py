"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Malformed or dimensionally inconsistent input.

    Deliberately distinct from infeasibility: a structurally broken instance
    cannot even be checked, while an infeasible one is checked and rejected.
    """


class RegimeError(ValueError):
    """A closed-form schedule was requested outside the range where it exists."""


class SplitError(ValueError):
    """An installment split cannot be applied (for instance a zero-size target)."""


class IterationLimitError(RuntimeError):
    """The solver hit its pivot budget before reaching a verdict."""
