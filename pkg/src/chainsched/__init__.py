"""Exact schedules for divisible loads on heterogeneous processor chains."""

from .errors import IterationLimitError, RegimeError, SplitError, StructuralError
from .lpfile import export_lp, render_lp, render_mps
from .lp import (
    Constraint,
    LpModel,
    LpSolution,
    ObjectiveSpec,
    build_lp,
    optimal_schedule,
    solution_schedule,
    solve_lp,
)
from .model import (
    InstallmentPlan,
    LoadSet,
    Platform,
    Schedule,
    ValidationReport,
    Violation,
    makespan,
    simulate,
    validate_schedule,
)
from .refine import (
    OverheadModel,
    SplitSpec,
    bounded_installments,
    installment_sweep,
    split_installment,
)
from .reference import (
    ExampleInstance,
    Infeasible,
    Regime,
    classify_regime,
    global_one_installment,
    improved_two_installment_schedule,
    mvb_multi_installment,
    mvb_one_installment,
)
from .scenario import (
    scenario_from_json,
    scenario_to_json,
    schedule_from_json,
    schedule_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "IterationLimitError",
    "RegimeError",
    "SplitError",
    "StructuralError",
    "export_lp",
    "render_lp",
    "render_mps",
    "Constraint",
    "LpModel",
    "LpSolution",
    "ObjectiveSpec",
    "build_lp",
    "optimal_schedule",
    "solution_schedule",
    "solve_lp",
    "InstallmentPlan",
    "LoadSet",
    "Platform",
    "Schedule",
    "ValidationReport",
    "Violation",
    "makespan",
    "simulate",
    "validate_schedule",
    "OverheadModel",
    "SplitSpec",
    "bounded_installments",
    "installment_sweep",
    "split_installment",
    "ExampleInstance",
    "Infeasible",
    "Regime",
    "classify_regime",
    "global_one_installment",
    "improved_two_installment_schedule",
    "mvb_multi_installment",
    "mvb_one_installment",
    "scenario_from_json",
    "scenario_to_json",
    "schedule_from_json",
    "schedule_to_json",
    "__version__",
]
