"""Outage analysis for an underlay cognitive relay network.

Thin wrapper over the compiled `_core` extension: scenario parsing, power
budgets, the closed-form outage expression and its quadrature / Monte Carlo
cross-checks, plus sweep execution with deterministic CSV output.
"""

from ._core import (  # noqa: F401
    Axis,
    Binding,
    ClosedFormResult,
    CombineMode,
    Curve,
    Engine,
    McConfig,
    OutageEstimate,
    OutageMode,
    OutsideValidityError,
    PerRelayTerms,
    PowerBudget,
    ScenarioError,
    ScenarioParams,
    SelectionRule,
    SinrModel,
    SweepRow,
    SweepSpec,
    Thresholds,
    Validity,
    db_to_linear,
    estimate_primary_outage,
    estimate_secondary_outage,
    linear_to_db,
    load_scenario,
    load_sweep,
    outage_by_quadrature,
    parse_scenario,
    parse_sweep,
    power_budget,
    primary_outage_given_power,
    run_sweep,
    secondary_outage_mrc,
    specfun,
    thresholds,
    to_csv,
    validate_params,
)

__version__ = "0.1.0"
