"""This package contains the flow, the reproduction number and the
equilibria of the model."""

from seasirs.dynamics.equilibria import (
    EquilibriumKind,
    EquilibriumReport,
    Stability,
    TransformedParams,
    classify,
    dfe_charpoly,
    endemic_rh_certificate,
    find_equilibria,
    jacobian,
)
from seasirs.dynamics.flow import (
    FlowSettings,
    Trajectory,
    advance,
    advance_constant,
    iterate_period_map,
    period_map,
    solve,
    solve_constant,
    solve_linear_auxiliary,
)
from seasirs.dynamics.reproduction import (
    LinearizationBlocks,
    MonodromyReport,
    Threshold,
    linearize,
    monodromy,
    monodromy_report,
    r0_bisection,
    r0_closed_form,
    r0_operator_oracle,
    r0_threshold,
)
