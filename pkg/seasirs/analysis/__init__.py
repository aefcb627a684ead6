"""This package contains the Lyapunov functions, the verification checks and
the threshold sweep."""

from seasirs.analysis.lyapunov import (
    EqualRatesSystem,
    LyapunovEvaluation,
    lyapunov_L,
    lyapunov_V1_equal_rates,
    lyapunov_V_mu0,
)
from seasirs.analysis.sampling import (
    default_rng,
    sample_disease_free,
    sample_domain,
    sample_interior,
)
from seasirs.analysis.sweep import SweepRow, SweepTable, threshold_sweep
from seasirs.analysis.verify import (
    CHECKS,
    Outcome,
    VerdictReport,
    check_boundary_endemic,
    check_boundary_invariance,
    check_comparison,
    check_extinction,
    check_invariance,
    check_lyapunov,
    check_near_equal_rates,
    check_persistence,
    run_checks,
)
