"""This package contains the model right-hand sides and the small-matrix
toolkit."""

from seasirs.core.model import (
    beta_at,
    rhs,
    rhs_full4,
    season_at,
    season_beta,
    season_field,
    season_schedule,
    switch_times,
)
from seasirs.core.smallmat import (
    CubicCoeffs,
    StabilityVerdict,
    eig3,
    expm,
    routh_hurwitz3,
    spectral_radius2,
)
