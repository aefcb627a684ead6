"""This module contains the linearization at the disease-free equilibrium
and the computation of the basic reproduction number.

R₀ is obtained three ways: the sign of ρ(Φ_{F−V}(ω)) − 1 gives the
threshold verdict, the root of ρ(W_λ(ω,0)) = 1 gives the value, and a
discretized next-infection operator serves as an independent oracle. For
β₁ = β₂ the closed form βN(μ/(d+r_a) + α(1−μ)/(d+r_s)) applies.
"""

import dataclasses
import enum
import json
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from seasirs.core.smallmat import eig2, expm, spectral_radius2
from seasirs.exceptions import (
    BracketError,
    ConvergenceError,
    MatrixOverflowError,
    PreconditionError,
)
from seasirs.models.params import (
    ModelParams,
    require_positive_denominators,
    require_valid,
)
from seasirs.models.state import Season

LOGGER = logging.getLogger(__name__)

CRITICAL_BAND = 1e-10
BRACKET_FACTOR = 10.0
BRACKET_LIMIT = 1e30
BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 500
SCAN_POINTS = 241
ORACLE_MIN_GRID = 64
ORACLE_TAIL = 40.0
POWER_TOL = 1e-12
POWER_MAX_ITER = 100000


@dataclasses.dataclass(frozen=True)
class LinearizationBlocks:
    """The blocks of the linearization at E₀ = (N, 0, 0).

    :param F1: New-infection block of the low season
    :param F2: New-infection block of the high season
    :param V: Removal block diag(d + r_a, d + r_s)
    :param b1: Susceptible row entries (−β₁N − σ, −αβ₁N − σ)
    :param b2: Susceptible row entries (−β₂N − σ, −αβ₂N − σ)
    :param d_sigma: The susceptible decay rate d + σ
    """

    F1: np.ndarray
    F2: np.ndarray
    V: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    d_sigma: float

    def F(self, season: Season) -> np.ndarray:
        return self.F1 if season == Season.LOW else self.F2

    def season_matrix(self, season: Season) -> np.ndarray:
        """The constant matrix F_i − V of the linear system in a season."""
        return self.F(season) - self.V

    def full_F(self, season: Season) -> np.ndarray:
        """The 3×3 new-infection matrix with an empty susceptible row."""
        full = np.zeros((3, 3))
        full[1:, 1:] = self.F(season)
        return full

    def full_V(self, season: Season) -> np.ndarray:
        """The 3×3 transition matrix, so that J(E₀) = 𝐅ᵢ − 𝐕ᵢ."""
        b = self.b1 if season == Season.LOW else self.b2
        full = np.zeros((3, 3))
        full[0, 0] = self.d_sigma
        full[0, 1:] = -b
        full[1:, 1:] = self.V
        return full

    def dfe_multiplier(self, omega: float) -> float:
        """The characteristic multiplier e^{−(d+σ)ω} of the susceptible row."""
        return math.exp(-self.d_sigma * omega)

    @property
    def has_transmission(self) -> bool:
        """Whether some season can reproduce infection at all.

        Each Fᵢ has rank at most one, so a vanishing trace makes it
        nilpotent and the next-infection operator has spectral radius 0.
        """
        return bool(np.trace(self.F1) > 0 or np.trace(self.F2) > 0)


def _new_infection_block(params: ModelParams, beta: float) -> np.ndarray:
    scale = beta * params.N
    return np.array(
        [
            [params.mu * scale, params.alpha * params.mu * scale],
            [(1.0 - params.mu) * scale, params.alpha * (1.0 - params.mu) * scale],
        ]
    )


def linearize(params: ModelParams) -> LinearizationBlocks:
    """Build the linearization blocks at the disease-free equilibrium.

    :param params: The model parameters
    :return: The linearization blocks
    """
    require_valid(params)
    susceptible_row = lambda beta: np.array(  # noqa: E731
        [-beta * params.N - params.sigma, -params.alpha * beta * params.N - params.sigma]
    )
    return LinearizationBlocks(
        F1=_new_infection_block(params, params.beta1),
        F2=_new_infection_block(params, params.beta2),
        V=np.diag([params.d + params.r_a, params.d + params.r_s]),
        b1=susceptible_row(params.beta1),
        b2=susceptible_row(params.beta2),
        d_sigma=params.d + params.sigma,
    )


def _monodromy(blocks: LinearizationBlocks, params: ModelParams, lam: float) -> np.ndarray:
    low = expm(blocks.F1 / lam - blocks.V, params.low_season_length)
    high = expm(blocks.F2 / lam - blocks.V, params.high_season_length)
    # the low season comes first in time
    return high @ low


def monodromy(params: ModelParams, lam: float = 1.0) -> np.ndarray:
    """Compute W_λ(ω, 0) = e^{(F₂/λ−V)θω}·e^{(F₁/λ−V)(1−θ)ω}.

    For λ = 1 this is the monodromy matrix Φ_{F−V}(ω).

    :param params: The model parameters
    :param lam: A positive scaling of the new-infection blocks
    :return: The 2×2 fundamental matrix over one period
    """
    if not lam > 0:
        raise PreconditionError("lambda must be positive, got {!r}".format(lam))
    return _monodromy(linearize(params), params, lam)


def spectral_radius_w(params: ModelParams, lam: float) -> float:
    """ρ(W_λ(ω, 0)); infinite when the exponential overflows."""
    return _rho_w(linearize(params), params, lam)


def _rho_w(blocks: LinearizationBlocks, params: ModelParams, lam: float) -> float:
    try:
        return spectral_radius2(_monodromy(blocks, params, lam))
    except MatrixOverflowError:
        return math.inf


class Threshold(str, enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


def threshold_verdict(value: float, band: float = CRITICAL_BAND) -> Threshold:
    if abs(value - 1.0) <= band:
        return Threshold.CRITICAL
    return Threshold.SUPERCRITICAL if value > 1.0 else Threshold.SUBCRITICAL


def r0_threshold(params: ModelParams) -> Tuple[float, Threshold]:
    """Decide the stability of E₀ from the spectral radius of Φ_{F−V}(ω).

    :param params: The model parameters
    :return: ρ(Φ_{F−V}(ω)) and the threshold verdict
    """
    rho = spectral_radius2(monodromy(params, 1.0))
    return rho, threshold_verdict(rho)


def _bracket(blocks: LinearizationBlocks, params: ModelParams) -> Tuple[float, float]:
    gap = lambda lam: _rho_w(blocks, params, lam) - 1.0  # noqa: E731
    start = gap(1.0)
    if start == 0:
        return 1.0, 1.0
    lo = hi = 1.0
    if start > 0:
        while gap(hi) > 0:
            lo, hi = hi, hi * BRACKET_FACTOR
            LOGGER.debug("Expanding R0 bracket upwards to %r", hi)
            if hi > BRACKET_LIMIT:
                raise BracketError("No R0 bracket below {!r}".format(BRACKET_LIMIT))
    else:
        while gap(lo) < 0:
            lo, hi = lo / BRACKET_FACTOR, lo
            LOGGER.debug("Expanding R0 bracket downwards to %r", lo)
            if lo < 1.0 / BRACKET_LIMIT:
                raise BracketError(
                    "No R0 bracket above {!r}".format(1.0 / BRACKET_LIMIT)
                )
    return lo, hi


def _is_monotone(blocks: LinearizationBlocks, params: ModelParams, lo: float, hi: float) -> bool:
    grid = np.geomspace(lo, hi, 5)
    rho = [_rho_w(blocks, params, lam) for lam in grid]
    return all(a >= b * (1.0 - 1e-12) for a, b in zip(rho, rho[1:]))


def _scan(blocks: LinearizationBlocks, params: ModelParams) -> Tuple[float, float]:
    grid = np.geomspace(1.0 / BRACKET_LIMIT, BRACKET_LIMIT, SCAN_POINTS)
    gaps = [_rho_w(blocks, params, lam) - 1.0 for lam in grid]
    crossings = [
        (grid[k], grid[k + 1])
        for k in range(len(grid) - 1)
        if gaps[k] >= 0 >= gaps[k + 1]
    ]
    if not crossings:
        raise BracketError("Log-grid scan found no sign change of rho(W) - 1")
    # the largest crossing is the spectral radius of the operator
    return crossings[-1]


def r0_bisection(params: ModelParams) -> float:
    """Solve ρ(W_λ(ω, 0)) = 1 for λ by bracketing and bisection.

    ρ(W_λ) does not increase in λ because the new-infection blocks are
    entrywise non-negative, so the bracket is grown geometrically from
    λ = 1. Should a monotonicity check inside the bracket fail, the root is
    searched on a logarithmic grid instead.

    :param params: The model parameters
    :return: The basic reproduction number R₀
    """
    require_positive_denominators(params)
    blocks = linearize(params)
    if not blocks.has_transmission:
        LOGGER.debug("No transmission path, R0 = 0")
        return 0.0
    lo, hi = _bracket(blocks, params)
    if lo == hi:
        return lo
    if not _is_monotone(blocks, params, lo, hi):
        LOGGER.warning(
            "rho(W) is not monotone on [%r, %r], falling back to a log-grid scan", lo, hi
        )
        lo, hi = _scan(blocks, params)

    for iteration in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= BISECTION_TOL * max(1.0, mid) or mid in (lo, hi):
            break
        if _rho_w(blocks, params, mid) > 1.0:
            lo = mid
        else:
            hi = mid
    LOGGER.debug("R0 bisection stopped after %d steps at [%r, %r]", iteration, lo, hi)
    return 0.5 * (lo + hi)


def r0_closed_form(params: ModelParams) -> float:
    """R₀ = βN(μ/(d+r_a) + α(1−μ)/(d+r_s)) of the non-seasonal model.

    :param params: Parameters with β₁ = β₂
    :return: The basic reproduction number
    """
    beta = params.beta
    require_positive_denominators(params)
    return (
        beta
        * params.N
        * (
            params.mu / (params.d + params.r_a)
            + params.alpha * (1.0 - params.mu) / (params.d + params.r_s)
        )
    )


def _low_share(params: ModelParams, n: int) -> np.ndarray:
    """The fraction of each grid cell [t_j − h/2, t_j + h/2] in the low season."""
    h = params.omega / n
    centers = np.arange(n) * h
    left, right = centers - 0.5 * h, centers + 0.5 * h
    overlap = np.zeros(n)
    for m in (-1, 0, 1):
        start = m * params.omega
        end = start + params.low_season_length
        overlap += np.clip(np.minimum(right, end) - np.maximum(left, start), 0.0, None)
    return overlap / h


def _folded_kernel(rate: float, n: int, h: float, K: int) -> np.ndarray:
    """Trapezoid weights of e^{−rate·a} on a ∈ [0, Kh], folded modulo n."""
    m = np.arange(n)
    counts = np.where(m <= K, (K - m) // n + 1, 0)
    period_decay = rate * n * h
    geometric = np.expm1(-counts * period_decay) / np.expm1(-period_decay)
    kernel = h * np.exp(-rate * m * h) * geometric
    kernel[0] -= 0.5 * h
    kernel[K % n] -= 0.5 * h * math.exp(-rate * K * h)
    return kernel


def r0_operator_oracle(
    params: ModelParams, grid_n: int = 2048, truncation_A: Optional[float] = None
) -> float:
    """Approximate the spectral radius of the next-infection operator.

    (LI)(t) = ∫₀^A e^{−Va} 𝔽(t−a) I(t−a) da acts on ω-periodic functions.
    The periodic functions live on a uniform grid of grid_n points, 𝔽 is
    averaged over each grid cell, the integral is a trapezoid sum with exact
    e^{−Va} weights and the resulting circulant sums are evaluated by FFT.
    The dominant eigenvalue comes from power iteration.

    :param params: The model parameters
    :param grid_n: Number of grid points per period
    :param truncation_A: Truncation of the age integral, at least 40/κ
    :return: An approximation of R₀
    """
    require_positive_denominators(params)
    if grid_n < ORACLE_MIN_GRID:
        raise PreconditionError(
            "grid_n must be at least {}, got {!r}".format(ORACLE_MIN_GRID, grid_n)
        )
    minimum_A = ORACLE_TAIL / params.kappa
    if truncation_A is None:
        truncation_A = minimum_A
    if truncation_A < minimum_A * (1.0 - 1e-12):
        raise PreconditionError(
            "truncation_A must be at least 40/kappa = {!r}, got {!r}".format(
                minimum_A, truncation_A
            )
        )
    blocks = linearize(params)
    if not (blocks.F1.any() or blocks.F2.any()):
        return 0.0

    n = grid_n
    h = params.omega / n
    K = int(math.ceil(truncation_A / h))
    share = _low_share(params, n)
    # 𝔽 on the grid, shape (n, 2, 2)
    F_grid = share[:, None, None] * blocks.F1 + (1.0 - share)[:, None, None] * blocks.F2
    kernel_hat = np.stack(
        [
            np.fft.rfft(_folded_kernel(blocks.V[c, c], n, h, K))
            for c in range(2)
        ]
    )

    def apply(x: np.ndarray) -> np.ndarray:
        g = np.einsum("jab,jb->ja", F_grid, x)
        return np.fft.irfft(kernel_hat * np.fft.rfft(g.T, axis=1), n=n, axis=1).T

    x = np.ones((n, 2))
    x /= x.sum()
    estimate = 0.0
    residual = math.inf
    for iteration in range(1, POWER_MAX_ITER + 1):
        y = np.clip(apply(x), 0.0, None)
        total = y.sum()
        if total == 0:
            LOGGER.debug("Next-infection operator is nilpotent on the grid")
            return 0.0
        residual = float(np.abs(y - estimate * x).sum())
        previous, estimate = estimate, float(total)
        x = y / total
        if abs(estimate - previous) <= POWER_TOL * max(1.0, estimate):
            LOGGER.debug(
                "Power iteration converged after %d steps: %r", iteration, estimate
            )
            return estimate
    raise ConvergenceError(
        "Power iteration did not converge in {} steps".format(POWER_MAX_ITER), residual
    )


class MonodromyReport:
    """The threshold quantities of a parameter set.

    :param phi: The monodromy matrix Φ_{F−V}(ω)
    :param rho: Its spectral radius
    :param verdict: The threshold verdict from rho
    :param r0_bisection: R₀ from the λ-equation
    :param r0_operator: R₀ from the operator oracle, if requested
    :param r0_closed_form: The closed-form R₀, if β₁ = β₂
    :param multipliers: The characteristic multipliers of the linearization at E₀
    :param notes: Human-readable remarks
    """

    def __init__(
        self,
        phi: np.ndarray,
        rho: float,
        verdict: Threshold,
        r0_bisection: float,
        r0_operator: Optional[float] = None,
        r0_closed_form: Optional[float] = None,
        multipliers: List[complex] = None,
        notes: List[str] = None,
        meta: Dict[str, Any] = None,
    ):
        self.phi = phi
        self.rho = rho
        self.verdict = verdict
        self.r0_bisection = r0_bisection
        self.r0_operator = r0_operator
        self.r0_closed_form = r0_closed_form
        self.multipliers = multipliers or []
        self.notes = notes or []
        self.meta = meta or {}

    @property
    def r0(self) -> float:
        return self.r0_bisection

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "phi": self.phi.tolist(),
            "rho": self.rho,
            "verdict": self.verdict.value,
            "r0_bisection": self.r0_bisection,
            "multipliers": [[z.real, z.imag] for z in self.multipliers],
            "notes": self.notes,
            "meta": self.meta,
        }
        if self.r0_operator is not None:
            data["r0_operator"] = self.r0_operator
        if self.r0_closed_form is not None:
            data["r0_closed_form"] = self.r0_closed_form
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __repr__(self) -> str:
        return "<MonodromyReport rho={!r} R0={!r} verdict={}>".format(
            self.rho, self.r0_bisection, self.verdict.value
        )


def monodromy_report(
    params: ModelParams,
    operator_oracle: bool = False,
    grid_n: int = 2048,
    truncation_A: Optional[float] = None,
) -> MonodromyReport:
    """Collect every threshold quantity of a parameter set in one report.

    :param params: The model parameters
    :param operator_oracle: Also run the next-infection operator oracle
    :param grid_n: Grid size of the oracle
    :param truncation_A: Age truncation of the oracle
    :return: The monodromy report
    """
    blocks = linearize(params)
    phi = _monodromy(blocks, params, 1.0)
    rho, verdict = r0_threshold(params)
    notes = []
    if not blocks.has_transmission:
        notes.append("no transmission")
    r0 = r0_bisection(params)
    closed = r0_closed_form(params) if params.is_autonomous else None
    operator = (
        r0_operator_oracle(params, grid_n, truncation_A) if operator_oracle else None
    )
    multipliers = [complex(blocks.dfe_multiplier(params.omega))] + list(eig2(phi))
    return MonodromyReport(
        phi=phi,
        rho=rho,
        verdict=verdict,
        r0_bisection=r0,
        r0_operator=operator,
        r0_closed_form=closed,
        multipliers=multipliers,
        notes=notes,
    )
