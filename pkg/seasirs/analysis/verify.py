"""This module contains the numerical verification checks of the model's
threshold, extinction, persistence and stability results.

Every check samples initial points, integrates them and condenses the
outcome into a :class:`VerdictReport`. A finite horizon can only approximate
a statement about t → ∞, so verdicts are empirical evidence, never proofs.
"""

import enum
import json
import logging
import math
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from seasirs.analysis.lyapunov import (
    EqualRatesSystem,
    LyapunovEvaluation,
    lyapunov_L,
    lyapunov_V1_equal_rates,
    lyapunov_V_mu0,
    to_shifted,
)
from seasirs.analysis.sampling import (
    default_rng,
    sample_disease_free,
    sample_domain,
    sample_interior,
)
from seasirs.dynamics.equilibria import find_equilibria
from seasirs.dynamics.flow import (
    FlowSettings,
    advance,
    advance_constant,
    solve,
    solve_constant,
    solve_linear_auxiliary,
)
from seasirs.dynamics.reproduction import (
    Threshold,
    r0_bisection,
    r0_closed_form,
    r0_threshold,
    threshold_verdict,
)
from seasirs.exceptions import PreconditionError, ValidationError
from seasirs.models.params import ModelParams, require_valid
from seasirs.models.state import State

LOGGER = logging.getLogger(__name__)

HORIZON_CAP = 1e5
EXTINCTION_TOL = 1e-4
ENVELOPE_TOL = 1e-6
PERSISTENCE_FLOOR = 1e-6
CONVERGENCE_TOL = 1e-4
SETTLE_FACTOR = math.log(1e8)
NEAR_EQUAL_SHARE = 0.1
COMPARISON_TOL = 1e-9
COMPARISON_PERIODS = 10
COMPARISON_STRIDE = 20
INVARIANCE_TOL = 1e-8
INVARIANCE_PERIODS = 20
LYAPUNOV_TOL = 1e-9
MISMATCH_TOL = 1e-10
MIN_PERIODS = 10

# checks that sample their own kind of state
UNSEEDED_POINTS = ("lyapunov", "boundary-invariance")


class Outcome(str, enum.Enum):
    CONFIRMED = "confirmed"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class VerdictReport:
    """The outcome of one verification check.

    :param theorem_id: The check identifier
    :param hypothesis_values: The parameters and the derived quantities the
        check's hypotheses are stated in
    :param outcome: Confirmed, Violated or Inconclusive
    :param evidence: Worst-case margins observed over all samples
    :param witness: For violations, the offending parameters, initial point and time
    :param meta: Metadata attached by the command pipeline
    """

    def __init__(
        self,
        theorem_id: str,
        hypothesis_values: Dict[str, Any],
        outcome: Outcome,
        evidence: Dict[str, Any],
        witness: Optional[Dict[str, Any]] = None,
        meta: Dict[str, Any] = None,
    ):
        if outcome == Outcome.VIOLATED and witness is None:
            raise ValidationError("A violated verdict needs a witness")
        self.theorem_id = theorem_id
        self.hypothesis_values = hypothesis_values
        self.outcome = outcome
        self.evidence = evidence
        self.witness = witness
        self.meta = meta or {}

    @property
    def violated(self) -> bool:
        return self.outcome == Outcome.VIOLATED

    def __repr__(self) -> str:
        return "<VerdictReport {} {}>".format(self.theorem_id, self.outcome.value)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "theorem_id": self.theorem_id,
            "hypothesis_values": self.hypothesis_values,
            "outcome": self.outcome.value,
            "evidence": self.evidence,
            "meta": self.meta,
        }
        if self.witness is not None:
            data["witness"] = self.witness
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class _Settled(NamedTuple):
    index: int
    p0: State
    t: float
    state: State
    distance: float


def hypothesis_values(params: ModelParams) -> Dict[str, Any]:
    """The derived quantities the checks' hypotheses are phrased in."""
    rho, _ = r0_threshold(params)
    return {
        "params": params.to_dict(),
        "R0": r0_bisection(params),
        "rho": rho,
        "mu_interior": 0.0 < params.mu < 1.0,
        "alpha_beta1_positive": params.alpha * params.beta1 > 0,
        "rate_gap": abs(params.r_s - params.r_a),
    }


def verification_settings(params: ModelParams) -> FlowSettings:
    """Integrator settings for long-horizon checks: tolerances of 1e-9 and
    steps bounded by the shorter season."""
    return FlowSettings(
        abs_tol=1e-9,
        rel_tol=1e-9,
        max_step=min(params.low_season_length, params.high_season_length),
    )


def _round_horizon(
    params: ModelParams, t: float, multiple: int = 1
) -> Tuple[float, bool]:
    """Round t up to a multiple of multiple·ω and cap it at HORIZON_CAP.

    :return: The horizon and whether the cap applied
    """
    unit = multiple * params.omega
    if not math.isfinite(t) or t > HORIZON_CAP:
        return max(unit, math.floor(HORIZON_CAP / unit) * unit), True
    return max(MIN_PERIODS * params.omega, math.ceil(t / unit) * unit), False


def _advance(params: ModelParams, p0: State, t: float, settings: FlowSettings) -> State:
    if params.is_autonomous:
        return advance_constant(params, p0, t, params.beta1, settings)
    return advance(params, p0, t, settings)


def _settle(
    params: ModelParams,
    points: Sequence[State],
    target: State,
    horizon: float,
    tol: float,
    settings: FlowSettings,
) -> List[_Settled]:
    """Advance every point to the horizon; points that have not come within tol
    of target are continued, doubling their horizon up to HORIZON_CAP."""
    settled = []
    for index, p0 in enumerate(points):
        state = _advance(params, p0, horizon, settings)
        t = horizon
        while state.distance(target) > tol and 2.0 * t <= HORIZON_CAP:
            LOGGER.debug("Sample %d unsettled at t=%r, extending", index, t)
            state = _advance(params, state, t, settings)
            t *= 2.0
        settled.append(_Settled(index, p0, t, state, state.distance(target)))
    return settled


def _witness(params: ModelParams, p0: State, t: float) -> Dict[str, Any]:
    return {"params": params.to_dict(), "p0": p0.to_dict(), "t": t}


def _require_samples(sample_count: int) -> None:
    integral = isinstance(sample_count, (int, np.integer)) and not isinstance(sample_count, bool)
    if not integral or sample_count < 1:
        raise ValidationError(
            "sample_count must be a positive integer, got {!r}".format(sample_count)
        )


def _points(
    params: ModelParams,
    initial_points: Optional[Sequence[State]],
    sample_count: int,
    sampler: Callable[[int], List[State]],
) -> List[State]:
    if initial_points is None:
        _require_samples(sample_count)
        return sampler(sample_count)
    if not initial_points:
        raise ValidationError("At least one initial point is required")
    return [p.require_in_domain(params.N, 1e-8 * params.N) for p in initial_points]


def _convergence_verdict(
    theorem_id: str,
    params: ModelParams,
    settled: List[_Settled],
    tol: float,
    horizon: float,
    capped: bool,
    hypotheses: Dict[str, Any],
    evidence: Dict[str, Any],
) -> VerdictReport:
    worst = max(settled, key=lambda s: s.distance)
    evidence.update(
        {
            "samples": len(settled),
            "horizon": horizon,
            "capped": capped,
            "tolerance": tol,
            "max_distance": worst.distance,
            "max_time": max(s.t for s in settled),
        }
    )
    if worst.distance <= tol:
        return VerdictReport(theorem_id, hypotheses, Outcome.CONFIRMED, evidence)
    if capped or worst.t >= HORIZON_CAP / 2.0:
        evidence["note"] = "horizon cap reached before convergence"
        return VerdictReport(theorem_id, hypotheses, Outcome.INCONCLUSIVE, evidence)
    return VerdictReport(
        theorem_id,
        hypotheses,
        Outcome.VIOLATED,
        evidence,
        witness=_witness(params, worst.p0, worst.t),
    )


def check_extinction(
    params: ModelParams,
    sample_count: int = 100,
    horizon: Optional[float] = None,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> VerdictReport:
    """Check that every sampled orbit reaches the disease-free state E₀.

    The seasonal statement needs R₀ < 1; for β₁ = β₂ the non-seasonal one
    also covers R₀ = 1. The default horizon is where the linear envelope
    ρ^{t/ω}·N falls below 1e-6·N and the susceptibles have relaxed at rate
    d + σ, whichever is later.

    :param params: The model parameters
    :param sample_count: The number of random initial points in D₀
    :param horizon: The integration horizon, adaptive if omitted
    :param rng: The random generator of the samples
    :param settings: The integrator settings
    :param initial_points: Explicit initial points replacing the samples
    :return: The verdict
    """
    require_valid(params)
    hypotheses = hypothesis_values(params)
    if params.is_autonomous:
        r0 = r0_closed_form(params)
        if threshold_verdict(r0) == Threshold.SUPERCRITICAL:
            raise PreconditionError("Extinction needs R0 <= 1, got {!r}".format(r0))
    else:
        r0 = hypotheses["R0"]
        if threshold_verdict(r0) != Threshold.SUBCRITICAL:
            raise PreconditionError("Extinction needs R0 < 1, got {!r}".format(r0))
    rng = rng or default_rng()
    settings = settings or verification_settings(params)
    points = _points(
        params, initial_points, sample_count, lambda n: sample_domain(rng, params.N, n)
    )

    capped = False
    if horizon is None:
        rho = hypotheses["rho"]
        envelope = (
            params.omega * math.log(ENVELOPE_TOL) / math.log(rho) if rho < 1 else math.inf
        )
        relaxation = -math.log(ENVELOPE_TOL) / (params.d + params.sigma)
        horizon, capped = _round_horizon(params, max(envelope, relaxation))
    tol = EXTINCTION_TOL * params.N
    target = State(params.N, 0.0, 0.0)
    settled = _settle(params, points, target, horizon, tol, settings)
    return _convergence_verdict(
        "extinction", params, settled, tol, horizon, capped, hypotheses, {"R0": r0}
    )


def _spectral_gap(params: ModelParams) -> float:
    """The slowest decay rate towards the endemic equilibrium of the
    season-averaged model, or of the linearization at E₀ if there is none."""
    beta = (1.0 - params.theta) * params.beta1 + params.theta * params.beta2
    averaged = params.with_beta(beta)
    fallback = min(params.d + params.sigma, params.kappa)
    reports = find_equilibria(averaged)
    if len(reports) < 2:
        return fallback
    gap = -max(z.real for z in reports[1].eigenvalues)
    return gap if gap > 0 else fallback


def _require_persistence(params: ModelParams, r0: float) -> None:
    if threshold_verdict(r0) != Threshold.SUPERCRITICAL:
        raise PreconditionError("Persistence needs R0 > 1, got {!r}".format(r0))
    if not 0 < params.mu < 1:
        raise PreconditionError(
            "Persistence needs 0 < mu < 1, got {!r}".format(params.mu)
        )
    if not params.alpha * params.beta1 > 0:
        raise PreconditionError("Persistence needs alpha * beta1 > 0")


def check_persistence(
    params: ModelParams,
    sample_count: int = 100,
    horizon: Optional[float] = None,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> VerdictReport:
    """Check that both infective classes stay uniformly away from zero.

    The minimum of I_a and I_s over the late window [horizon/2, horizon] is
    taken over every sample; this empirical δ̂ must exceed 1e-6·N.

    :param params: Parameters with R₀ > 1, 0 < μ < 1 and αβ₁ > 0
    :param sample_count: The number of random interior initial points
    :param horizon: The integration horizon, adaptive if omitted
    :param rng: The random generator of the samples
    :param settings: The integrator settings
    :param initial_points: Explicit initial points, each with I_a + I_s > 0
    :return: The verdict with the empirical δ̂
    """
    require_valid(params)
    hypotheses = hypothesis_values(params)
    _require_persistence(params, hypotheses["R0"])
    if initial_points is not None and any(p.infectives <= 0 for p in initial_points):
        raise PreconditionError("Persistence needs I_a0 + I_s0 > 0 for every point")
    rng = rng or default_rng()
    settings = settings or verification_settings(params)
    points = _points(
        params, initial_points, sample_count, lambda n: sample_interior(rng, params.N, n)
    )

    capped = False
    if horizon is None:
        horizon, capped = _round_horizon(
            params, 2.0 * SETTLE_FACTOR / _spectral_gap(params), multiple=2
        )
    # the window starts at a period multiple so that the flow can restart there
    start = math.floor(horizon / (2.0 * params.omega)) * params.omega
    if not 0 < start < horizon:
        raise ValidationError(
            "Horizon {!r} is shorter than two periods".format(horizon)
        )

    delta, witness = math.inf, None
    for p0 in points:
        midway = _advance(params, p0, start, settings)
        if params.is_autonomous:
            window = solve_constant(
                params, midway, horizon - start, params.beta1, settings
            )
        else:
            window = solve(params, midway, horizon - start, settings)
        lows = np.minimum(window.column("I_a"), window.column("I_s"))
        k = int(np.argmin(lows))
        if lows[k] < delta:
            delta, witness = float(lows[k]), (p0, start + float(window.times[k]))

    floor = PERSISTENCE_FLOOR * params.N
    evidence = {
        "delta_hat": delta,
        "floor": floor,
        "window": [start, horizon],
        "samples": len(points),
        "capped": capped,
        "note": "finite-horizon estimate of the liminf",
    }
    if delta > floor:
        return VerdictReport("persistence", hypotheses, Outcome.CONFIRMED, evidence)
    if capped:
        return VerdictReport("persistence", hypotheses, Outcome.INCONCLUSIVE, evidence)
    return VerdictReport(
        "persistence",
        hypotheses,
        Outcome.VIOLATED,
        evidence,
        witness=_witness(params, *witness),
    )


def _endemic_target(params: ModelParams):
    reports = find_equilibria(params)
    if len(reports) < 2:
        raise PreconditionError("No endemic equilibrium, R0 <= 1")
    return reports[1]


def _endemic_horizon(params: ModelParams, report) -> Tuple[float, bool]:
    gap = -max(z.real for z in report.eigenvalues)
    if not gap > 0:
        return _round_horizon(params, math.inf)
    return _round_horizon(params, SETTLE_FACTOR / gap)


def check_near_equal_rates(
    params: ModelParams,
    delta_r: Optional[float] = None,
    sample_count: int = 10,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> VerdictReport:
    """Check global attraction of E₁ when the two recovery rates nearly agree.

    r_s is replaced by r_a + delta_r and r_a − delta_r in turn and the
    sampled orbits must reach the recomputed E₁ within 1e-4·N. The default
    delta_r is 0.1·(d + r_a); larger perturbations lie outside the
    hypothesis and are reported Inconclusive whatever the simulation shows.

    :param params: Parameters with β₁ = β₂, 0 < μ < 1 and R₀ > 1
    :param delta_r: The recovery-rate difference
    :param sample_count: The number of random interior initial points
    :param rng: The random generator of the samples
    :param settings: The integrator settings
    :param initial_points: Explicit initial points replacing the samples
    :return: The verdict
    """
    require_valid(params)
    r0 = r0_closed_form(params)
    if not 0 < params.mu < 1:
        raise PreconditionError("Near-equal rates need 0 < mu < 1")
    if threshold_verdict(r0) != Threshold.SUPERCRITICAL:
        raise PreconditionError("Near-equal rates need R0 > 1, got {!r}".format(r0))
    bound = NEAR_EQUAL_SHARE * (params.d + params.r_a)
    if delta_r is None:
        delta_r = bound
    if delta_r < 0:
        raise ValidationError("delta_r must be non-negative, got {!r}".format(delta_r))
    within = delta_r <= bound
    rng = rng or default_rng()
    points = _points(
        params, initial_points, sample_count, lambda n: sample_interior(rng, params.N, n)
    )

    offsets = [0.0] if delta_r == 0 else [delta_r, -delta_r]
    variants, skipped, worst = [], [], None
    tol = CONVERGENCE_TOL * params.N
    for offset in offsets:
        r_s = params.r_a + offset
        perturbed = params.replace(r_s=r_s)
        if r_s < 0 or r0_closed_form(perturbed) <= 1.0:
            skipped.append(r_s)
            continue
        target = _endemic_target(perturbed)
        horizon, capped = _endemic_horizon(perturbed, target)
        settled = _settle(
            perturbed,
            points,
            target.state,
            horizon,
            tol,
            settings or verification_settings(perturbed),
        )
        variant_worst = max(settled, key=lambda s: s.distance)
        variants.append(
            {
                "r_s": r_s,
                "horizon": horizon,
                "capped": capped,
                "max_distance": variant_worst.distance,
            }
        )
        if worst is None or variant_worst.distance > worst[1].distance:
            worst = (perturbed, variant_worst, capped)
    if worst is None:
        raise PreconditionError("No perturbed parameter set keeps R0 > 1")

    hypotheses = hypothesis_values(params)
    hypotheses.update({"delta_r": delta_r, "delta_r_bound": bound, "within": within})
    evidence = {
        "variants": variants,
        "skipped_r_s": skipped,
        "tolerance": tol,
        "samples": len(points),
    }
    perturbed, sample, capped = worst
    if not within:
        evidence["note"] = "delta_r outside the near-equal hypothesis"
        return VerdictReport(
            "near-equal-rates", hypotheses, Outcome.INCONCLUSIVE, evidence
        )
    if sample.distance <= tol:
        return VerdictReport(
            "near-equal-rates", hypotheses, Outcome.CONFIRMED, evidence
        )
    if capped:
        return VerdictReport(
            "near-equal-rates", hypotheses, Outcome.INCONCLUSIVE, evidence
        )
    return VerdictReport(
        "near-equal-rates",
        hypotheses,
        Outcome.VIOLATED,
        evidence,
        witness=_witness(perturbed, sample.p0, sample.t),
    )


def check_boundary_endemic(
    params: ModelParams,
    sample_count: int = 20,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> VerdictReport:
    """Check that orbits off the disease-free line reach E₂ (μ = 0) or E₃ (μ = 1).

    :param params: Parameters with β₁ = β₂, μ ∈ {0, 1} and R₀ > 1
    :param sample_count: The number of random interior initial points
    :param rng: The random generator of the samples
    :param settings: The integrator settings
    :param initial_points: Explicit initial points, each with I_a + I_s > 0
    :return: The verdict
    """
    require_valid(params)
    if params.mu not in (0.0, 1.0):
        raise PreconditionError("Boundary equilibria need mu in {0, 1}")
    r0 = r0_closed_form(params)
    if threshold_verdict(r0) != Threshold.SUPERCRITICAL:
        raise PreconditionError("Boundary equilibria need R0 > 1, got {!r}".format(r0))
    if initial_points is not None and any(p.infectives <= 0 for p in initial_points):
        raise PreconditionError("Initial points must lie off the disease-free line")
    rng = rng or default_rng()
    settings = settings or verification_settings(params)
    points = _points(
        params, initial_points, sample_count, lambda n: sample_interior(rng, params.N, n)
    )
    target = _endemic_target(params)
    horizon, capped = _endemic_horizon(params, target)
    tol = CONVERGENCE_TOL * params.N
    settled = _settle(params, points, target.state, horizon, tol, settings)
    return _convergence_verdict(
        "boundary-endemic",
        params,
        settled,
        tol,
        horizon,
        capped,
        hypothesis_values(params),
        {"equilibrium": target.kind.value, "state": target.state.to_dict()},
    )


def check_comparison(
    params: ModelParams,
    sample_count: int = 100,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> VerdictReport:
    """Check that the infectives stay below the linear majorant over 10 periods.

    :param params: The model parameters
    :param sample_count: The number of random initial points in D₀
    :param rng: The random generator of the samples
    :param settings: The integrator settings, shared by both systems
    :param initial_points: Explicit initial points replacing the samples
    :return: The verdict with the largest excess observed
    """
    require_valid(params)
    rng = rng or default_rng()
    settings = settings or FlowSettings()
    points = _points(
        params, initial_points, sample_count, lambda n: sample_domain(rng, params.N, n)
    )
    t_end = COMPARISON_PERIODS * params.omega
    stride = params.omega / COMPARISON_STRIDE
    tol = COMPARISON_TOL * params.N

    excess, witness = -math.inf, None
    for p0 in points:
        nonlinear = solve(params, p0, t_end, settings, stride)
        linear = solve_linear_auxiliary(
            params, (p0.I_a, p0.I_s), t_end, settings, stride
        )
        for name in ("I_a", "I_s"):
            bound = np.interp(nonlinear.times, linear.times, linear.column(name))
            gaps = nonlinear.column(name) - bound
            k = int(np.argmax(gaps))
            if gaps[k] > excess:
                excess, witness = float(gaps[k]), (p0, float(nonlinear.times[k]))

    evidence = {
        "max_excess": excess,
        "tolerance": tol,
        "t_end": t_end,
        "samples": len(points),
    }
    if excess <= tol:
        return VerdictReport(
            "comparison", hypothesis_values(params), Outcome.CONFIRMED, evidence
        )
    return VerdictReport(
        "comparison",
        hypothesis_values(params),
        Outcome.VIOLATED,
        evidence,
        witness=_witness(params, *witness),
    )


def check_invariance(
    params: ModelParams,
    sample_count: int = 200,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> VerdictReport:
    """Check that every recorded sample over 20 periods stays in D₀ within 1e-8·N."""
    require_valid(params)
    rng = rng or default_rng()
    settings = settings or FlowSettings()
    points = _points(
        params, initial_points, sample_count, lambda n: sample_domain(rng, params.N, n)
    )
    t_end = INVARIANCE_PERIODS * params.omega
    tol = INVARIANCE_TOL * params.N

    breach, witness = -math.inf, None
    for p0 in points:
        trajectory = solve(params, p0, t_end, settings)
        states = trajectory.states
        # how far each sample lies outside D₀
        outside = np.maximum(-states.min(axis=1), states.sum(axis=1) - params.N)
        k = int(np.argmax(outside))
        if outside[k] > breach:
            breach, witness = float(outside[k]), (p0, float(trajectory.times[k]))

    evidence = {
        "max_breach": breach,
        "tolerance": tol,
        "t_end": t_end,
        "samples": len(points),
    }
    if breach <= tol:
        return VerdictReport(
            "invariance", hypothesis_values(params), Outcome.CONFIRMED, evidence
        )
    return VerdictReport(
        "invariance",
        hypothesis_values(params),
        Outcome.VIOLATED,
        evidence,
        witness=_witness(params, *witness),
    )


def check_boundary_invariance(
    params: ModelParams,
    sample_count: int = 20,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
) -> VerdictReport:
    """Check that the disease-free line {(S, 0, 0)} is invariant and drawn to E₀.

    Orbits started there must keep I_a = I_s = 0 exactly and reach S = N
    within 1e-4·N.
    """
    require_valid(params)
    rng = rng or default_rng()
    settings = settings or verification_settings(params)
    _require_samples(sample_count)
    points = sample_disease_free(rng, params.N, sample_count)
    horizon, capped = _round_horizon(
        params, -math.log(ENVELOPE_TOL) / (params.d + params.sigma)
    )
    tol = EXTINCTION_TOL * params.N
    hypotheses = hypothesis_values(params)

    worst = (-math.inf, None)
    for p0 in points:
        trajectory = solve(params, p0, horizon, settings)
        infected = np.abs(trajectory.states[:, 1:]).max()
        if infected != 0:
            k = int(np.argmax(np.abs(trajectory.states[:, 1:]).max(axis=1)))
            return VerdictReport(
                "boundary-invariance",
                hypotheses,
                Outcome.VIOLATED,
                {"max_infected": float(infected), "samples": len(points)},
                witness=_witness(params, p0, float(trajectory.times[k])),
            )
        distance = trajectory.final_state.distance(State(params.N, 0.0, 0.0))
        if distance > worst[0]:
            worst = (distance, p0)

    evidence = {
        "max_infected": 0.0,
        "max_distance": worst[0],
        "tolerance": tol,
        "horizon": horizon,
        "capped": capped,
        "samples": len(points),
    }
    if worst[0] <= tol:
        return VerdictReport(
            "boundary-invariance", hypotheses, Outcome.CONFIRMED, evidence
        )
    if capped:
        return VerdictReport(
            "boundary-invariance", hypotheses, Outcome.INCONCLUSIVE, evidence
        )
    return VerdictReport(
        "boundary-invariance",
        hypotheses,
        Outcome.VIOLATED,
        evidence,
        witness=_witness(params, worst[1], horizon),
    )


def _lyapunov_functions(
    params: ModelParams,
) -> Dict[str, Callable[[State], LyapunovEvaluation]]:
    """The Lyapunov functions whose hypotheses hold for params, keyed by name."""
    if not params.is_autonomous:
        return {}
    functions = {}
    r0 = r0_closed_form(params)
    if r0 <= 1.0:
        functions["L"] = lambda state: lyapunov_L(params, state)
    elif params.mu == 0 and params.alpha * params.beta > 0:
        functions["V_mu0"] = lambda state: lyapunov_V_mu0(
            params, to_shifted(params, state.S, state.I_s)
        )
    elif params.r_a == params.r_s and 0 < params.mu < 1 and params.r_a > 0:
        system = EqualRatesSystem.from_params(params)
        functions["V1"] = lambda state: lyapunov_V1_equal_rates(
            params, system.coordinates(state)
        )
    return functions


def check_lyapunov(
    params: ModelParams,
    sample_count: int = 10000,
    rng: np.random.Generator = None,
) -> VerdictReport:
    """Check the sign of every applicable Lyapunov derivative on sampled states.

    The closed-form derivative must not exceed 1e-9 of its flow scale, and
    it must match gradient·vector field within 1e-10 of that scale.

    :param params: Parameters with β₁ = β₂ satisfying some function's hypotheses
    :param sample_count: The number of sampled states per function
    :param rng: The random generator of the samples
    :return: The verdict
    """
    require_valid(params)
    functions = _lyapunov_functions(params)
    if not functions:
        raise PreconditionError("No Lyapunov function applies to these parameters")
    rng = rng or default_rng()
    hypotheses = hypothesis_values(params)
    _require_samples(sample_count)
    # V_mu0 needs I_s > 0, V1 needs I_a + αI_s > 0
    states = sample_interior(rng, params.N, sample_count)

    evidence = {}
    for name, function in sorted(functions.items()):
        max_derivative, max_mismatch = -math.inf, 0.0
        for state in states:
            evaluation = function(state)
            scale = evaluation.flow_scale
            max_derivative = max(max_derivative, evaluation.derivative)
            max_mismatch = max(max_mismatch, evaluation.mismatch / max(scale, 1e-300))
            if (
                evaluation.derivative > LYAPUNOV_TOL * scale
                or evaluation.mismatch > MISMATCH_TOL * scale
            ):
                evidence[name] = {"derivative": evaluation.derivative, "scale": scale}
                return VerdictReport(
                    "lyapunov",
                    hypotheses,
                    Outcome.VIOLATED,
                    evidence,
                    witness=_witness(params, state, 0.0),
                )
        evidence[name] = {
            "max_derivative": max_derivative,
            "max_relative_mismatch": max_mismatch,
            "samples": len(states),
        }
    return VerdictReport("lyapunov", hypotheses, Outcome.CONFIRMED, evidence)


CHECKS = {
    "extinction": check_extinction,
    "persistence": check_persistence,
    "near-equal-rates": check_near_equal_rates,
    "boundary-endemic": check_boundary_endemic,
    "lyapunov": check_lyapunov,
    "comparison": check_comparison,
    "invariance": check_invariance,
    "boundary-invariance": check_boundary_invariance,
}


def run_checks(
    params: ModelParams,
    ids: Optional[Sequence[str]] = None,
    sample_count: Optional[int] = None,
    rng: np.random.Generator = None,
    settings: FlowSettings = None,
    initial_points: Optional[Sequence[State]] = None,
) -> List[VerdictReport]:
    """Run the named checks, or every check whose hypotheses hold.

    Explicitly named checks raise :code:`PreconditionError` when their
    hypotheses fail; without names such checks are skipped.

    :param params: The model parameters
    :param ids: Check identifiers from :code:`CHECKS`
    :param sample_count: Overrides each check's default sample count
    :param rng: The random generator shared by all checks
    :param settings: The integrator settings
    :param initial_points: Explicit initial points for the simulation checks
    :return: The verdicts in the order of ids
    """
    explicit = ids is not None and len(ids) > 0
    unknown = [name for name in ids or () if name not in CHECKS]
    if unknown:
        raise ValidationError("Unknown check(s): {}".format(", ".join(unknown)))
    if sample_count is not None:
        _require_samples(sample_count)
    rng = rng or default_rng()
    reports = []
    for name in ids if explicit else CHECKS:
        kwargs = {"rng": rng}
        if sample_count is not None:
            kwargs["sample_count"] = sample_count
        if settings is not None and name != "lyapunov":
            kwargs["settings"] = settings
        if initial_points is not None and name not in UNSEEDED_POINTS:
            kwargs["initial_points"] = initial_points
        try:
            reports.append(CHECKS[name](params, **kwargs))
        except PreconditionError as exc:
            if explicit:
                raise
            LOGGER.debug("Skipping check %s: %s", name, exc)
    return reports
