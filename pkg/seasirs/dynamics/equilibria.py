"""This module contains the equilibria of the non-seasonal model and their
stability classification.

Equilibria come from closed forms; the residual of the right-hand side at
each reported point is recorded as a safety net.
"""

import dataclasses
import enum
import json
import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from seasirs.core.model import rhs
from seasirs.core.smallmat import (
    CubicCoeffs,
    StabilityVerdict,
    eig3,
    routh_hurwitz3,
    verdict_from_roots,
)
from seasirs.dynamics.reproduction import CRITICAL_BAND, r0_closed_form
from seasirs.exceptions import NumericalError, PreconditionError
from seasirs.models.params import (
    ModelParams,
    require_positive_denominators,
    require_valid,
)
from seasirs.models.state import State

LOGGER = logging.getLogger(__name__)

RESIDUAL_BOUND = 1e-10
IDENTITY_TOL = 1e-10
EIGEN_BAND = 1e-12


class EquilibriumKind(str, enum.Enum):
    DISEASE_FREE = "E0"
    ENDEMIC = "E1"
    ASYMPTOMATIC_FREE = "E2"
    SYMPTOMATIC_FREE = "E3"


class Stability(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    SADDLE_NODE = "saddle-node"
    SADDLE = "saddle"


@dataclasses.dataclass(frozen=True)
class RHCertificate:
    """The Routh–Hurwitz quantities of a characteristic cubic.

    The c-coefficients are only known for the endemic equilibrium E₁, where
    ξ₂ξ₁ − ξ₀ = c₀ + c₁Î_a* + c₂(Î_a*)².
    """

    xi0: float
    xi1: float
    xi2: float
    verdict: StabilityVerdict
    c0: Optional[float] = None
    c1: Optional[float] = None
    c2: Optional[float] = None

    @property
    def gap(self) -> float:
        return self.xi2 * self.xi1 - self.xi0

    @property
    def cubic(self) -> CubicCoeffs:
        return CubicCoeffs(self.xi2, self.xi1, self.xi0)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.xi0, self.xi1, self.xi2, self.gap

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "xi0": self.xi0,
            "xi1": self.xi1,
            "xi2": self.xi2,
            "gap": self.gap,
            "verdict": self.verdict.value,
        }
        if self.c0 is not None:
            data.update({"c0": self.c0, "c1": self.c1, "c2": self.c2})
        return data


class EquilibriumReport:
    """A located equilibrium with its spectrum and stability class."""

    def __init__(
        self,
        kind: EquilibriumKind,
        state: State,
        eigenvalues: np.ndarray,
        stability: Stability,
        rh_certificate: Optional[RHCertificate] = None,
        residual: float = 0.0,
        meta: Dict[str, Any] = None,
    ):
        self.kind = kind
        self.state = state
        self.eigenvalues = eigenvalues
        self.stability = stability
        self.rh_certificate = rh_certificate
        self.residual = residual
        self.meta = meta or {}

    def __repr__(self) -> str:
        return "<EquilibriumReport {} {!r} {}>".format(
            self.kind.value, self.state, self.stability.value
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "state": self.state.to_dict(),
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "stability": self.stability.value,
            "rh_certificate": (
                self.rh_certificate.to_dict() if self.rh_certificate else None
            ),
            "residual": self.residual,
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclasses.dataclass(frozen=True)
class TransformedParams:
    """Parameters of the rescaled system used for the endemic certificate.

    With S = (d+r_s)/(μβ)·Ŝ, I_a = (d+r_s)/β·Î_a, I_s = (d+r_s)/β·Î_s and
    τ = (d+r_s)t the model becomes

        Ŝ' = N₁ − d₁Ŝ − σ₁(Î_a + Î_s) − Ŝ(Î_a + αÎ_s)
        Î_a' = −rÎ_a + Ŝ(Î_a + αÎ_s)
        Î_s' = −Î_s + μ₁Ŝ(Î_a + αÎ_s)
    """

    N1: float
    d1: float
    sigma1: float
    r: float
    mu1: float
    alpha: float
    susceptible_scale: float
    infective_scale: float

    @classmethod
    def from_params(cls, params: ModelParams) -> "TransformedParams":
        beta = params.beta
        require_positive_denominators(params)
        if not 0 < params.mu < 1:
            raise PreconditionError(
                "The rescaled system needs 0 < mu < 1, got {!r}".format(params.mu)
            )
        if not beta > 0:
            raise PreconditionError("The rescaled system needs beta > 0")
        d_rs = params.d + params.r_s
        return cls(
            N1=params.N * (params.d + params.sigma) * params.mu * beta / d_rs ** 2,
            d1=(params.d + params.sigma) / d_rs,
            sigma1=params.sigma * params.mu / d_rs,
            r=(params.d + params.r_a) / d_rs,
            mu1=(1.0 - params.mu) / params.mu,
            alpha=params.alpha,
            susceptible_scale=d_rs / (params.mu * beta),
            infective_scale=d_rs / beta,
        )

    @property
    def R0_hat(self) -> float:
        return self.N1 / self.d1 * (1.0 / self.r + self.alpha * self.mu1)

    @property
    def q(self) -> float:
        return 1.0 + self.r * self.mu1 * self.alpha

    def endemic_state(self) -> State:
        """(Ŝ*, Î_a*, Î_s*) of the rescaled system."""
        S = self.N1 / self.d1 / self.R0_hat
        I_a = (
            self.N1
            / (self.sigma1 + self.r * self.sigma1 * self.mu1 + self.r)
            * (1.0 - 1.0 / self.R0_hat)
        )
        return State(S, I_a, self.mu1 * self.r * I_a)

    def transform(self, state: State) -> State:
        """Map a point of the original system to the rescaled coordinates."""
        return State(
            state.S / self.susceptible_scale,
            state.I_a / self.infective_scale,
            state.I_s / self.infective_scale,
        )

    def jacobian(self, state: State) -> np.ndarray:
        S, I_a, I_s = state.S, state.I_a, state.I_s
        W = I_a + self.alpha * I_s
        return np.array(
            [
                [-self.d1 - W, -self.sigma1 - S, -self.sigma1 - self.alpha * S],
                [W, S - self.r, self.alpha * S],
                [self.mu1 * W, self.mu1 * S, self.mu1 * self.alpha * S - 1.0],
            ]
        )


def jacobian(params: ModelParams, state: State, beta: float) -> np.ndarray:
    """The analytic Jacobian of the reduced right-hand side.

    :param params: The model parameters
    :param state: The point of evaluation
    :param beta: The transmission rate
    :return: The 3×3 Jacobian matrix
    """
    S, I_a, I_s = state.S, state.I_a, state.I_s
    W = I_a + params.alpha * I_s
    mu, alpha = params.mu, params.alpha
    return np.array(
        [
            [
                -(params.d + params.sigma) - beta * W,
                -beta * S - params.sigma,
                -alpha * beta * S - params.sigma,
            ],
            [mu * beta * W, mu * beta * S - (params.d + params.r_a), mu * alpha * beta * S],
            [
                (1.0 - mu) * beta * W,
                (1.0 - mu) * beta * S,
                (1.0 - mu) * alpha * beta * S - (params.d + params.r_s),
            ],
        ]
    )


@dataclasses.dataclass(frozen=True)
class DfeCharpoly:
    """f₁(λ) = (λ + d + σ)(λ² − a₁λ + a₀) at E₀.

    :param a0: Determinant of the infective block of J(E₀)
    :param a1: Trace of the infective block of J(E₀)
    :param identity: The value (d+r_a)(d+r_s)(1−R₀) a₀ must match
    """

    a0: float
    a1: float
    identity: float

    @property
    def identity_gap(self) -> float:
        return abs(self.a0 - self.identity)

    def to_dict(self) -> Dict[str, float]:
        return {"a0": self.a0, "a1": self.a1, "identity": self.identity}


def dfe_charpoly(params: ModelParams, beta: Optional[float] = None) -> DfeCharpoly:
    """The quadratic factor of the characteristic polynomial at E₀.

    :param params: The model parameters
    :param beta: The transmission rate; defaults to the common β of params
    :return: The coefficients a₀, a₁ and the value of the R₀ identity
    """
    params = params.with_beta(params.beta if beta is None else beta)
    require_positive_denominators(params)
    block = jacobian(params, State(params.N, 0.0, 0.0), params.beta)[1:, 1:]
    a0 = block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]
    a1 = block[0, 0] + block[1, 1]
    identity = (
        (params.d + params.r_a) * (params.d + params.r_s) * (1.0 - r0_closed_form(params))
    )
    return DfeCharpoly(a0=float(a0), a1=float(a1), identity=identity)


def endemic_rh_certificate(params: ModelParams) -> RHCertificate:
    """The Routh–Hurwitz certificate of E₁ in rescaled coordinates.

    The coefficients ξ₂, ξ₁, ξ₀ of det(λI − Ĵ(Ê₁)) and the c-coefficients
    come from closed forms. The identity ξ₂ξ₁ − ξ₀ = c₀ + c₁Î_a* + c₂(Î_a*)²
    is checked, and ξ is compared with the characteristic polynomial of
    the rescaled Jacobian.

    :param params: Parameters with β₁ = β₂, 0 < μ < 1 and R₀ > 1
    :return: The certificate
    """
    tp = TransformedParams.from_params(params)
    if not tp.R0_hat > 1:
        raise PreconditionError(
            "The endemic certificate needs R0_hat > 1, got {!r}".format(tp.R0_hat)
        )
    r, d1, s1, mu1, alpha, q = tp.r, tp.d1, tp.sigma1, tp.mu1, tp.alpha, tp.q
    a = r * mu1 * alpha
    I_star = tp.endemic_state().I_a
    spread = s1 * mu1 + 1.0 + r + s1

    xi2 = d1 + q * I_star + (1.0 + r * a) / q
    xi1 = d1 * (1.0 + r * a) / q + spread * q * I_star
    xi0 = r * d1 * (tp.R0_hat - 1.0)

    c0 = d1 * (1.0 + r * a) * (r * a + d1 * a + 1.0 + d1) / q ** 2
    c1 = (
        d1 * mu1 * s1 * a
        + r * r * a
        + r * a * s1
        + 2.0 * d1 * r * a
        + d1 * s1 * a
        + s1 * mu1
        + d1 * s1 * mu1
        + 1.0
        + 2.0 * d1
        + d1 * s1
        + r * (d1 - s1 * mu1)
        + a * (d1 - s1)
    )
    c2 = q ** 2 * spread

    gap = xi2 * xi1 - xi0
    expansion = c0 + c1 * I_star + c2 * I_star ** 2
    if abs(gap - expansion) > IDENTITY_TOL * max(abs(gap), abs(expansion), 1e-300):
        raise NumericalError(
            "Routh-Hurwitz identity broken: {!r} != {!r}".format(gap, expansion)
        )

    from_jacobian = CubicCoeffs.from_matrix(tp.jacobian(tp.endemic_state()))
    scale = max(abs(xi2), abs(xi1), abs(xi0), 1.0)
    mismatch = max(
        abs(from_jacobian.xi2 - xi2),
        abs(from_jacobian.xi1 - xi1),
        abs(from_jacobian.xi0 - xi0),
    )
    if mismatch > 1e-8 * scale:
        LOGGER.warning(
            "Closed-form xi differ from the rescaled Jacobian by %r", mismatch
        )

    cubic = CubicCoeffs(xi2, xi1, xi0)
    return RHCertificate(
        xi0=xi0,
        xi1=xi1,
        xi2=xi2,
        verdict=routh_hurwitz3(cubic),
        c0=c0,
        c1=c1,
        c2=c2,
    )


def _residual(params: ModelParams, state: State) -> float:
    residual = float(np.abs(rhs(params, state, params.beta)).max())
    bound = RESIDUAL_BOUND * (params.d + params.sigma) * params.N
    LOGGER.debug("Equilibrium residual %r (bound %r)", residual, bound)
    if residual > bound:
        LOGGER.warning("Equilibrium residual %r exceeds %r", residual, bound)
    return residual


def _stability_from_roots(roots: np.ndarray) -> Stability:
    scale = max(1.0, max(abs(z) for z in roots))
    verdict = verdict_from_roots(roots, band=EIGEN_BAND * scale)
    if verdict == StabilityVerdict.ALL_NEGATIVE:
        return Stability.STABLE
    if verdict == StabilityVerdict.MARGINAL:
        return Stability.SADDLE_NODE
    if any(z.real < 0 for z in roots):
        return Stability.SADDLE
    return Stability.UNSTABLE


def _disease_free(params: ModelParams, r0: float) -> EquilibriumReport:
    state = State(params.N, 0.0, 0.0)
    roots = eig3(jacobian(params, state, params.beta))
    if abs(r0 - 1.0) <= CRITICAL_BAND:
        stability = Stability.SADDLE_NODE
    elif r0 < 1.0:
        stability = Stability.STABLE
    else:
        stability = Stability.SADDLE
    return EquilibriumReport(
        kind=EquilibriumKind.DISEASE_FREE,
        state=state,
        eigenvalues=roots,
        stability=stability,
        residual=_residual(params, state),
        meta={"R0": r0},
    )


def _endemic_state(params: ModelParams, r0: float) -> Tuple[EquilibriumKind, State]:
    d, sigma, mu, N = params.d, params.sigma, params.mu, params.N
    share = 1.0 - 1.0 / r0
    S = N / r0
    if mu == 0:
        I_s = (d + sigma) * N * share / (d + sigma + params.r_s)
        return EquilibriumKind.ASYMPTOMATIC_FREE, State(S, 0.0, I_s)
    if mu == 1:
        I_a = (d + sigma) * N * share / (d + sigma + params.r_a)
        return EquilibriumKind.SYMPTOMATIC_FREE, State(S, I_a, 0.0)
    d_ra, d_rs = d + params.r_a, d + params.r_s
    I_a = (
        mu * (d + sigma) * d_rs * N * share
        / (d_ra * d_rs + sigma * (d + mu * params.r_s) + sigma * params.r_a * (1.0 - mu))
    )
    I_s = (1.0 - mu) * d_ra / (mu * d_rs) * I_a
    return EquilibriumKind.ENDEMIC, State(S, I_a, I_s)


def _endemic(params: ModelParams, r0: float) -> EquilibriumReport:
    kind, state = _endemic_state(params, r0)
    J = jacobian(params, state, params.beta)
    roots = eig3(J)
    stability = _stability_from_roots(roots)
    if kind == EquilibriumKind.ENDEMIC:
        certificate = endemic_rh_certificate(params)
    else:
        cubic = CubicCoeffs.from_matrix(J)
        certificate = RHCertificate(
            xi0=cubic.xi0, xi1=cubic.xi1, xi2=cubic.xi2, verdict=routh_hurwitz3(cubic)
        )
    expected = {
        StabilityVerdict.ALL_NEGATIVE: Stability.STABLE,
        StabilityVerdict.MARGINAL: Stability.SADDLE_NODE,
    }.get(certificate.verdict)
    if expected is not None and expected != stability:
        LOGGER.warning(
            "Routh-Hurwitz verdict %s disagrees with eigenvalues %s at %s",
            certificate.verdict.value,
            roots,
            kind.value,
        )
    return EquilibriumReport(
        kind=kind,
        state=state,
        eigenvalues=roots,
        stability=stability,
        rh_certificate=certificate,
        residual=_residual(params, state),
        meta={"R0": r0},
    )


def find_equilibria(params: ModelParams) -> List[EquilibriumReport]:
    """Locate the equilibria of the non-seasonal model.

    E₀ = (N, 0, 0) always exists. For R₀ > 1 there is exactly one more:
    E₂ without asymptomatic infectives if μ = 0, E₃ without symptomatic
    ones if μ = 1, and the interior point E₁ otherwise.

    :param params: Parameters with β₁ = β₂
    :return: The equilibrium reports, E₀ first
    """
    require_valid(params)
    r0 = r0_closed_form(params)
    reports = [_disease_free(params, r0)]
    if r0 > 1.0:
        reports.append(_endemic(params, r0))
    return reports


def classify(params: ModelParams, beta: Optional[float] = None) -> List[EquilibriumReport]:
    """Classify the equilibria for the transmission rate beta.

    :param params: The model parameters
    :param beta: The transmission rate; defaults to the common β of params
    :return: The equilibrium reports with their stability classes
    """
    if beta is not None:
        params = params.with_beta(beta)
    return find_equilibria(params)
