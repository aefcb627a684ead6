"""This module contains the Lyapunov functions of the non-seasonal model.

Each evaluation returns the function value, its closed-form derivative along
solutions and the same derivative computed as gradient·vector field, so
that the two can be compared.
"""

import dataclasses
import math
from typing import Tuple

import numpy as np

from seasirs.core.model import rhs
from seasirs.dynamics.equilibria import EquilibriumKind, find_equilibria
from seasirs.dynamics.reproduction import r0_closed_form
from seasirs.exceptions import DomainError, PreconditionError
from seasirs.models.params import ModelParams
from seasirs.models.state import State


@dataclasses.dataclass(frozen=True)
class LyapunovEvaluation:
    """A Lyapunov function evaluated at one point.

    :param value: The function value
    :param derivative: The closed-form derivative along solutions
    :param derivative_along_flow: gradient·vector field
    :param flow_scale: Σ|∂ᵢV·fᵢ|, the magnitude the two derivatives cancel from
    """

    value: float
    derivative: float
    derivative_along_flow: float
    flow_scale: float

    @property
    def mismatch(self) -> float:
        return abs(self.derivative - self.derivative_along_flow)


def _evaluation(value: float, derivative: float, gradient, field) -> LyapunovEvaluation:
    terms = np.asarray(gradient, dtype=float) * np.asarray(field, dtype=float)
    return LyapunovEvaluation(
        value=float(value),
        derivative=float(derivative),
        derivative_along_flow=float(terms.sum()),
        flow_scale=float(np.abs(terms).sum()),
    )


def lyapunov_L(params: ModelParams, state: State) -> LyapunovEvaluation:
    """L = I_a + α(d+r_a)/(d+r_s)·I_s, non-increasing in D₀ when R₀ ≤ 1.

    Along solutions L' = (d+r_a)(I_a + αI_s)(R₀S/N − 1).

    :param params: Parameters with β₁ = β₂
    :param state: The point of evaluation
    :return: The evaluation
    """
    r0 = r0_closed_form(params)
    weight = params.alpha * (params.d + params.r_a) / (params.d + params.r_s)
    value = state.I_a + weight * state.I_s
    derivative = (
        (params.d + params.r_a)
        * (state.I_a + params.alpha * state.I_s)
        * (r0 * state.S / params.N - 1.0)
    )
    gradient = (0.0, 1.0, weight)
    return _evaluation(value, derivative, gradient, rhs(params, state, params.beta))


def _require_mu0(params: ModelParams) -> Tuple[float, float, float]:
    beta = params.beta
    if params.mu != 0:
        raise PreconditionError("V needs mu = 0, got {!r}".format(params.mu))
    ab = params.alpha * beta
    if not ab > 0:
        raise PreconditionError("V needs alpha * beta > 0")
    if not r0_closed_form(params) > 1:
        raise PreconditionError("V needs R0 > 1")
    shift = params.sigma / ab
    x0 = (params.d + params.r_s + params.sigma) / ab
    y0 = (
        (params.d + params.sigma)
        * (params.N + shift - x0)
        / (params.d + params.r_s + params.sigma)
    )
    return ab, x0, y0


def to_shifted(params: ModelParams, S: float, I_s: float) -> Tuple[float, float]:
    """(x, y) = (S + σ/(αβ), I_s) of the μ = 0 limit system."""
    return S + params.sigma / (params.alpha * params.beta), I_s


def shifted_equilibrium(params: ModelParams) -> Tuple[float, float]:
    _, x0, y0 = _require_mu0(params)
    return x0, y0


def lyapunov_V_mu0(params: ModelParams, state2: Tuple[float, float]) -> LyapunovEvaluation:
    """V(x, y) = ½(x − x₀)² + x₀(y − y₀ − y₀ ln(y/y₀)) of the μ = 0 limit system.

    In shifted coordinates x = S + σ/(αβ), y = I_s the limit system reads
    x' = (d+σ)(N + σ/(αβ)) − (d+σ)x − αβxy, y' = αβxy − (d+r_s+σ)y,
    and V' = −(x − x₀)²(αβy + d + σ).

    :param params: Parameters with μ = 0, β₁ = β₂, αβ > 0 and R₀ > 1
    :param state2: The point (x, y) with y > 0
    :return: The evaluation
    """
    ab, x0, y0 = _require_mu0(params)
    x, y = state2
    if not y > 0:
        raise DomainError("V needs y > 0, got {!r}".format(y))
    d_sigma = params.d + params.sigma
    shift = params.sigma / ab
    value = 0.5 * (x - x0) ** 2 + x0 * (y - y0 - y0 * math.log(y / y0))
    derivative = -((x - x0) ** 2) * (ab * y + d_sigma)
    field = (
        d_sigma * (params.N + shift) - d_sigma * x - ab * x * y,
        ab * x * y - (params.d + params.r_s + params.sigma) * y,
    )
    gradient = (x - x0, x0 * (1.0 - y0 / y))
    return _evaluation(value, derivative, gradient, field)


@dataclasses.dataclass(frozen=True)
class EqualRatesSystem:
    """The (S, I, N₁) form of the model for r_a = r_s = r, with
    I = I_a + αI_s and N₁ = S + I_a + I_s."""

    params: ModelParams
    r: float
    mu_tilde: float
    S_star: float
    I_star: float
    N1_star: float

    @classmethod
    def from_params(cls, params: ModelParams) -> "EqualRatesSystem":
        beta = params.beta
        if params.r_a != params.r_s:
            raise PreconditionError(
                "V1 needs r_a == r_s, got {!r} != {!r}".format(params.r_a, params.r_s)
            )
        if not 0 < params.mu < 1:
            raise PreconditionError("V1 needs 0 < mu < 1")
        if not params.r_a > 0:
            raise PreconditionError("V1 needs a positive recovery rate")
        reports = find_equilibria(params)
        endemic = [rep for rep in reports if rep.kind == EquilibriumKind.ENDEMIC]
        if not endemic:
            raise PreconditionError("V1 needs R0 > 1")
        E1 = endemic[0].state
        return cls(
            params=params,
            r=params.r_a,
            mu_tilde=(params.mu + params.alpha * (1.0 - params.mu)) * beta,
            S_star=E1.S,
            I_star=E1.I_a + params.alpha * E1.I_s,
            N1_star=E1.S + E1.I_a + E1.I_s,
        )

    def coordinates(self, state: State) -> Tuple[float, float, float]:
        return (
            state.S,
            state.I_a + self.params.alpha * state.I_s,
            state.S + state.I_a + state.I_s,
        )

    def field(self, S: float, I: float, N1: float) -> Tuple[float, float, float]:
        p = self.params
        return (
            (p.d + p.sigma) * p.N - p.sigma * N1 - p.d * S - p.beta * S * I,
            self.mu_tilde * S * I - (p.d + self.r) * I,
            (p.d + p.sigma) * p.N - (p.d + self.r + p.sigma) * N1 + self.r * S,
        )


def lyapunov_V1_equal_rates(
    params: ModelParams, state3: Tuple[float, float, float], nu1: float = 1.0
) -> LyapunovEvaluation:
    """V₁ = (ν₁/2)(S−S*)² + ν₂I*g(I/I*) + (ν₃/2)(N₁−N₁*)² with g(x) = x − 1 − ln x.

    ν₂ = ν₁βS*/μ̃ and ν₃ = ν₁σ/r make the cross terms cancel, leaving
    V₁' = −ν₁dS*²(x−1)² − ν₃(d+r+σ)N₁*²(z−1)² − ν₁βS*²I*y(x−1)²
    with x = S/S*, y = I/I*, z = N₁/N₁*.

    :param params: Parameters with r_a = r_s, 0 < μ < 1, β₁ = β₂ and R₀ > 1
    :param state3: The point (S, I, N₁) with I > 0
    :param nu1: The free weight ν₁ > 0
    :return: The evaluation
    """
    system = EqualRatesSystem.from_params(params)
    S, I, N1 = state3
    if not I > 0:
        raise DomainError("V1 needs I > 0, got {!r}".format(I))
    beta, d, sigma, r = params.beta, params.d, params.sigma, system.r
    S_star, I_star, N1_star = system.S_star, system.I_star, system.N1_star
    nu2 = nu1 * beta * S_star / system.mu_tilde
    nu3 = nu1 * sigma / r
    x, y, z = S / S_star, I / I_star, N1 / N1_star
    value = (
        0.5 * nu1 * (S - S_star) ** 2
        + nu2 * I_star * (y - 1.0 - math.log(y))
        + 0.5 * nu3 * (N1 - N1_star) ** 2
    )
    derivative = (
        -nu1 * d * S_star ** 2 * (x - 1.0) ** 2
        - nu3 * (d + r + sigma) * N1_star ** 2 * (z - 1.0) ** 2
        - nu1 * beta * S_star ** 2 * I_star * y * (x - 1.0) ** 2
    )
    gradient = (nu1 * (S - S_star), nu2 * (1.0 - I_star / I), nu3 * (N1 - N1_star))
    return _evaluation(value, derivative, gradient, system.field(S, I, N1))
