"""This module contains the seasonal transmission schedule and the right-hand
sides of the reduced and the full model."""

import logging
import math
from typing import Callable, List, Sequence, Union

import numpy as np

from seasirs.exceptions import ValidationError
from seasirs.models.params import ModelParams, ValidationResult, validate
from seasirs.models.state import Season, SeasonLabel, State

LOGGER = logging.getLogger(__name__)

StateLike = Union[State, Sequence[float], np.ndarray]

__all__ = [
    "beta_at",
    "rhs",
    "rhs_full4",
    "season_at",
    "season_beta",
    "season_field",
    "season_schedule",
    "switch_times",
    "validate",
    "ValidationResult",
]


def _phase(params: ModelParams, t: float) -> float:
    if t < 0:
        raise ValidationError("Time must be non-negative, got {!r}".format(t))
    return math.fmod(t, params.omega)


def beta_at(params: ModelParams, t: float) -> float:
    """Return the transmission rate in effect at time t.

    The low season covers [mω, mω + (1−θ)ω) and the high season
    [mω + (1−θ)ω, (m+1)ω). At a switch instant the rate of the season that
    starts there applies.

    :param params: The model parameters
    :param t: A non-negative time
    :return: β₁ in the low season, β₂ in the high season
    """
    if _phase(params, t) < params.low_season_length:
        return params.beta1
    return params.beta2


def season_at(params: ModelParams, t: float) -> SeasonLabel:
    """Return the season containing t with its concrete interval.

    :param params: The model parameters
    :param t: A non-negative time
    :return: The season label
    """
    phase = _phase(params, t)
    start = round((t - phase) / params.omega) * params.omega
    switch = start + params.low_season_length
    if phase < params.low_season_length:
        return SeasonLabel(Season.LOW, start, switch)
    return SeasonLabel(Season.HIGH, switch, start + params.omega)


def season_schedule(params: ModelParams, t_end: float) -> List[SeasonLabel]:
    """List the seasons that intersect [0, t_end) in chronological order.

    Each label carries its full season interval, so the last one may reach
    beyond t_end.

    :param params: The model parameters
    :param t_end: End of the time window
    :return: Alternating low and high season labels starting at 0
    """
    schedule = []
    m = 0
    while True:
        start = m * params.omega
        switch = start + params.low_season_length
        schedule.append(SeasonLabel(Season.LOW, start, switch))
        if switch >= t_end:
            break
        schedule.append(SeasonLabel(Season.HIGH, switch, (m + 1) * params.omega))
        if (m + 1) * params.omega >= t_end:
            break
        m += 1
    return schedule


def switch_times(params: ModelParams, t_end: float) -> List[float]:
    """List the season boundaries strictly inside (0, t_end).

    :param params: The model parameters
    :param t_end: End of the time window
    :return: Increasing list of switch instants
    """
    return [label.start for label in season_schedule(params, t_end)[1:]]


def season_beta(params: ModelParams, season: Season) -> float:
    return params.beta1 if season == Season.LOW else params.beta2


def _as_array(state: StateLike) -> np.ndarray:
    if isinstance(state, State):
        return state.as_array()
    return np.asarray(state, dtype=float)


def rhs(params: ModelParams, state: StateLike, beta: float) -> np.ndarray:
    """Evaluate the reduced three-dimensional right-hand side.

    :param params: The model parameters
    :param state: The point (S, I_a, I_s)
    :param beta: The transmission rate in effect
    :return: The derivative (Ṡ, İ_a, İ_s)
    """
    S, I_a, I_s = _as_array(state)
    force = beta * S * (I_a + params.alpha * I_s)
    return np.array(
        [
            (params.d + params.sigma) * (params.N - S)
            - force
            - params.sigma * (I_a + I_s),
            params.mu * force - (params.d + params.r_a) * I_a,
            (1.0 - params.mu) * force - (params.d + params.r_s) * I_s,
        ]
    )


def rhs_full4(params: ModelParams, state4: Sequence[float], beta: float) -> np.ndarray:
    """Evaluate the four-dimensional right-hand side with explicit R.

    The population size is taken from the state, N(t) = S + I_a + I_s + R,
    so the four components sum to zero for every state.

    :param params: The model parameters
    :param state4: The point (S, I_a, I_s, R)
    :param beta: The transmission rate in effect
    :return: The derivative (Ṡ, İ_a, İ_s, Ṙ)
    """
    S, I_a, I_s, R = np.asarray(state4, dtype=float)
    total = S + I_a + I_s + R
    force = beta * S * (I_a + params.alpha * I_s)
    return np.array(
        [
            params.d * total - params.d * S - force + params.sigma * R,
            params.mu * force - (params.d + params.r_a) * I_a,
            (1.0 - params.mu) * force - (params.d + params.r_s) * I_s,
            params.r_a * I_a + params.r_s * I_s - (params.d + params.sigma) * R,
        ]
    )


def season_field(params: ModelParams, beta: float) -> Callable[[float, np.ndarray], np.ndarray]:
    """Build the smooth single-season vector field for an ODE solver.

    :param params: The model parameters
    :param beta: The constant transmission rate of the season
    :return: A function f(t, y) suitable for :code:`scipy.integrate.solve_ivp`
    """
    d_sigma = params.d + params.sigma
    d_ra = params.d + params.r_a
    d_rs = params.d + params.r_s
    alpha, sigma, mu, N = params.alpha, params.sigma, params.mu, params.N

    def field(t: float, y: np.ndarray) -> np.ndarray:
        S, I_a, I_s = y
        force = beta * S * (I_a + alpha * I_s)
        return np.array(
            [
                d_sigma * (N - S) - force - sigma * (I_a + I_s),
                mu * force - d_ra * I_a,
                (1.0 - mu) * force - d_rs * I_s,
            ]
        )

    return field
