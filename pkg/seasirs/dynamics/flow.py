"""This module contains the season-wise integration of the reduced model,
the period map and trajectory recording.

Within a season the vector field is smooth, so every season is handed to
:code:`scipy.integrate.solve_ivp` as a separate initial value problem and
integration is restarted exactly at each switch instant.
"""

import dataclasses
import json
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from seasirs.core.model import season_beta, season_field, season_schedule
from seasirs.dynamics.reproduction import linearize
from seasirs.exceptions import StepSizeUnderflowError, ValidationError
from seasirs.models.params import ModelParams
from seasirs.models.state import STATE_FIELDS, SeasonLabel, State

LOGGER = logging.getLogger(__name__)

DOMAIN_TOL = 1e-8
CLAMP_TOL = 1e-10
MAX_TOLERANCE = 1e-2

StateLike = Union[State, Sequence[float], np.ndarray]
Field = Callable[[float, np.ndarray], np.ndarray]
Segment = Tuple[Field, Tuple[float, float]]


@dataclasses.dataclass(frozen=True)
class FlowSettings:
    """Integrator settings.

    :param abs_tol: Absolute tolerance of the embedded pair
    :param rel_tol: Relative tolerance of the embedded pair
    :param max_step: Largest step; defaults to min(ω/50, θω, (1−θ)ω)
    :param method: The :code:`solve_ivp` method, a Runge–Kutta 5(4) pair
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_step: Optional[float] = None
    method: str = "RK45"

    def resolve_max_step(self, params: ModelParams) -> float:
        if self.max_step is not None:
            return self.max_step
        return min(
            params.omega / 50.0, params.low_season_length, params.high_season_length
        )

    def validate(self, params: ModelParams) -> "FlowSettings":
        """Check the settings against the season lengths of a parameter set.

        :param params: The model parameters
        :return: The very same settings
        """
        for name in ("abs_tol", "rel_tol"):
            value = getattr(self, name)
            if not 0 < value <= MAX_TOLERANCE:
                raise ValidationError(
                    "{} ∉ (0,{}], got {!r}".format(name, MAX_TOLERANCE, value)
                )
        if self.max_step is not None:
            if not self.max_step > 0:
                raise ValidationError("max_step ∉ (0,∞), got {!r}".format(self.max_step))
            shortest = min(params.low_season_length, params.high_season_length)
            if self.max_step > shortest:
                raise ValidationError(
                    "max_step {!r} exceeds the shortest season {!r}".format(
                        self.max_step, shortest
                    )
                )
        if self.method not in ("RK45", "DOP853"):
            raise ValidationError(
                "method must be an embedded Runge-Kutta pair, got {!r}".format(
                    self.method
                )
            )
        return self

    def coarsened(self, tol: float) -> "FlowSettings":
        """A copy with both tolerances relaxed to at least tol."""
        return dataclasses.replace(
            self, abs_tol=max(self.abs_tol, tol), rel_tol=max(self.rel_tol, tol)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_step": self.max_step,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlowSettings":
        unknown = sorted(set(data) - {"abs_tol", "rel_tol", "max_step"})
        if unknown:
            raise ValidationError(
                "Unknown flow setting(s): {}".format(", ".join(unknown))
            )
        values = {}
        for name, value in data.items():
            if value is None and name == "max_step":
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(
                    "Flow setting {} must be a number, got {!r}".format(name, value)
                )
            values[name] = float(value)
        return cls(**values)


class Trajectory:
    """A time-stamped sequence of states with season annotations.

    The states are kept as an (n, k) array whose columns are named by
    :code:`columns`; model trajectories carry (S, I_a, I_s).
    """

    def __init__(
        self,
        times: np.ndarray,
        states: np.ndarray,
        seasons: List[SeasonLabel],
        columns: Tuple[str, ...] = STATE_FIELDS,
        meta: Dict[str, Any] = None,
    ):
        self.times = np.asarray(times, dtype=float)
        self.states = np.asarray(states, dtype=float)
        self.seasons = seasons
        self.columns = tuple(columns)
        self.meta = meta or {}

    def __len__(self) -> int:
        return len(self.times)

    def __repr__(self) -> str:
        return "<Trajectory samples={} t_end={!r}>".format(
            len(self), float(self.times[-1]) if len(self) else None
        )

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]

    @property
    def samples(self) -> List[Tuple[float, Any, SeasonLabel]]:
        """The samples as (t, state, season) triples."""
        wrap = State.from_array if self.columns == STATE_FIELDS else np.array
        return [
            (float(t), wrap(row), label)
            for t, row, label in zip(self.times, self.states, self.seasons)
        ]

    @property
    def final_state(self) -> State:
        return State.from_array(self.states[-1])

    def window(self, start: float, end: float = np.inf) -> "Trajectory":
        """The sub-trajectory with sample times in [start, end]."""
        mask = (self.times >= start) & (self.times <= end)
        seasons = [label for label, keep in zip(self.seasons, mask) if keep]
        return Trajectory(
            self.times[mask], self.states[mask], seasons, self.columns, dict(self.meta)
        )

    def at(self, t: float) -> np.ndarray:
        """The recorded state at a sample time."""
        matches = np.flatnonzero(self.times == t)
        if not len(matches):
            raise ValidationError("No sample at t={!r}".format(t))
        return self.states[matches[0]]

    def to_rows(self, N: float) -> List[Tuple[Any, ...]]:
        """Rows (t, S, I_a, I_s, R, season) with R = N − S − I_a − I_s."""
        return [
            (
                float(t),
                float(S),
                float(I_a),
                float(I_s),
                float(N - S - I_a - I_s),
                label.which.value,
            )
            for t, (S, I_a, I_s), label in zip(self.times, self.states, self.seasons)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "columns": list(self.columns),
            "times": self.times.tolist(),
            "states": self.states.tolist(),
            "seasons": [label.which.value for label in self.seasons],
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _initial_state(params: ModelParams, p0: StateLike) -> np.ndarray:
    state = p0 if isinstance(p0, State) else State.from_array(p0)
    state.require_in_domain(params.N, tol=DOMAIN_TOL * params.N)
    return state.as_array()


def _check_horizon(t_end: float) -> None:
    if not t_end > 0:
        raise ValidationError("t_end ∉ (0,∞), got {!r}".format(t_end))


def _label_samples(params: ModelParams, times: np.ndarray) -> List[SeasonLabel]:
    # one extra period so that a sample at a switch gets the season it opens
    schedule = season_schedule(params, float(times[-1]) + params.omega)
    starts = np.array([label.start for label in schedule])
    index = np.searchsorted(starts, times, side="right") - 1
    return [schedule[max(i, 0)] for i in index]


def _clamp(states: np.ndarray, N: float) -> np.ndarray:
    low = states < 0
    if not low.any():
        return states
    if (states[low] < -CLAMP_TOL * N).any():
        LOGGER.warning(
            "Recorded state below the round-off band: min component %r",
            float(states.min()),
        )
    states = states.copy()
    states[low & (states >= -CLAMP_TOL * N)] = 0.0
    return states


def _stride_grid(a: float, b: float, stride: float) -> np.ndarray:
    grid = np.arange(np.ceil(a / stride), np.floor(b / stride) + 1) * stride
    grid = grid[(grid > a) & (grid < b)]
    return np.concatenate([[a], grid, [b]])


def _integrate(
    field: Callable[[float, np.ndarray], np.ndarray],
    a: float,
    b: float,
    y: np.ndarray,
    settings: FlowSettings,
    max_step: float,
    t_eval: Optional[np.ndarray] = None,
):
    sol = solve_ivp(
        field,
        (a, b),
        y,
        method=settings.method,
        t_eval=t_eval,
        rtol=settings.rel_tol,
        atol=settings.abs_tol,
        max_step=max_step,
    )
    if sol.status != 0:
        stalled = float(sol.t[-1]) if len(sol.t) else a
        raise StepSizeUnderflowError(sol.message, stalled)
    return sol


def _run_segments(
    params: ModelParams,
    y0: np.ndarray,
    t_end: float,
    settings: FlowSettings,
    fields: List[Segment],
    stride: Optional[float],
    record: bool,
) -> Tuple[np.ndarray, np.ndarray]:
    max_step = settings.resolve_max_step(params)
    times, states = [], []
    y = np.asarray(y0, dtype=float)
    for field, (a, b) in fields:
        last = b >= t_end
        b = min(b, t_end)
        LOGGER.debug("Integrating season segment [%r, %r)", a, b)
        if not record:
            t_eval = np.array([b])
        elif stride is not None:
            t_eval = _stride_grid(a, b, stride)
        else:
            t_eval = None
        sol = _integrate(field, a, b, y, settings, max_step, t_eval)
        y = sol.y[:, -1]
        if record:
            seg_t, seg_y = sol.t, sol.y.T
            if not last:
                # the end point opens the next season
                seg_t, seg_y = seg_t[:-1], seg_y[:-1]
            times.append(seg_t)
            states.append(seg_y)
        if last:
            break
    if not record:
        return np.array([t_end]), y[np.newaxis, :]
    return np.concatenate(times), np.concatenate(states)


def _season_fields(params: ModelParams, t_end: float, make_field):
    return [
        (make_field(season_beta(params, label.which)), (label.start, label.end))
        for label in season_schedule(params, t_end)
    ]


def _meta(params: ModelParams, settings: FlowSettings, **extra: Any) -> Dict[str, Any]:
    meta = {
        "abs_tol": settings.abs_tol,
        "rel_tol": settings.rel_tol,
        "max_step": settings.resolve_max_step(params),
        "method": settings.method,
    }
    meta.update(extra)
    return meta


def solve(
    params: ModelParams,
    p0: StateLike,
    t_end: float,
    settings: FlowSettings = None,
    stride: Optional[float] = None,
) -> Trajectory:
    """Integrate the reduced model season by season.

    Within each season β is constant; the integration restarts exactly at
    every switch instant with the state reached at the end of the previous
    season. Without a stride every accepted integrator step is recorded,
    with a stride the samples lie on the grid k·stride. Switch instants,
    0 and t_end are always recorded.

    :param params: The model parameters
    :param p0: The initial point in D₀
    :param t_end: The horizon
    :param settings: The integrator settings
    :param stride: Optional sampling stride
    :return: The recorded trajectory
    """
    settings = (settings or FlowSettings()).validate(params)
    _check_horizon(t_end)
    if stride is not None and not stride > 0:
        raise ValidationError("stride ∉ (0,∞), got {!r}".format(stride))
    y0 = _initial_state(params, p0)
    fields = _season_fields(params, t_end, lambda beta: season_field(params, beta))
    times, states = _run_segments(params, y0, t_end, settings, fields, stride, True)
    states = _clamp(states, params.N)
    return Trajectory(
        times,
        states,
        _label_samples(params, times),
        meta=_meta(params, settings, stride=stride),
    )


def solve_constant(
    params: ModelParams,
    p0: StateLike,
    t_end: float,
    beta: float,
    settings: FlowSettings = None,
    stride: Optional[float] = None,
) -> Trajectory:
    """Integrate a single seasonal field φᵢ without any restarts.

    :param params: The model parameters
    :param p0: The initial point in D₀
    :param t_end: The horizon
    :param beta: The constant transmission rate
    :param settings: The integrator settings
    :param stride: Optional sampling stride
    :return: The recorded trajectory
    """
    settings = (settings or FlowSettings()).validate(params)
    _check_horizon(t_end)
    y0 = _initial_state(params, p0)
    fields = [(season_field(params, beta), (0.0, t_end))]
    times, states = _run_segments(params, y0, t_end, settings, fields, stride, True)
    states = _clamp(states, params.N)
    return Trajectory(
        times,
        states,
        _label_samples(params, times),
        meta=_meta(params, settings, stride=stride, beta=beta),
    )


def advance(
    params: ModelParams, p0: StateLike, t_end: float, settings: FlowSettings = None
) -> State:
    """Return φ(t_end, p0) without recording intermediate samples."""
    settings = (settings or FlowSettings()).validate(params)
    _check_horizon(t_end)
    y0 = _initial_state(params, p0)
    fields = _season_fields(params, t_end, lambda beta: season_field(params, beta))
    _, states = _run_segments(params, y0, t_end, settings, fields, None, False)
    return State.from_array(_clamp(states, params.N)[-1])


def advance_constant(
    params: ModelParams,
    p0: StateLike,
    t_end: float,
    beta: float,
    settings: FlowSettings = None,
) -> State:
    """Return φᵢ(t_end, p0) for the single field with constant beta."""
    settings = (settings or FlowSettings()).validate(params)
    _check_horizon(t_end)
    y0 = _initial_state(params, p0)
    fields = [(season_field(params, beta), (0.0, t_end))]
    _, states = _run_segments(params, y0, t_end, settings, fields, None, False)
    return State.from_array(_clamp(states, params.N)[-1])


def period_map(
    params: ModelParams, p0: StateLike, settings: FlowSettings = None
) -> State:
    """Apply the period map P(p0) = φ₂(ω, (1−θ)ω, φ₁((1−θ)ω, 0, p0)).

    :param params: The model parameters
    :param p0: The initial point in D₀
    :param settings: The integrator settings
    :return: The state one period later
    """
    return advance(params, p0, params.omega, settings)


def iterate_period_map(
    params: ModelParams, p0: StateLike, k: int, settings: FlowSettings = None
) -> List[State]:
    """Return the orbit [P(p0), P²(p0), …, Pᵏ(p0)]."""
    if k < 1:
        raise ValidationError("k must be at least 1, got {!r}".format(k))
    orbit = []
    state = p0
    for _ in range(k):
        state = period_map(params, state, settings)
        orbit.append(state)
    return orbit


def _linear_field(matrix: np.ndarray) -> Callable[[float, np.ndarray], np.ndarray]:
    def field(t: float, y: np.ndarray) -> np.ndarray:
        return matrix @ y

    return field


def solve_linear_auxiliary(
    params: ModelParams,
    i0: Sequence[float],
    t_end: float,
    settings: FlowSettings = None,
    stride: Optional[float] = None,
) -> Trajectory:
    """Integrate the linear majorant İ = (𝔽(t) − V)I of the infectives.

    The same season-restart stepper as :code:`solve` is used, so both
    trajectories share their sample times when run with the same stride.

    :param params: The model parameters
    :param i0: The initial infectives (I_a, I_s)
    :param t_end: The horizon
    :param settings: The integrator settings
    :param stride: Optional sampling stride
    :return: A trajectory with columns (I_a, I_s)
    """
    settings = (settings or FlowSettings()).validate(params)
    _check_horizon(t_end)
    i0 = np.asarray(i0, dtype=float)
    if i0.shape != (2,) or (i0 < 0).any():
        raise ValidationError("Expected two non-negative infectives, got {!r}".format(i0))
    blocks = linearize(params)
    fields = [
        (_linear_field(blocks.season_matrix(label.which)), (label.start, label.end))
        for label in season_schedule(params, t_end)
    ]
    times, states = _run_segments(params, i0, t_end, settings, fields, stride, True)
    return Trajectory(
        times,
        states,
        _label_samples(params, times),
        columns=("I_a", "I_s"),
        meta=_meta(params, settings, stride=stride),
    )
