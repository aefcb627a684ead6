import json
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from seasirs.dynamics.reproduction import r0_bisection, r0_closed_form
from seasirs.models import ModelParams

# the reference parameter set of the examples, without seasonal constants
P_STAR = {
    "d": 0.02,
    "alpha": 0.3,
    "sigma": 0.05,
    "mu": 0.4,
    "r_a": 0.1,
    "r_s": 0.2,
    "N": 100.0,
}


def get_test_case(path: str, obj=None):
    with open(str(Path(__file__).parent / path)) as f:
        dict_data = json.load(f)

    if obj is None:
        return dict_data
    return obj.from_dict(dict_data)


def p_star(
    beta1: float = 0.004,
    beta2: float = None,
    theta: float = 0.5,
    omega: float = 1.0,
    **changes: float
) -> ModelParams:
    values = dict(P_STAR)
    values.update(
        beta1=beta1,
        beta2=beta1 if beta2 is None else beta2,
        theta=theta,
        omega=omega,
    )
    values.update(changes)
    return ModelParams(**values)


def random_params(rng: np.random.Generator, seasonal: bool = True, **changes) -> ModelParams:
    """Draw a valid parameter set with moderate rates and βN ∈ [0.05, 1]."""
    N = float(rng.uniform(10.0, 1000.0))
    beta1 = float(rng.uniform(0.05, 1.0)) / N
    values = {
        "d": float(rng.uniform(0.005, 0.05)),
        "alpha": float(rng.uniform(0.0, 1.0)),
        "sigma": float(rng.uniform(0.0, 0.2)),
        "mu": float(rng.uniform(0.05, 0.95)),
        "r_a": float(rng.uniform(0.05, 0.5)),
        "r_s": float(rng.uniform(0.05, 0.5)),
        "beta1": beta1,
        "beta2": float(rng.uniform(0.05, 1.0)) / N if seasonal else beta1,
        "theta": float(rng.uniform(0.1, 0.9)),
        "omega": float(rng.uniform(0.5, 5.0)),
        "N": N,
    }
    values.update(changes)
    return ModelParams(**values)


def random_params_list(seed: int, count: int, seasonal: bool = True, **changes):
    rng = np.random.default_rng(seed)
    return [random_params(rng, seasonal, **changes) for _ in range(count)]


def with_r0(params: ModelParams, target: float) -> ModelParams:
    """Scale both transmission rates so that R₀ equals target; R₀ is linear in β."""
    r0 = r0_closed_form(params) if params.is_autonomous else r0_bisection(params)
    factor = target / r0
    return params.replace(beta1=params.beta1 * factor, beta2=params.beta2 * factor)


def rates(low: float = 0.0, high: float = 0.5):
    return st.floats(min_value=low, max_value=high, allow_nan=False, allow_infinity=False)


@st.composite
def params_strategy(draw, seasonal: bool = True):
    N = draw(st.floats(min_value=1.0, max_value=1000.0))
    beta1 = draw(st.floats(min_value=0.0, max_value=1.0)) / N
    return ModelParams(
        d=draw(rates(0.0, 0.1)),
        alpha=draw(st.floats(min_value=0.0, max_value=1.0)),
        sigma=draw(rates(0.0, 0.2)),
        mu=draw(st.floats(min_value=0.0, max_value=1.0)),
        r_a=draw(rates()),
        r_s=draw(rates()),
        beta1=beta1,
        beta2=draw(st.floats(min_value=0.0, max_value=1.0)) / N if seasonal else beta1,
        theta=draw(st.floats(min_value=0.05, max_value=0.95)),
        omega=draw(st.floats(min_value=0.1, max_value=10.0)),
        N=N,
    )


@st.composite
def states_strategy(draw, N: float):
    cuts = sorted(draw(st.floats(min_value=0.0, max_value=1.0)) for _ in range(3))
    return (N * cuts[0], N * (cuts[1] - cuts[0]), N * (cuts[2] - cuts[1]))
