"""This module contains the random state samplers used by the verification
checks."""

from typing import List, Optional

import numpy as np

from seasirs.exceptions import ValidationError
from seasirs.models.state import State


def default_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(0 if seed is None else seed)


def sample_domain(rng: np.random.Generator, N: float, count: int) -> List[State]:
    """Draw states uniformly from D₀ = {S, I_a, I_s ≥ 0, S + I_a + I_s ≤ N}.

    Three sorted uniforms cut [0, 1] into four spacings; the first three
    are (S, I_a, I_s)/N and the last one is the recovered share.

    :param rng: The random generator
    :param N: The total population size
    :param count: The number of states
    :return: The sampled states
    """
    if count < 0:
        raise ValidationError("count must be non-negative, got {!r}".format(count))
    cuts = np.sort(rng.random((count, 3)), axis=1)
    spacings = np.diff(cuts, axis=1, prepend=0.0)
    return [State.from_array(N * row) for row in spacings]


def sample_interior(
    rng: np.random.Generator, N: float, count: int, floor: float = 1e-6
) -> List[State]:
    """Draw states of D₀ whose three components all exceed floor·N."""
    states = []
    while len(states) < count:
        for state in sample_domain(rng, N, count - len(states)):
            if min(state.S, state.I_a, state.I_s) > floor * N:
                states.append(state)
    return states


def sample_disease_free(rng: np.random.Generator, N: float, count: int) -> List[State]:
    """Draw states (S, 0, 0) with S uniform on [0, N]."""
    return [State(float(S), 0.0, 0.0) for S in N * rng.random(count)]
