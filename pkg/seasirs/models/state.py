"""This module contains the state and season models."""

import dataclasses
import enum
from typing import Any, Dict, Sequence

import numpy as np

from seasirs.exceptions import DomainError, ValidationError

STATE_FIELDS = ("S", "I_a", "I_s")


@dataclasses.dataclass(frozen=True)
class State:
    """A point (S, I_a, I_s) of the reduced system.

    The recovered compartment is implicit: R = N − S − I_a − I_s.
    """

    S: float
    I_a: float
    I_s: float

    def as_array(self) -> np.ndarray:
        return np.array([self.S, self.I_a, self.I_s], dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "State":
        if len(values) != 3:
            raise ValidationError(
                "A state has three components, got {}".format(len(values))
            )
        return cls(float(values[0]), float(values[1]), float(values[2]))

    def recovered(self, N: float) -> float:
        return N - self.S - self.I_a - self.I_s

    @property
    def infectives(self) -> float:
        return self.I_a + self.I_s

    def distance(self, other: "State") -> float:
        """The 1-norm distance between two states."""
        return float(np.abs(self.as_array() - other.as_array()).sum())

    def in_domain(self, N: float, tol: float = 0.0) -> bool:
        """Check membership in D₀ = {S, I_a, I_s ≥ 0, S + I_a + I_s ≤ N}.

        :param N: The total population size
        :param tol: Absolute slack allowed on every constraint
        :return: Whether the state lies in D₀ up to the slack
        """
        values = self.as_array()
        if not np.all(np.isfinite(values)):
            return False
        return bool(np.all(values >= -tol) and values.sum() <= N + tol)

    def require_in_domain(self, N: float, tol: float = 0.0) -> "State":
        if not self.in_domain(N, tol):
            raise DomainError(
                "State {!r} lies outside D0 for N={!r}".format(self, N)
            )
        return self

    def to_dict(self) -> Dict[str, float]:
        return {"S": self.S, "I_a": self.I_a, "I_s": self.I_s}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "State":
        unknown = sorted(set(data) - set(STATE_FIELDS))
        if unknown:
            raise ValidationError("Unknown state key(s): {}".format(", ".join(unknown)))
        missing = [name for name in STATE_FIELDS if name not in data]
        if missing:
            raise ValidationError("Missing state field(s): {}".format(", ".join(missing)))
        values = []
        for name in STATE_FIELDS:
            value = data[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(
                    "State field {} must be a number, got {!r}".format(name, value)
                )
            values.append(float(value))
        return cls(*values)


class Season(str, enum.Enum):
    LOW = "low"
    HIGH = "high"


@dataclasses.dataclass(frozen=True)
class SeasonLabel:
    """A season together with the concrete half-open interval it covers.

    :param which: The season
    :param start: Inclusive start of the interval
    :param end: Exclusive end of the interval
    """

    which: Season
    start: float
    end: float

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end

    def to_dict(self) -> Dict[str, Any]:
        return {"which": self.which.value, "start": self.start, "end": self.end}
