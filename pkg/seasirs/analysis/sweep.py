"""This module contains the one-parameter threshold sweep."""

import json
import logging
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from seasirs.dynamics.reproduction import Threshold, r0_bisection, r0_threshold
from seasirs.exceptions import NumericalError, PreconditionError, ValidationError
from seasirs.models.params import ModelParams, validate

LOGGER = logging.getLogger(__name__)

SWEEP_AXES = ("theta", "beta2", "mu", "alpha")
MONOTONE_TOL = 1e-10


class SweepRow(NamedTuple):
    value: float
    rho: float
    r0: float
    verdict: Threshold


class SweepTable:
    """The threshold quantities along one parameter axis.

    :param axis: The swept parameter
    :param rows: One row per admissible grid value, ordered by value
    :param skipped: (value, reason) pairs of the rejected grid values
    """

    def __init__(
        self,
        axis: str,
        rows: List[SweepRow],
        skipped: List[Tuple[float, str]] = None,
        meta: Dict[str, Any] = None,
    ):
        self.axis = axis
        self.rows = rows
        self.skipped = skipped or []
        self.meta = meta or {}

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return "<SweepTable axis={} rows={}>".format(self.axis, len(self.rows))

    @property
    def header(self) -> Tuple[str, ...]:
        return (self.axis, "rho", "R0", "verdict")

    @property
    def nondecreasing(self) -> Optional[bool]:
        """Whether the sampled R₀ never drops, up to bisection round-off.

        This is an observation on the grid, not a property of the model.
        """
        if len(self.rows) < 2:
            return None
        return all(
            b.r0 >= a.r0 - MONOTONE_TOL * max(1.0, a.r0)
            for a, b in zip(self.rows, self.rows[1:])
        )

    @property
    def strictly_increasing(self) -> Optional[bool]:
        if len(self.rows) < 2:
            return None
        return all(b.r0 > a.r0 for a, b in zip(self.rows, self.rows[1:]))

    def to_rows(self) -> List[Tuple[Any, ...]]:
        return [(row.value, row.rho, row.r0, row.verdict.value) for row in self.rows]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis,
            "rows": [dict(zip(self.header, row)) for row in self.to_rows()],
            "skipped": [{"value": v, "reason": r} for v, r in self.skipped],
            "flags": {
                "nondecreasing": self.nondecreasing,
                "strictly_increasing": self.strictly_increasing,
            },
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def threshold_sweep(
    base: ModelParams, axis: str, grid: Sequence[float]
) -> SweepTable:
    """Compute ρ(Φ_{F−V}(ω)) and R₀ for every grid value of one parameter.

    Grid values outside the parameter's range, or for which R₀ cannot be
    computed, are skipped with the reason recorded.

    :param base: The parameters the other values are taken from
    :param axis: One of theta, beta2, mu and alpha
    :param grid: The values of the swept parameter
    :return: The sweep table, rows ordered by value
    """
    if axis not in SWEEP_AXES:
        raise ValidationError(
            "Sweep axis must be one of {}, got {!r}".format(", ".join(SWEEP_AXES), axis)
        )
    rows, skipped = [], []
    for value in sorted(float(v) for v in grid):
        params = base.replace(**{axis: value})
        result = validate(params)
        if not result.ok:
            LOGGER.debug("Skipping %s=%r: %s", axis, value, result.violations)
            skipped.append((value, "; ".join(result.violations)))
            continue
        try:
            rho, verdict = r0_threshold(params)
            r0 = r0_bisection(params)
        except (PreconditionError, NumericalError) as exc:
            LOGGER.debug("Skipping %s=%r: %s", axis, value, exc)
            skipped.append((value, str(exc)))
            continue
        rows.append(SweepRow(value, rho, r0, verdict))
    return SweepTable(axis, rows, skipped)
