"""This module contains exact-size helpers for 2×2 and 3×3 real matrices.

The matrices involved in the threshold and stability computations are tiny,
so everything here works on plain :code:`numpy` arrays with closed-form
spectra instead of a general eigensolver.
"""

import dataclasses
import enum
import logging
import math
from typing import Sequence, Tuple

import numpy as np

from seasirs.exceptions import MatrixOverflowError, ValidationError

LOGGER = logging.getLogger(__name__)

# diagonal (6,6) Padé coefficients of exp
PADE6 = (
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
)
PADE6_THETA = 0.5
MARGINAL_BAND = 1e-12
# p and q below this share of their scale mean a triple root
TRIPLE_ROOT_TOL = 1e-14


def _as_square(A: Sequence, size: int = None) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("Expected a square matrix, got shape {}".format(A.shape))
    if size is not None and A.shape[0] != size:
        raise ValidationError(
            "Expected a {0}x{0} matrix, got shape {1}".format(size, A.shape)
        )
    if not np.all(np.isfinite(A)):
        raise ValidationError("Matrix entries must be finite")
    return A


def expm(A: Sequence, t: float = 1.0) -> np.ndarray:
    """Compute e^{At} by scaling and squaring with a (6,6) Padé approximant.

    The argument is scaled by 2^-s until its 1-norm is at most 1/2, the
    rational approximant is evaluated there and squared s times.

    :param A: A small square matrix
    :param t: The time factor
    :return: The matrix exponential
    """
    A = _as_square(A)
    n = A.shape[0]
    X = A * t
    norm = np.abs(X).sum(axis=0).max()
    if not math.isfinite(norm):
        raise MatrixOverflowError("Scaled matrix At is not finite")
    s = 0
    if norm > PADE6_THETA:
        s = int(math.ceil(math.log2(norm / PADE6_THETA)))
    X = X / (2.0 ** s)

    identity = np.eye(n)
    power = identity
    numerator = PADE6[0] * identity
    denominator = PADE6[0] * identity
    for k in range(1, len(PADE6)):
        power = power @ X
        numerator = numerator + PADE6[k] * power
        denominator = denominator + ((-1) ** k) * PADE6[k] * power
    E = np.linalg.solve(denominator, numerator)

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            E = E @ E
    if not np.all(np.isfinite(E)):
        raise MatrixOverflowError(
            "Matrix exponential overflows for 1-norm {!r}".format(norm)
        )
    return E


def eig2(A: Sequence) -> Tuple[complex, complex]:
    """Return the two eigenvalues of a real 2×2 matrix.

    The discriminant is formed as (a − d)² + 4bc rather than tr² − 4det,
    and the smaller real root is recovered from the determinant.

    :param A: A 2×2 matrix
    :return: The eigenvalues, larger modulus first for real pairs
    """
    A = _as_square(A, 2)
    a, b = A[0]
    c, d = A[1]
    trace = a + d
    det = a * d - b * c
    disc = (a - d) ** 2 + 4.0 * b * c
    if disc >= 0:
        root = math.sqrt(disc)
        big = 0.5 * (trace + math.copysign(root, trace))
        small = det / big if big != 0 else 0.5 * (trace - math.copysign(root, trace))
        return complex(big), complex(small)
    root = math.sqrt(-disc)
    return complex(0.5 * trace, 0.5 * root), complex(0.5 * trace, -0.5 * root)


def spectral_radius2(A: Sequence) -> float:
    """Return the largest eigenvalue modulus of a real 2×2 matrix.

    :param A: A 2×2 matrix
    :return: The spectral radius
    """
    A = _as_square(A, 2)
    disc = (A[0, 0] - A[1, 1]) ** 2 + 4.0 * A[0, 1] * A[1, 0]
    if disc < 0:
        # complex pair: |λ|² = det
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        return math.sqrt(max(det, 0.0))
    return max(abs(lam) for lam in eig2(A))


class StabilityVerdict(str, enum.Enum):
    ALL_NEGATIVE = "all_negative"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


@dataclasses.dataclass(frozen=True)
class CubicCoeffs:
    """The monic cubic λ³ + ξ₂λ² + ξ₁λ + ξ₀."""

    xi2: float
    xi1: float
    xi0: float

    @classmethod
    def from_matrix(cls, A: Sequence) -> "CubicCoeffs":
        """The characteristic polynomial det(λI − A) of a 3×3 matrix."""
        A = _as_square(A, 3)
        minors = (
            A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
            + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
            + A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
        )
        return cls(-float(np.trace(A)), float(minors), -float(np.linalg.det(A)))

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "CubicCoeffs":
        r1, r2, r3 = roots
        return cls(
            -(r1 + r2 + r3).real,
            (r1 * r2 + r1 * r3 + r2 * r3).real,
            -(r1 * r2 * r3).real,
        )

    def __call__(self, lam: complex) -> complex:
        return ((lam + self.xi2) * lam + self.xi1) * lam + self.xi0

    def derivative(self, lam: complex) -> complex:
        return (3.0 * lam + 2.0 * self.xi2) * lam + self.xi1

    @property
    def hurwitz_gap(self) -> float:
        """The Routh–Hurwitz determinant ξ₂ξ₁ − ξ₀."""
        return self.xi2 * self.xi1 - self.xi0


def _polish(cubic: CubicCoeffs, lam: complex, steps: int = 2) -> complex:
    for _ in range(steps):
        slope = cubic.derivative(lam)
        if slope == 0:
            break
        candidate = lam - cubic(lam) / slope
        if abs(cubic(candidate)) >= abs(cubic(lam)):
            break
        lam = candidate
    return lam


def cubic_roots(cubic: CubicCoeffs) -> np.ndarray:
    """Solve a monic real cubic with Cardano's formula.

    Three real roots are taken from the trigonometric form, which avoids
    complex cube roots; every root gets a guarded Newton polish. A cubic
    whose depressed coefficients vanish relative to its scale has the
    triple root −ξ₂/3, which is returned as is.

    :param cubic: The cubic coefficients
    :return: The three roots as a complex array, sorted by real part descending
    """
    shift = cubic.xi2 / 3.0
    p = cubic.xi1 - cubic.xi2 ** 2 / 3.0
    q = 2.0 * cubic.xi2 ** 3 / 27.0 - cubic.xi2 * cubic.xi1 / 3.0 + cubic.xi0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    scale = max(abs(shift), math.sqrt(abs(cubic.xi1)), abs(cubic.xi0) ** (1.0 / 3.0))

    if abs(p) <= TRIPLE_ROOT_TOL * scale ** 2 and abs(q) <= TRIPLE_ROOT_TOL * scale ** 3:
        return np.full(3, complex(-shift), dtype=complex)
    if disc > 0:
        u = np.cbrt(-q / 2.0 - math.copysign(math.sqrt(disc), q))
        v = -p / (3.0 * u) if u != 0 else 0.0
        real = u + v
        imag = math.sqrt(3.0) / 2.0 * (u - v)
        depressed = [complex(real), complex(-real / 2.0, imag), complex(-real / 2.0, -imag)]
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        angle = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        depressed = [
            complex(m * math.cos(angle - 2.0 * math.pi * k / 3.0)) for k in range(3)
        ]

    roots = [_polish(cubic, y - shift) for y in depressed]
    return np.array(sorted(roots, key=lambda z: (-z.real, -z.imag)), dtype=complex)


def eig3(A: Sequence) -> np.ndarray:
    """Return the three eigenvalues of a real 3×3 matrix.

    :param A: A 3×3 matrix
    :return: The eigenvalues as a complex array, sorted by real part descending
    """
    return cubic_roots(CubicCoeffs.from_matrix(A))


def routh_hurwitz3(c: CubicCoeffs) -> StabilityVerdict:
    """Apply the Routh–Hurwitz criterion to a monic cubic.

    All roots have negative real parts iff ξ₂ > 0, ξ₀ > 0 and ξ₂ξ₁ − ξ₀ > 0.
    A quantity within 1e-12 of zero makes the verdict marginal.

    :param c: The cubic coefficients
    :return: The stability verdict
    """
    quantities = (c.xi2, c.xi0, c.hurwitz_gap)
    if any(abs(x) <= MARGINAL_BAND for x in quantities):
        return StabilityVerdict.MARGINAL
    if all(x > 0 for x in quantities):
        return StabilityVerdict.ALL_NEGATIVE
    return StabilityVerdict.UNSTABLE


def verdict_from_roots(roots: Sequence[complex], band: float = 0.0) -> StabilityVerdict:
    """The verdict implied by the sign pattern of the real parts.

    :param roots: Polynomial roots or matrix eigenvalues
    :param band: Real parts within the band count as zero
    :return: The stability verdict
    """
    real = [z.real for z in roots]
    if any(x > band for x in real):
        return StabilityVerdict.UNSTABLE
    if any(abs(x) <= band for x in real):
        return StabilityVerdict.MARGINAL
    return StabilityVerdict.ALL_NEGATIVE


def one_norm(A: Sequence) -> float:
    return float(np.abs(np.asarray(A, dtype=float)).sum(axis=0).max())


def characteristic_residual(A: Sequence, lam: complex) -> float:
    """|det(A − λI)| for a candidate eigenvalue λ."""
    A = np.asarray(A, dtype=complex)
    return float(abs(np.linalg.det(A - lam * np.eye(A.shape[0]))))
