"""Shared physical types: system parameters, thermal photon statistics, and the
two-qubit X-state container used by every other module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TRACE_TOL = 1e-9
DEFAULT_EPSILON_TAIL = 1e-12


class TruncationError(RuntimeError):
    """A truncated Fock sum left out more probability mass than tolerated."""


@dataclass(frozen=True)
class SystemParams:
    """Constants of one atom-cavity pair; the two pairs are identical by assumption.

    ``g`` sets the global time scale (times elsewhere are reported as the
    dimensionless product ``g*t``), ``delta`` is the atom-cavity detuning and
    ``p`` counts the half wavelengths of the standing mode the atom crosses
    during one coupling time.  The transit-velocity convention ties the motion
    to the coupling, so neither velocity nor cavity length appears separately.
    ``omega_0`` is derived as ``omega_c + delta`` so the detuning relation
    holds exactly.
    """

    g: float = 1.0
    delta: float = 0.0
    p: int = 1
    motion_enabled: bool = True
    omega_c: float = 1.0
    omega_0: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.g > 0.0:
            raise ValueError(f"coupling strength g must be positive, got {self.g}")
        if isinstance(self.p, bool) or not isinstance(self.p, (int, np.integer)):
            raise ValueError(f"mode parameter p must be an integer, got {self.p!r}")
        if self.p < 1:
            raise ValueError(f"mode parameter p must be >= 1, got {self.p}")
        object.__setattr__(self, "omega_0", self.omega_c + self.delta)


def truncation_index(mean: float, epsilon: float) -> int:
    """Smallest cutoff N whose geometric tail (mean/(mean+1))**(N+1) is <= epsilon."""
    if mean < 0.0:
        raise ValueError(f"mean photon number must be >= 0, got {mean}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"tail tolerance must lie in (0, 1), got {epsilon}")
    if mean == 0.0:
        return 0
    ratio = mean / (mean + 1.0)
    # log estimate, then exact discrete adjustment so boundary cases round right
    n = max(0, math.ceil(math.log(epsilon) / math.log(ratio)) - 1)
    while ratio ** (n + 1) > epsilon:
        n += 1
    while n > 0 and ratio ** n <= epsilon:
        n -= 1
    return n


@dataclass(frozen=True)
class ThermalDistribution:
    """Geometric photon-number weights P_n = mean**n / (mean+1)**(n+1), truncated.

    The truncation is certified: construction fails unless the retained weights
    account for at least ``1 - epsilon_tail`` of the full distribution.
    """

    mean_photons: float
    n_max: int
    epsilon_tail: float = DEFAULT_EPSILON_TAIL

    def __post_init__(self) -> None:
        if self.mean_photons < 0.0:
            raise ValueError(f"mean photon number must be >= 0, got {self.mean_photons}")
        if not 0.0 < self.epsilon_tail < 1.0:
            raise ValueError(f"epsilon_tail must lie in (0, 1), got {self.epsilon_tail}")
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")
        tail = (self.mean_photons / (self.mean_photons + 1.0)) ** (self.n_max + 1)
        if tail > self.epsilon_tail:
            raise TruncationError(
                f"cutoff n_max={self.n_max} leaves tail mass {tail:.3e} above the "
                f"allowed {self.epsilon_tail:.3e} for mean={self.mean_photons}"
            )

    @classmethod
    def from_mean(
        cls, mean: float, epsilon_tail: float = DEFAULT_EPSILON_TAIL
    ) -> "ThermalDistribution":
        """Distribution with the smallest certified cutoff for the given tail bound."""
        return cls(mean, truncation_index(mean, epsilon_tail), epsilon_tail)

    def probabilities(self) -> np.ndarray:
        """Weights P_0 .. P_{n_max}."""
        ratio = self.mean_photons / (self.mean_photons + 1.0)
        return ratio ** np.arange(self.n_max + 1) / (self.mean_photons + 1.0)


def thermal_probability(dist: ThermalDistribution, n: int) -> float:
    """P_n for the given distribution.

    ``n = -1`` denotes the annihilation channel below the vacuum and carries
    weight 0 by convention, which keeps index-shifted sums uniform.
    """
    if n < -1:
        raise ValueError(f"photon index must be >= -1, got {n}")
    if n == -1:
        return 0.0
    mean = dist.mean_photons
    return (mean / (mean + 1.0)) ** n / (mean + 1.0)


def mean_photons_from_temperature(omega_c: float, temperature: float) -> float:
    """Bose occupation 1/(exp(omega_c/T) - 1) of a mode at frequency omega_c."""
    if omega_c <= 0.0:
        raise ValueError(f"mode frequency must be positive, got {omega_c}")
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    x = omega_c / temperature
    if x > 700.0:  # exp would overflow; the occupation is numerically zero
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class DressedParams:
    """Rabi frequency and mixing angle of one excitation sector.

    ``lambda_n = sqrt(delta**2 + 4*g_eff**2*n)``.  The angle enters the
    dynamics only through ``sin(2*theta) in [-1, 0]`` and ``cos(2*theta)``;
    the n = 0 sector is one dimensional and carries no Rabi mixing.
    """

    lambda_n: float
    sin2theta: float
    cos2theta: float


@dataclass(frozen=True)
class EffectiveCoupling:
    """Motion-averaged coupling g' = g*[1 - cos(p*g*t)]/(p*g*t)."""

    g_eff: float


@dataclass(frozen=True)
class AtomicDensityMatrix:
    """Two-atom reduced state in the basis (|gg>, |ge>, |eg>, |ee>).

    Only the X entries are stored: the populations x1, x2, x5, x6 and the
    single independent coherence x3 = <ge|rho|eg>.  Hermiticity is structural
    (x4 = conj(x3)); construction validates trace and positivity to TRACE_TOL.
    """

    x1: float
    x2: float
    x3: complex
    x5: float
    x6: float

    def __post_init__(self) -> None:
        self.validate()

    @property
    def x4(self) -> complex:
        return complex(self.x3).conjugate()

    @property
    def trace(self) -> float:
        return self.x1 + self.x2 + self.x5 + self.x6

    def inner_block_min_eigenvalue(self) -> float:
        """Smaller eigenvalue of the central block [[x2, x3], [x4, x5]]."""
        centre = 0.5 * (self.x2 + self.x5)
        radius = math.hypot(0.5 * (self.x2 - self.x5), abs(self.x3))
        return centre - radius

    def validate(self, tol: float = TRACE_TOL) -> None:
        populations = (self.x1, self.x2, self.x5, self.x6)
        if any(v < -tol or v > 1.0 + tol for v in populations):
            raise ValueError(f"populations outside [0, 1]: {populations}")
        if abs(self.trace - 1.0) > tol:
            raise ValueError(f"trace deviates from 1 by {self.trace - 1.0:.3e}")
        if self.inner_block_min_eigenvalue() < -tol:
            raise ValueError(
                f"coherence too large for the populations: |x3|={abs(self.x3):.6g}, "
                f"x2={self.x2:.6g}, x5={self.x5:.6g}"
            )

    def to_matrix(self) -> np.ndarray:
        """Dense 4x4 complex matrix."""
        x3 = complex(self.x3)
        return np.array(
            [
                [self.x1, 0.0, 0.0, 0.0],
                [0.0, self.x2, x3, 0.0],
                [0.0, x3.conjugate(), self.x5, 0.0],
                [0.0, 0.0, 0.0, self.x6],
            ],
            dtype=complex,
        )
