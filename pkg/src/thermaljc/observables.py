"""Scalar observables of the two-atom X state: entanglement, purity, energy."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import AtomicDensityMatrix


def concurrence(rho: AtomicDensityMatrix) -> float:
    """Entanglement of an X state: 2*max{0, |x3| - sqrt(x1*x6)}.

    For the stored X structure the spin-flip spectrum is available in closed
    form and reduces to this expression; the clip to zero marks separability.
    """
    x1 = max(rho.x1, 0.0)  # guard vanishing populations against -1e-16 noise
    x6 = max(rho.x6, 0.0)
    return 2.0 * max(0.0, abs(rho.x3) - math.sqrt(x1 * x6))


def purity(rho: AtomicDensityMatrix) -> float:
    """Tr(rho^2) = x1^2 + x2^2 + x5^2 + x6^2 + 2*|x3|^2, in [1/4, 1]."""
    return (
        rho.x1 * rho.x1
        + rho.x2 * rho.x2
        + rho.x5 * rho.x5
        + rho.x6 * rho.x6
        + 2.0 * abs(rho.x3) ** 2
    )


def energy(rho: AtomicDensityMatrix) -> float:
    """Mean atomic excitation energy x6 - x1 (both atoms, units of the atomic
    splitting).  Zero for the initial one-excitation Bell state; -1 and +1 are
    reached only by |gg> and |ee>."""
    return rho.x6 - rho.x1


@dataclass(frozen=True)
class EpePoint:
    """One sample of the entanglement-purity-energy trajectory."""

    gt: float
    concurrence: float
    purity: float
    energy: float


def epe_point(rho: AtomicDensityMatrix, gt: float) -> EpePoint:
    """Bundle the three observables of ``rho`` at dimensionless time ``gt``."""
    return EpePoint(gt, concurrence(rho), purity(rho), energy(rho))
