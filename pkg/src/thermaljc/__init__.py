"""Closed-form dynamics of two moving two-level atoms, each coupled to its own
single-mode thermal cavity, with entanglement, purity, and energy tracking.

The closed-form route (:mod:`thermaljc.dynamics`) evaluates the reduced
two-atom X state through factorized thermal sums; the brute-force route
(:mod:`thermaljc.oracle`) rebuilds the same state by explicit evolution and
partial trace over a truncated Fock space, and exists to check the first.
:mod:`thermaljc.sweep` turns either into time series and parameter scans, and
:mod:`thermaljc.cli` serializes results as CSV/JSON/SVG.
"""

from .core import (
    DEFAULT_EPSILON_TAIL,
    TRACE_TOL,
    AtomicDensityMatrix,
    DressedParams,
    EffectiveCoupling,
    SystemParams,
    ThermalDistribution,
    TruncationError,
    mean_photons_from_temperature,
    thermal_probability,
    truncation_index,
)
from .dynamics import (
    SumFactorCache,
    build_factor_cache,
    density_matrix,
    density_matrix_resonant,
    dressed_params,
    effective_coupling,
)
from .observables import EpePoint, concurrence, energy, epe_point, purity
from .oracle import (
    ORACLE_TOL,
    JointDensity,
    ValidationResult,
    evolve_bell_branch,
    evolve_branch,
    evolve_product_branch,
    evolve_sector,
    evolve_subsystem,
    max_route_deviation,
    oracle_density_matrix,
    oracle_joint_density,
    sector_propagator,
    validation_grid,
    wootters_concurrence_general,
)
from .sweep import (
    DEAD_THRESHOLD,
    SweepReport,
    TimeSeries,
    dead_intervals,
    epe_trajectory,
    scan,
    time_series,
    verified_period,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicDensityMatrix",
    "DEAD_THRESHOLD",
    "DEFAULT_EPSILON_TAIL",
    "DressedParams",
    "EffectiveCoupling",
    "EpePoint",
    "JointDensity",
    "ORACLE_TOL",
    "SumFactorCache",
    "SweepReport",
    "SystemParams",
    "ThermalDistribution",
    "TimeSeries",
    "TRACE_TOL",
    "TruncationError",
    "ValidationResult",
    "build_factor_cache",
    "concurrence",
    "dead_intervals",
    "density_matrix",
    "density_matrix_resonant",
    "dressed_params",
    "effective_coupling",
    "energy",
    "epe_point",
    "epe_trajectory",
    "evolve_bell_branch",
    "evolve_branch",
    "evolve_product_branch",
    "evolve_sector",
    "evolve_subsystem",
    "max_route_deviation",
    "mean_photons_from_temperature",
    "oracle_density_matrix",
    "oracle_joint_density",
    "purity",
    "scan",
    "sector_propagator",
    "thermal_probability",
    "time_series",
    "truncation_index",
    "validation_grid",
    "verified_period",
    "wootters_concurrence_general",
    "__version__",
]
