"""Calibrated box-occupancy perception and safe navigation.

The package splits into geometry (exact box-union operations), conformal
(quantile calibration with a dataset-conditional Beta correction), perception
(synthetic detector, visibility masking, worst-case scoring), belief (a
conservative occupancy filter), planner (sampling-based safe planning with a
braking safety filter), sim/experiment (environments, dynamics, episodes,
Monte Carlo suites), loss (containment-oriented box loss), and cli (batch
entry points).
"""

from .conformal import (
    CalibrationConfig,
    CalibrationResult,
    ScoreSample,
    beta_inv_cdf,
    calibrate,
    dataset_conditional_level,
    empirical_quantile,
    minimal_parameter,
)
from .geometry import Aabb, BoxUnion, area_ops, contains, inflate, inflate_union, minimal_inflation

__all__ = [
    "Aabb",
    "BoxUnion",
    "CalibrationConfig",
    "CalibrationResult",
    "ScoreSample",
    "area_ops",
    "beta_inv_cdf",
    "calibrate",
    "contains",
    "dataset_conditional_level",
    "empirical_quantile",
    "inflate",
    "inflate_union",
    "minimal_inflation",
    "minimal_parameter",
]

__version__ = "0.1.0"
