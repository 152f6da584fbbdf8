"""Almost dominance coefficients with bootstrap confidence intervals."""

from ._core import (
    AlmostDomError,
    confidence_interval,
    dp_quantile,
    estimate,
    preset_names,
    preset_population,
)

__all__ = [
    "AlmostDomError",
    "confidence_interval",
    "dp_quantile",
    "estimate",
    "preset_names",
    "preset_population",
]
