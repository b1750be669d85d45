"""Z-scores of empirical statistics against surrogate ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

__all__ = ["SurrogateSummary", "Significance", "zscore", "significance"]


@dataclass(frozen=True)
class SurrogateSummary:
    """Empirical value vs. a surrogate ensemble.

    ``z = (empirical - mean) / std`` where mean and std are taken over the
    valid (defined) samples.  The summary is *degenerate*, and ``z`` is None,
    when the ensemble spread is exactly zero or fewer than two samples are
    valid.
    """

    empirical: float
    mean: Optional[float]
    std: Optional[float]
    n_valid: int
    z: Optional[float]
    degenerate: bool


class Significance(Enum):
    SIGNIFICANT_HIGH = "high"
    SIGNIFICANT_LOW = "low"
    NOT_SIGNIFICANT = "none"


def zscore(
    empirical: float, samples: Iterable[Optional[float]], std: str = "population"
) -> SurrogateSummary:
    """Summarize ``empirical`` against an ensemble of sample values.

    ``samples`` may contain None entries for samples whose statistic was
    undefined; they are dropped and only ``n_valid`` reflects them.  ``std``
    selects the population (divide by N, default) or sample (N - 1) standard
    deviation of the ensemble.
    """
    if std not in ("population", "sample"):
        raise ValueError(f"std must be 'population' or 'sample', got {std!r}")
    valid = np.array([s for s in samples if s is not None], dtype=float)
    n_valid = len(valid)
    if n_valid == 0:
        return SurrogateSummary(empirical, None, None, 0, None, True)
    mean = float(valid.mean())
    sigma = float(valid.std(ddof=0 if std == "population" else 1)) if n_valid > 1 else 0.0
    degenerate = n_valid < 2 or sigma == 0.0
    z = None if degenerate else (empirical - mean) / sigma
    return SurrogateSummary(empirical, mean, sigma, n_valid, z, degenerate)


def significance(z: float) -> Significance:
    """|z| > 2 benchmark, strict: exactly 2 is not significant."""
    if math.isnan(z):
        raise ValueError("z must be defined")
    if z > 2:
        return Significance.SIGNIFICANT_HIGH
    if z < -2:
        return Significance.SIGNIFICANT_LOW
    return Significance.NOT_SIGNIFICANT
