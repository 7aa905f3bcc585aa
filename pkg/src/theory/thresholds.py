"""Optimal erasure-threshold sets for multi-trial error/erasure decoding.

For an outer decoder with constant error/erasure tradeoff factor lambda, the
optimal thresholds are T_k = (E0/s) * F_k with

    F_k = (2 b^(k-1) - lambda) / (2 b^z - lambda),    b = 1/(lambda - 1).

The denominator exponent is z, not z-1; only then does the set satisfy the boundary
equation (1/lambda)(E0 + s T_z) = E0 - s T_1 and reduce to (2k-1)/(2z+1) for
lambda -> 2 (derivation in README.md).  ``recurrence_residuals`` checks this numerically.

Everything is evaluated with q = lambda - 1 = 1/b so that lambda -> 1 and large z
never overflow.
"""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from ..utils.errors import ParameterError

if TYPE_CHECKING:
    from ..models.channel_model import SymbolClassProbs

logger = logging.getLogger(__name__)

# lambda closer than this to 2 takes the BMD branch (avoids 0/0 in F)
BMD_LAMBDA_TOLERANCE = 1e-9


def is_bmd_lambda(lam: float) -> bool:
    return abs(lam - 2.0) < BMD_LAMBDA_TOLERANCE


def check_lambda(lam: float) -> None:
    if not (1.0 < lam <= 2.0 + BMD_LAMBDA_TOLERANCE):
        raise ParameterError(f"tradeoff factor lambda must lie in (1, 2], got {lam}")


def check_trials(z: int) -> None:
    if int(z) != z or z < 1:
        raise ParameterError(f"number of trials z must be a positive integer, got {z}")


def threshold_fractions(lam: float, z: int) -> List[float]:
    """Dimensionless threshold locations F_1 <= ... <= F_z (T_k = E0/s * F_k)."""
    check_lambda(lam)
    check_trials(z)
    if is_bmd_lambda(lam):
        return [(2 * k - 1) / (2 * z + 1) for k in range(1, z + 1)]
    q = lam - 1.0
    qz = q ** z
    denom = 2.0 - lam * qz
    return [(2.0 * q ** (z - k + 1) - lam * qz) / denom for k in range(1, z + 1)]


def exponent_factor(lam: float, z: int) -> float:
    """(b^z - 1)/(2 b^z - lambda) with b = 1/(lambda-1); z/(2z+1) for lambda = 2."""
    check_lambda(lam)
    check_trials(z)
    if is_bmd_lambda(lam):
        return z / (2 * z + 1)
    q = lam - 1.0
    qz = q ** z
    return (1.0 - qz) / (2.0 - lam * qz)


class ThresholdSet(BaseModel):
    """Ordered erasure thresholds in nats/bit (same units as reliabilities)."""

    model_config = ConfigDict(frozen=True)

    lam: float
    z: int
    thresholds: Tuple[float, ...]
    e0: Optional[float] = None
    s: Optional[float] = None

    @model_validator(mode="after")
    def _check_order(self) -> "ThresholdSet":
        if len(self.thresholds) != self.z:
            raise ParameterError(f"expected {self.z} thresholds, got {len(self.thresholds)}")
        if any(b < a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ParameterError("thresholds must be non-decreasing")
        if self.thresholds and self.thresholds[0] < 0:
            raise ParameterError("thresholds must be non-negative")
        if self.e0 is not None and self.s is not None and self.thresholds:
            cap = self.e0 / self.s
            if self.thresholds[-1] > cap * (1 + 1e-12):
                raise ParameterError(f"largest threshold exceeds E0/s = {cap}")
        return self

    @property
    def largest(self) -> float:
        return self.thresholds[-1]


def optimal_thresholds(lam: float, z: int, e0: float, s: float) -> ThresholdSet:
    """Optimal threshold set for tradeoff factor ``lam`` and ``z`` decoding trials."""
    if not e0 > 0:
        raise ParameterError(f"Gallager exponent must be positive, got {e0}")
    if not 0 < s <= 0.5:
        raise ParameterError(f"tilt parameter s must lie in (0, 1/2], got {s}")
    scale = e0 / s
    values = tuple(scale * f for f in threshold_fractions(lam, z))
    return ThresholdSet(lam=lam, z=z, thresholds=values, e0=e0, s=s)


class Residuals(BaseModel):
    """Residuals (LHS - RHS) of the optimality system.

    ``boundary`` relates the largest and smallest threshold, ``first_step`` links
    T_1 and T_2 (z >= 2) and ``chain`` holds the z-2 three-term recurrences.
    """

    boundary: float
    first_step: Optional[float] = None
    chain: List[float] = []

    def max_abs(self) -> float:
        values = [self.boundary, *self.chain]
        if self.first_step is not None:
            values.append(self.first_step)
        return max(abs(v) for v in values)


def recurrence_residuals(ts: ThresholdSet, e0: float, s: float) -> Residuals:
    lam, t = ts.lam, ts.thresholds
    boundary = (e0 + s * t[-1]) / lam - (e0 - s * t[0])
    first_step = None
    chain: List[float] = []
    if ts.z >= 2:
        first_step = (lam + 1) * t[0] - (lam - 1) * t[1]
    for k in range(ts.z - 2):
        chain.append((lam * t[k + 1] - t[k]) / (lam - 1) - t[k + 2])
    return Residuals(boundary=boundary, first_step=first_step, chain=chain)


def probability_residuals(probs: "SymbolClassProbs", lam: float) -> Residuals:
    """Optimality conditions on the symbol-class probabilities, in log-domain."""
    check_lambda(lam)
    boundary = probs.log_p_l / lam - probs.log_p_c
    first_step = None
    chain: List[float] = []
    pair = [
        under / (lam - 1) + bar
        for under, bar in zip(probs.log_p_under, probs.log_p_bar)
    ]
    if pair:
        first_step = probs.log_p_c - (1 - 1 / lam) * pair[0]
    for a, b in zip(pair, pair[1:]):
        chain.append(a - b)
    return Residuals(boundary=boundary, first_step=first_step, chain=chain)


def error_probability_chain(probs: "SymbolClassProbs", lam: float, delta: int) -> List[float]:
    """Log of every expression that approximates P_e at an optimal threshold set.

    Returns [ (delta/lam) ln p_l, delta ln p_c, delta (1 - 1/lam) ln(p_under_k^(1/(lam-1)) p_bar_k) ... ].
    At an optimal set all entries coincide.
    """
    check_lambda(lam)
    logs = [delta / lam * probs.log_p_l, delta * probs.log_p_c]
    for under, bar in zip(probs.log_p_under, probs.log_p_bar):
        logs.append(delta * (1 - 1 / lam) * (under / (lam - 1) + bar))
    return logs
