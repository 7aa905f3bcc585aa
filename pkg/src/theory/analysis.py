"""Closed-form residual codeword error probabilities and trial-count comparisons.

With optimal thresholds, the residual codeword error probability of z-trial
decoding with a constant-tradeoff decoder (lambda, delta) behaves like

    P_e ~ exp(-2 E0 delta factor(lambda, z) n_inner),

where ``factor`` comes from :func:`exponent_factor`.  All results are natural-log
exponents; ``log10`` helpers exist for tables.
"""
import logging
import math
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from ..coding.rs_codec import OuterCode
from ..models.channel_model import class_log_probs
from ..models.decoder_models import make_tangent, optimal_kappa
from ..utils.errors import ParameterError
from .thresholds import check_lambda, check_trials, exponent_factor, optimal_thresholds

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)


class PePrediction(BaseModel):
    """Predicted ln P_e and the inputs it was computed from."""

    model_config = ConfigDict(frozen=True)

    log_pe: float
    exponent_factor: float
    lam: float
    delta: int
    z: int
    e0: float
    n_inner: float

    @property
    def log10_pe(self) -> float:
        return self.log_pe / LN10


def _check_exponent_inputs(e0: float, n_inner: float) -> None:
    if e0 < 0:
        raise ParameterError(f"Gallager exponent must be >= 0, got {e0}")
    if n_inner <= 0:
        raise ParameterError(f"inner block length must be positive, got {n_inner}")


def pe_mtee(e0: float, n_inner: float, lam: float, delta: int, z: int) -> PePrediction:
    """Residual codeword error probability of z-trial decoding at optimal thresholds.

    For lambda = 2 (BMD) the caller supplies delta = d - 1.
    """
    check_lambda(lam)
    check_trials(z)
    _check_exponent_inputs(e0, n_inner)
    if delta < 1:
        raise ParameterError(f"delta must be >= 1, got {delta}")
    factor = exponent_factor(lam, z)
    return PePrediction(
        log_pe=-2.0 * e0 * delta * factor * n_inner,
        exponent_factor=factor,
        lam=lam,
        delta=delta,
        z=z,
        e0=e0,
        n_inner=n_inner,
    )


def pe_asymptote(e0: float, n_inner: float, delta: int) -> float:
    """ln P_e for z -> infinity, -E0 delta n_inner."""
    _check_exponent_inputs(e0, n_inner)
    return -e0 * delta * n_inner


def pe_self_consistency(e0: float, s: float, n_inner: float, lam: float, delta: int, z: int) -> float:
    """(delta/lambda) ln p_l at the optimal thresholds minus ``pe_mtee``'s log P_e.

    Vanishes for every s since s only enters through s T_z = E0 F_z.
    """
    prediction = pe_mtee(e0, n_inner, lam, delta, z)
    ts = optimal_thresholds(lam, z, e0, s)
    probs = class_log_probs(e0, s, n_inner, ts)
    return delta / lam * probs.log_p_l - prediction.log_pe


def min_bmd_trials(code: OuterCode, z_gs: int) -> Optional[int]:
    """Fewest BMD trials that match the optimal-tangent exponent reached with ``z_gs`` trials.

    Smallest z with (d-1) z/(2z+1) >= delta* factor(lambda*, z_gs), or ``None`` when
    even infinitely many BMD trials fall short.  Channel parameters cancel.
    """
    check_trials(z_gs)
    _, tangent = optimal_kappa(code, z_gs)
    target = tangent.delta * exponent_factor(tangent.lam, z_gs)
    d1 = code.d - 1
    if d1 / 2 <= target:
        logger.warning(
            f"No finite number of BMD trials reaches the tangent exponent of z={z_gs} "
            f"on {code.describe()}"
        )
        return None

    def reaches(z: int) -> bool:
        return d1 * z / (2 * z + 1) >= target

    z = max(1, math.ceil(target / (d1 - 2 * target)))
    # guard the closed form against rounding on either side
    while not reaches(z):
        z += 1
    while z > 1 and reaches(z - 1):
        z -= 1
    if z < z_gs:
        logger.warning(
            f"BMD needs only {z} trials to match {z_gs} tangent trials on {code.describe()}"
        )
    return z


def max_tangent_delta(code: OuterCode) -> int:
    """Largest delta over all tangent points; governs the z -> infinity tangent curve."""
    return max(make_tangent(code, kappa).delta for kappa in range(code.d))


class CurveRow(BaseModel):
    """One z of the BMD-vs-tangent comparison (``z is None`` marks the asymptote)."""

    z: Optional[int]
    kappa: Optional[int]
    lam: float
    delta: int
    bmd_log10_pe: float
    tangent_log10_pe: float


def pe_curves(code: OuterCode, e0: float, n_inner: float, z_values: Sequence[int]) -> List[CurveRow]:
    """log10 P_e of BMD and optimal-tangent decoding over ``z_values`` plus the asymptote."""
    rows: List[CurveRow] = []
    d1 = code.d - 1
    for z in sorted(set(z_values)):
        kappa, tangent = optimal_kappa(code, z)
        rows.append(
            CurveRow(
                z=z,
                kappa=kappa,
                lam=tangent.lam,
                delta=tangent.delta,
                bmd_log10_pe=pe_mtee(e0, n_inner, 2.0, d1, z).log10_pe,
                tangent_log10_pe=pe_mtee(e0, n_inner, tangent.lam, tangent.delta, z).log10_pe,
            )
        )
    delta_inf = max_tangent_delta(code)
    rows.append(
        CurveRow(
            z=None,
            kappa=None,
            lam=2.0,
            delta=delta_inf,
            bmd_log10_pe=pe_asymptote(e0, n_inner, d1) / LN10,
            tangent_log10_pe=pe_asymptote(e0, n_inner, delta_inf) / LN10,
        )
    )
    logger.info(f"Computed {len(rows) - 1} comparison rows for {code.describe()}")
    return rows
