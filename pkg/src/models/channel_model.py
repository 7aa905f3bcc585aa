"""Super-channel model: BSC + inner ML decoder viewed through Gallager's exponent.

All probabilities are carried as natural-log exponents; E0 * delta * n_inner easily
reaches several hundred nats, far below the smallest representable double.
"""
import logging
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator
from scipy.optimize import minimize_scalar

from ..theory.thresholds import ThresholdSet
from ..utils.errors import ParameterError

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
S_MIN = 1e-6
RHO_TOLERANCE = 1e-10


def bsc_capacity(p: float) -> float:
    """Capacity of the BSC in bits per channel use."""
    if p <= 0.0 or p >= 1.0:
        return 1.0
    return 1.0 + p * math.log2(p) + (1 - p) * math.log2(1 - p)


def gallager_e0_rho(rho: float, p: float) -> float:
    """Gallager's E0(rho, p) for the BSC with uniform input, in nats."""
    a = 1.0 / (1.0 + rho)
    return rho * LN2 - (1.0 + rho) * math.log(p ** a + (1.0 - p) ** a)


def gallager_e0(p: float, rate_bits: float) -> Tuple[float, float]:
    """Random-coding exponent max_rho [E0(rho, p) - rho R] and its maximizer.

    Returns ``(e0, rho_star)`` with e0 in nats per channel bit, clamped at 0.
    """
    if not 0.0 < p < 0.5:
        raise ParameterError(f"crossover probability must lie in (0, 1/2), got {p}")
    if not 0.0 < rate_bits < 1.0:
        raise ParameterError(f"inner rate must lie in (0, 1), got {rate_bits}")
    rate_nats = rate_bits * LN2

    def objective(rho: float) -> float:
        return gallager_e0_rho(rho, p) - rho * rate_nats

    result = minimize_scalar(
        lambda rho: -objective(rho),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": RHO_TOLERANCE},
    )
    # the objective is concave; the maximum may sit on either end of [0, 1]
    candidates = [float(result.x), 0.0, 1.0]
    rho_star = max(candidates, key=objective)
    e0 = max(objective(rho_star), 0.0)
    if e0 == 0.0:
        rho_star = 0.0
    return e0, rho_star


def default_s(rho_star: float) -> float:
    """Tilt parameter s = rho/(1+rho), clamped to [1e-6, 1/2]."""
    if not 0.0 <= rho_star <= 1.0:
        raise ParameterError(f"rho_star must lie in [0, 1], got {rho_star}")
    return min(max(rho_star / (1.0 + rho_star), S_MIN), 0.5)


class InnerChannelModel(BaseModel):
    """BSC crossover, inner code rate/length and the derived exponent and tilt."""

    model_config = ConfigDict(frozen=True)

    p: float
    rate_inner: float
    n_inner: float
    e0: float
    rho_star: float
    s: float

    @model_validator(mode="after")
    def _check_ranges(self) -> "InnerChannelModel":
        if not 0.0 < self.p < 0.5:
            raise ParameterError(f"crossover probability must lie in (0, 1/2), got {self.p}")
        if not 0.0 < self.rate_inner < 1.0:
            raise ParameterError(f"inner rate must lie in (0, 1), got {self.rate_inner}")
        if self.n_inner < 1:
            raise ParameterError(f"inner block length must be >= 1, got {self.n_inner}")
        if self.e0 < 0:
            raise ParameterError(f"Gallager exponent must be >= 0, got {self.e0}")
        if not 0.0 <= self.rho_star <= 1.0:
            raise ParameterError(f"rho_star must lie in [0, 1], got {self.rho_star}")
        if not 0.0 < self.s <= 0.5:
            raise ParameterError(f"tilt parameter s must lie in (0, 1/2], got {self.s}")
        return self

    @classmethod
    def from_bsc(
        cls,
        p: float,
        rate_inner: float = 0.5,
        m: int = 8,
        n_inner: Optional[float] = None,
        s: Optional[float] = None,
        e0: Optional[float] = None,
    ) -> "InnerChannelModel":
        """Derive E0 and s from the channel; ``n_inner`` defaults to m / rate_inner.

        ``e0`` and ``s`` override the derived values when given.
        """
        computed_e0, rho_star = gallager_e0(p, rate_inner)
        model = cls(
            p=p,
            rate_inner=rate_inner,
            n_inner=n_inner if n_inner is not None else m / rate_inner,
            e0=computed_e0 if e0 is None else e0,
            rho_star=rho_star,
            s=default_s(rho_star) if s is None else s,
        )
        logger.debug(
            f"Channel p={p}, R={rate_inner}: E0={model.e0:.6g} nats/bit, "
            f"rho*={rho_star:.6g}, s={model.s:.6g}, n_inner={model.n_inner}"
        )
        return model

    @property
    def symbol_error_log_prob(self) -> float:
        """ln Pr(inner decoder output is wrong) = -E0 n_inner."""
        return -self.e0 * self.n_inner

    @property
    def reliability_cap(self) -> float:
        """E0/s, the largest reliability of a correctly decoded symbol."""
        return self.e0 / self.s


class SymbolClassProbs(BaseModel):
    """Symbol-class probabilities as natural-log exponents.

    ``log_p_bar[k-1]`` and ``log_p_under[k-1]`` belong to k = 1..z-1.
    """

    log_p_c: float
    log_p_l: float
    log_p_bar: List[float] = []
    log_p_under: List[float] = []

    @property
    def p_c(self) -> float:
        return math.exp(self.log_p_c)

    @property
    def p_l(self) -> float:
        return math.exp(self.log_p_l)

    @property
    def p_bar(self) -> List[float]:
        return [math.exp(x) for x in self.log_p_bar]

    @property
    def p_under(self) -> List[float]:
        return [math.exp(x) for x in self.log_p_under]

    @property
    def p_r(self) -> float:
        """Complement of the other classes; no closed form exists."""
        rest = 1.0 - self.p_c - self.p_l - sum(self.p_bar) - sum(self.p_under)
        if rest < 0:
            logger.warning(f"Approximate class probabilities exceed one (p_r = {rest:.3g}); clamping")
            return 0.0
        return rest


def class_log_probs(e0: float, s: float, n_inner: float, ts: ThresholdSet) -> SymbolClassProbs:
    t = ts.thresholds
    return SymbolClassProbs(
        log_p_c=-(e0 - s * t[0]) * n_inner,
        log_p_l=-(e0 + s * t[-1]) * n_inner,
        log_p_bar=[-(e0 - s * t[k + 1]) * n_inner for k in range(ts.z - 1)],
        log_p_under=[-(e0 + s * t[k]) * n_inner for k in range(ts.z - 1)],
    )


def class_probs(model: InnerChannelModel, thresholds: ThresholdSet) -> SymbolClassProbs:
    """Exponential approximations of the symbol-class probabilities."""
    return class_log_probs(model.e0, model.s, model.n_inner, thresholds)
