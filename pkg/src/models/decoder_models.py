"""Decoder capability functions (DCFs) for the outer decoder.

A DCF gives, for every erasure count tau, the radius eps(tau) such that the decoder
succeeds iff the number of errors is strictly smaller than eps(tau).  Covered are
BMD, Guruswami-Sudan with unbounded multiplicity, its tangent decoders and generic
constant-tradeoff decoders.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..coding.rs_codec import OuterCode
from ..theory.thresholds import BMD_LAMBDA_TOLERANCE, check_lambda, check_trials, exponent_factor
from ..utils.errors import ParameterError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class DecoderKind(Enum):
    """Outer decoder families."""
    BMD = "bmd"
    GS = "gs"
    TANGENT = "tangent"
    LAMBDA = "lambda"


def _check_erasures(code: OuterCode, tau: float, upper: float) -> None:
    if not 0 <= tau <= upper:
        raise ParameterError(f"erasure count {tau} outside [0, {upper}] for {code.describe()}")


def eps_bmd(code: OuterCode, tau: float) -> float:
    """BMD radius (n-k+1-tau)/2."""
    _check_erasures(code, tau, code.d - 1)
    return (code.n - code.k + 1 - tau) / 2


def eps_gs(code: OuterCode, tau: float) -> float:
    """Guruswami-Sudan radius n - tau - sqrt((k-1)(n-tau))."""
    if not 0 <= tau < code.n:
        raise ParameterError(f"erasure count {tau} outside [0, {code.n}) for {code.describe()}")
    rest = code.n - tau
    return rest - math.sqrt((code.k - 1) * rest)


def lambda_gs(code: OuterCode, tau: float) -> float:
    """Local error/erasure tradeoff of the GS radius, 1 / (1 - (k-1) / (2 sqrt((k-1)(n-tau))))."""
    if code.k == 1:
        # the radius is n - tau, a unit slope everywhere
        return 1.0
    limit = code.n - (code.k - 1) / 4
    if not 0 <= tau < limit:
        raise ParameterError(f"erasure count {tau} outside [0, {limit}) for {code.describe()}")
    return 1.0 / (1.0 - math.sqrt(code.k - 1) / (2.0 * math.sqrt(code.n - tau)))


def irs_lambda(ell: int) -> float:
    """Tradeoff factor (l+1)/l of collaborative decoding of l-fold interleaved RS codes."""
    if int(ell) != ell or ell < 1:
        raise ParameterError(f"interleaving degree must be a positive integer, got {ell}")
    return (ell + 1) / ell


@dataclass(frozen=True)
class TangentDecoder:
    """Constant-tradeoff decoder whose radius touches the GS radius at ``kappa``."""

    kappa: int
    lam: float
    delta: int
    radius_at_kappa: float

    def radius(self, tau: ArrayLike) -> ArrayLike:
        return self.radius_at_kappa - (tau - self.kappa) / self.lam

    @property
    def erasure_root(self) -> float:
        """Real root of the radius line; ``delta`` is its floor."""
        return self.kappa + self.lam * self.radius_at_kappa


def make_tangent(code: OuterCode, kappa: int) -> TangentDecoder:
    if code.k < 2:
        raise ParameterError("tangent decoders need k >= 2 (the GS radius is linear for k = 1)")
    if int(kappa) != kappa or not 0 <= kappa <= code.d - 1:
        raise ParameterError(f"tangent point must be an integer in [0, {code.d - 1}], got {kappa}")
    kappa = int(kappa)
    lam = lambda_gs(code, kappa)
    radius = eps_gs(code, kappa)
    delta = min(math.floor(kappa + lam * radius), code.n - 1)
    return TangentDecoder(kappa=kappa, lam=lam, delta=delta, radius_at_kappa=radius)


def optimal_kappa(code: OuterCode, z: int) -> Tuple[int, TangentDecoder]:
    """Tangent point minimizing -delta * factor(lambda, z) over integer kappa in [0, d-1].

    The smallest minimizer wins ties.  The channel does not enter.
    """
    check_trials(z)
    best: Optional[TangentDecoder] = None
    best_value = math.inf
    for kappa in range(code.d):
        tangent = make_tangent(code, kappa)
        value = -tangent.delta * exponent_factor(tangent.lam, z)
        if value < best_value:
            best, best_value = tangent, value
    logger.debug(
        f"Optimal tangent for {code.describe()}, z={z}: kappa={best.kappa}, "
        f"lambda={best.lam:.6f}, delta={best.delta}"
    )
    return best.kappa, best


class DecoderModel(BaseModel):
    """Outer decoder: a family plus the code and, where needed, its parameters.

    ``kappa`` is the tangent point of TANGENT decoders; ``lam`` and ``delta`` the
    tradeoff factor and maximal erasure count of LAMBDA decoders (delta defaults to d-1).
    """

    model_config = ConfigDict(frozen=True)

    kind: DecoderKind
    code: OuterCode
    kappa: Optional[int] = None
    lam: Optional[float] = None
    delta: Optional[int] = None

    @model_validator(mode="after")
    def _check_kind_parameters(self) -> "DecoderModel":
        d = self.code.d
        if self.kind is DecoderKind.TANGENT:
            if self.kappa is None or not 0 <= self.kappa <= d - 1:
                raise ParameterError(f"TANGENT needs 0 <= kappa <= {d - 1}, got {self.kappa}")
            if self.code.k < 2:
                raise ParameterError("TANGENT decoders need k >= 2")
        if self.kind is DecoderKind.LAMBDA:
            if self.lam is None:
                raise ParameterError("LAMBDA decoders need a tradeoff factor")
            check_lambda(self.lam)
            if self.delta is not None and not 0 <= self.delta <= self.code.n - 1:
                raise ParameterError(f"delta must lie in [0, {self.code.n - 1}], got {self.delta}")
        if self.kind is DecoderKind.GS and self.code.k < 2:
            raise ParameterError("GS decoding is modelled for k >= 2 only")
        return self

    @classmethod
    def bmd(cls, code: OuterCode) -> "DecoderModel":
        return cls(kind=DecoderKind.BMD, code=code)

    @classmethod
    def gs(cls, code: OuterCode) -> "DecoderModel":
        return cls(kind=DecoderKind.GS, code=code)

    @classmethod
    def tangent(cls, code: OuterCode, kappa: int) -> "DecoderModel":
        return cls(kind=DecoderKind.TANGENT, code=code, kappa=kappa)

    @classmethod
    def constant(cls, code: OuterCode, lam: float, delta: Optional[int] = None) -> "DecoderModel":
        return cls(kind=DecoderKind.LAMBDA, code=code, lam=lam, delta=delta)

    @property
    def tangent_decoder(self) -> Optional[TangentDecoder]:
        if self.kind is not DecoderKind.TANGENT:
            return None
        return make_tangent(self.code, self.kappa)

    @property
    def max_erasures(self) -> int:
        """delta of LAMBDA decoders, d-1 when not given."""
        return self.delta if self.delta is not None else self.code.d - 1

    def radius(self, tau: ArrayLike) -> ArrayLike:
        """Radius eps(tau); works elementwise on arrays.

        GS radii are 0 for tau >= n.
        """
        tau_arr = np.asarray(tau, dtype=float)
        code = self.code
        if self.kind is DecoderKind.BMD:
            out = (code.d - tau_arr) / 2
        elif self.kind is DecoderKind.GS:
            rest = np.maximum(code.n - tau_arr, 0.0)
            out = rest - np.sqrt((code.k - 1) * rest)
        elif self.kind is DecoderKind.TANGENT:
            out = self.tangent_decoder.radius(tau_arr)
        else:
            out = (self.max_erasures + 1 - tau_arr) / self.lam
        return out if isinstance(tau, np.ndarray) else float(out)

    def succeeds(self, eps: int, tau: int) -> bool:
        return succeeds(self, eps, tau)

    def operating_point(self, z: int) -> Tuple[float, int]:
        """(lambda, delta) that parametrize thresholds and P_e predictions for ``z`` trials.

        GS decoders operate through their optimal tangent decoder for ``z``.
        """
        if self.kind is DecoderKind.BMD:
            return 2.0, self.code.d - 1
        if self.kind is DecoderKind.LAMBDA:
            lam = 2.0 if abs(self.lam - 2.0) < BMD_LAMBDA_TOLERANCE else self.lam
            return lam, self.max_erasures
        if self.kind is DecoderKind.TANGENT:
            t = self.tangent_decoder
        else:
            _, t = optimal_kappa(self.code, z)
        return t.lam, t.delta

    def judging_decoder(self, z: int) -> "DecoderModel":
        """Decoder whose radius matches ``operating_point(z)``.

        GS is replaced by its optimal tangent decoder for ``z``; other kinds are returned
        unchanged.
        """
        if self.kind is not DecoderKind.GS:
            return self
        kappa, _ = optimal_kappa(self.code, z)
        return DecoderModel.tangent(self.code, kappa)

    def describe(self) -> str:
        if self.kind is DecoderKind.TANGENT:
            return f"tangent(kappa={self.kappa})"
        if self.kind is DecoderKind.LAMBDA:
            return f"lambda={self.lam:g}, delta={self.max_erasures}"
        return self.kind.value


def succeeds(model: DecoderModel, eps: int, tau: int) -> bool:
    """True iff ``eps`` errors and ``tau`` erasures lie strictly inside the DCF."""
    n = model.code.n
    if eps < 0 or tau < 0 or eps + tau > n:
        raise ParameterError(f"need eps, tau >= 0 and eps + tau <= {n}, got eps={eps}, tau={tau}")
    if model.kind is DecoderKind.BMD:
        # integer form of eps < (d - tau)/2
        return 2 * eps + tau < model.code.d
    return eps < model.radius(tau)


def radius_array(model: DecoderModel, taus: np.ndarray) -> np.ndarray:
    return model.radius(np.asarray(taus, dtype=float))
