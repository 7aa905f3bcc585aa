"""Run configurations and named presets."""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..coding.rs_codec import OuterCode
from ..utils.errors import UsageError
from .channel_model import InnerChannelModel
from .decoder_models import DecoderKind, DecoderModel


class OutputFormat(Enum):
    """Serialization formats for command output."""
    CSV = "csv"
    JSON = "json"


class CodeConfig(BaseModel):
    """Outer RS code; the primitive polynomial defaults to the tabulated one for m."""
    model_config = ConfigDict(extra="forbid")

    n: int = 255
    k: int = 144
    m: int = 8
    primitive_polynomial: Optional[int] = None

    def build(self) -> OuterCode:
        return OuterCode.rs(self.n, self.k, self.m, self.primitive_polynomial)


class ChannelConfig(BaseModel):
    """BSC and inner code.  ``e0`` and ``s`` override the derived exponent and tilt."""
    model_config = ConfigDict(extra="forbid")

    p: float = 0.02
    rate_inner: float = 0.5
    n_inner: Optional[float] = None
    e0: Optional[float] = None
    s: Optional[float] = None

    def build(self, m: int) -> InnerChannelModel:
        return InnerChannelModel.from_bsc(
            self.p, self.rate_inner, m=m, n_inner=self.n_inner, s=self.s, e0=self.e0
        )


class DecoderConfig(BaseModel):
    """Outer decoder.  GS means the optimal tangent decoder for each trial count."""
    model_config = ConfigDict(extra="forbid")

    kind: DecoderKind = DecoderKind.GS
    kappa: Optional[int] = None
    lam: Optional[float] = None
    delta: Optional[int] = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "DecoderConfig":
        if self.kind is DecoderKind.TANGENT and self.kappa is None:
            raise ValueError("tangent decoder needs kappa")
        if self.kind is DecoderKind.LAMBDA and self.lam is None:
            raise ValueError("constant-tradeoff decoder needs lambda")
        return self

    def build(self, code: OuterCode) -> DecoderModel:
        return DecoderModel(kind=self.kind, code=code, kappa=self.kappa, lam=self.lam, delta=self.delta)


class TrialConfig(BaseModel):
    """Trial counts and tradeoff sweeps."""
    model_config = ConfigDict(extra="forbid")

    z: int = 1
    z_list: List[int] = [1, 5, 10]
    lambdas: List[float] = [1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0]

    @field_validator("z")
    @classmethod
    def _positive_z(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"z must be >= 1, got {v}")
        return v

    @field_validator("z_list")
    @classmethod
    def _positive_z_list(cls, v: List[int]) -> List[int]:
        if not v or any(z < 1 for z in v):
            raise ValueError("z_list must hold positive trial counts")
        return v


class SimulationConfig(BaseModel):
    """Monte Carlo and oracle-validation settings."""
    model_config = ConfigDict(extra="forbid")

    num_words: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0)
    chunks: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    oracle_trials: int = Field(default=10_000, ge=1)
    inject_fault: bool = False


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: OutputFormat = OutputFormat.CSV
    path: Optional[str] = None


class RunConfig(BaseModel):
    """Everything a command needs; every field has a default."""
    model_config = ConfigDict(extra="forbid")

    code: CodeConfig = CodeConfig()
    channel: ChannelConfig = ChannelConfig()
    decoder: DecoderConfig = DecoderConfig()
    trials: TrialConfig = TrialConfig()
    simulation: SimulationConfig = SimulationConfig()
    output: OutputConfig = OutputConfig()


def merge_config(base: RunConfig, overrides: Dict[str, Any]) -> RunConfig:
    """Deep-merge ``overrides`` (nested dict, JSON layout) into ``base`` and revalidate."""
    merged = base.model_dump(mode="json")

    def update(target: Dict[str, Any], source: Dict[str, Any]) -> None:
        for key, value in source.items():
            if isinstance(value, dict) and isinstance(target.get(key), dict):
                update(target[key], value)
            else:
                target[key] = value

    update(merged, overrides)
    return RunConfig.model_validate(merged)


class RunPresets:
    """Named starting points for the commands."""

    PRESETS: Dict[str, RunConfig] = {
        "rs255-tangent": RunConfig(
            code=CodeConfig(n=255, k=144, m=8),
            decoder=DecoderConfig(kind=DecoderKind.GS),
            trials=TrialConfig(z=1, z_list=[1, 5, 10]),
        ),
        "threshold-sweep": RunConfig(
            channel=ChannelConfig(p=0.02, rate_inner=0.5),
            trials=TrialConfig(z=20, z_list=[20]),
        ),
        # tiny code where the leading-order exponent is close to the exact P_e
        "mc-check": RunConfig(
            code=CodeConfig(n=3, k=1, m=2),
            channel=ChannelConfig(p=0.02, rate_inner=0.5, n_inner=16, e0=0.225, s=0.5),
            decoder=DecoderConfig(kind=DecoderKind.BMD),
            trials=TrialConfig(z=1, z_list=[1]),
            simulation=SimulationConfig(num_words=1_000_000, seed=1),
        ),
    }

    @classmethod
    def get_config(cls, name: str) -> RunConfig:
        if name not in cls.PRESETS:
            raise UsageError(f"unknown preset {name!r}; choose from {', '.join(sorted(cls.PRESETS))}")
        return cls.PRESETS[name].model_copy(deep=True)

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls.PRESETS)
