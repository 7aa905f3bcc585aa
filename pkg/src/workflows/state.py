"""State definitions for LangGraph workflows."""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel

from ..coding.rs_codec import OuterCode
from ..models.channel_model import InnerChannelModel
from ..models.decoder_models import DecoderModel
from ..models.model_configs import RunConfig
from ..simulation.oracle import OracleReport
from ..simulation.simulator import SimReport
from ..theory.analysis import PePrediction
from ..theory.thresholds import ThresholdSet


class RunStatus(Enum):
    """Status of a workflow run."""
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"
    DISCREPANCY = "discrepancy"


class SimulationState(BaseModel):
    """State for the Monte Carlo workflow."""

    # Input
    config: RunConfig = RunConfig()

    # Operating point
    code: Optional[OuterCode] = None
    channel: Optional[InnerChannelModel] = None
    decoder: Optional[DecoderModel] = None
    thresholds: Optional[ThresholdSet] = None
    prediction: Optional[PePrediction] = None

    # Results
    report: Optional[SimReport] = None
    log_ratio: Optional[float] = None
    notes: List[str] = []

    # Status tracking
    status: RunStatus = RunStatus.PENDING
    current_step: str = "initialization"
    error_message: Optional[str] = None
    processing_time: float = 0.0


class ValidationState(BaseModel):
    """State for the RS decoder cross-check workflow."""

    config: RunConfig = RunConfig()
    report: Optional[OracleReport] = None

    status: RunStatus = RunStatus.PENDING
    current_step: str = "initialization"
    error_message: Optional[str] = None
    processing_time: float = 0.0
