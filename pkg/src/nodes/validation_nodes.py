"""RS decoder cross-check node."""
import asyncio
import logging
import time

from ..simulation.oracle import validate_oracle
from ..workflows.state import RunStatus, ValidationState

logger = logging.getLogger(__name__)


class OracleValidator:
    """Compares the BMD capability region with ``rs_decode_ee`` on random patterns."""

    async def validate(self, state: ValidationState) -> ValidationState:
        """
        Decode random (errors, erasures) patterns and record disagreements.

        Args:
            state: State holding the RunConfig (code, trial count, seed, fault injection)

        Returns:
            State with the oracle report, or FAILED with the error
        """
        start_time = time.time()
        state.current_step = "validate"
        cfg = state.config

        try:
            code = cfg.code.build()
            state.report = await asyncio.to_thread(
                validate_oracle,
                code,
                cfg.simulation.oracle_trials,
                cfg.simulation.seed,
                cfg.simulation.inject_fault,
            )
            logger.info(f"Oracle checked {state.report.trials} patterns on {state.report.code}")

        except Exception as e:
            logger.error(f"Oracle validation failed: {e}")
            state.status = RunStatus.FAILED
            state.error_message = f"Validation error: {e}"

        finally:
            state.processing_time += time.time() - start_time

        return state
