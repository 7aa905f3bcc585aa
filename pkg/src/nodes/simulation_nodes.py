"""Monte Carlo workflow nodes."""
import asyncio
import logging
import math
import time

from ..simulation.simulator import estimate_pe
from ..theory.analysis import pe_mtee
from ..theory.thresholds import optimal_thresholds
from ..workflows.state import RunStatus, SimulationState

logger = logging.getLogger(__name__)


class OperatingPointBuilder:
    """Turns a RunConfig into code, channel, decoder, thresholds and the prediction."""

    async def configure(self, state: SimulationState) -> SimulationState:
        """
        Build the operating point of the run.

        GS decoders are replaced by their optimal tangent decoder for the configured
        number of trials, so the simulated decoder is the one the prediction is for.

        Args:
            state: State holding the RunConfig

        Returns:
            State with code, channel, decoder, thresholds and prediction set, or
            FAILED with the configuration error
        """
        start_time = time.time()
        state.current_step = "configure"
        cfg = state.config

        try:
            code = cfg.code.build()
            channel = cfg.channel.build(code.field.m)
            z = cfg.trials.z
            decoder = cfg.decoder.build(code).judging_decoder(z)
            lam, delta = decoder.operating_point(z)

            state.code = code
            state.channel = channel
            state.decoder = decoder
            state.thresholds = optimal_thresholds(lam, z, channel.e0, channel.s)
            state.prediction = pe_mtee(channel.e0, channel.n_inner, lam, delta, z)

            logger.info(
                f"Operating point {code.describe()}, {decoder.describe()}, z={z}: "
                f"lambda={lam:.6g}, delta={delta}, ln P_e={state.prediction.log_pe:.6g}"
            )

        except Exception as e:
            logger.error(f"Configuration failed: {e}")
            state.status = RunStatus.FAILED
            state.error_message = f"Configuration error: {e}"

        finally:
            state.processing_time += time.time() - start_time

        return state

    def route(self, state: SimulationState) -> str:
        """
        Pick the edge out of the configure node.

        Returns:
            "failed" when configuration failed, "ok" otherwise
        """
        return "failed" if state.status == RunStatus.FAILED else "ok"


class MonteCarloRunner:
    """Runs ``estimate_pe`` off the event loop."""

    async def simulate(self, state: SimulationState) -> SimulationState:
        """Simulate the configured number of words and attach the report."""
        start_time = time.time()
        state.current_step = "simulate"
        sim = state.config.simulation

        try:
            state.report = await asyncio.to_thread(
                estimate_pe,
                state.code,
                state.channel,
                state.decoder,
                state.thresholds,
                sim.num_words,
                sim.seed,
                sim.chunks,
                sim.workers,
                state.prediction.log_pe,
            )

        except Exception as e:
            logger.error(f"Simulation failed: {e}")
            state.status = RunStatus.FAILED
            state.error_message = f"Simulation error: {e}"

        finally:
            state.processing_time += time.time() - start_time

        return state


class AnalyticComparator:
    """Relative log-ratio |ln pe_hat - ln P_e| / |ln P_e| of simulation and prediction."""

    async def compare(self, state: SimulationState) -> SimulationState:
        state.current_step = "compare"
        if state.report is None or state.prediction is None:
            return state

        log_pe = state.prediction.log_pe
        if state.report.num_failures == 0:
            state.notes.append("No failures observed; log-ratio undefined")
            return state
        if log_pe == 0:
            state.notes.append("Predicted P_e is 1; log-ratio undefined")
            return state

        log_pe_hat = math.log(state.report.pe_hat)
        state.log_ratio = abs(log_pe_hat - log_pe) / abs(log_pe)
        state.notes.append(f"ln pe_hat={log_pe_hat:.6g}, ln P_e={log_pe:.6g}")
        logger.info(f"Analytic vs empirical log-ratio: {state.log_ratio:.4f}")
        return state
