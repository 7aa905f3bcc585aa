import asyncio

from src.coding.rs_codec import OuterCode
from src.models.decoder_models import DecoderModel, optimal_kappa
from src.models.model_configs import (
    ChannelConfig,
    CodeConfig,
    DecoderConfig,
    RunConfig,
    RunPresets,
    SimulationConfig,
    merge_config,
)
from src.simulation.simulator import estimate_pe
from src.theory.thresholds import optimal_thresholds
from src.workflows.simulation_workflow import SimulationWorkflow
from src.workflows.state import RunStatus
from src.workflows.validation_workflow import ValidationWorkflow


def mc_check(words=20_000):
    return merge_config(RunPresets.get_config("mc-check"), {"simulation": {"num_words": words}})


class TestSimulationWorkflow:
    def test_completes_with_prediction(self):
        state = asyncio.run(SimulationWorkflow().run(mc_check()))
        assert state.status == RunStatus.COMPLETED
        assert state.error_message is None
        assert abs(state.prediction.log_pe + 4.8) < 1e-12
        assert state.report.num_words == 20_000
        assert state.report.log_pe_predicted == state.prediction.log_pe
        assert state.log_ratio is not None and state.log_ratio <= 0.2
        assert state.current_step == "completed"

    def test_thresholds_follow_decoder(self):
        config = merge_config(mc_check(2048), {"trials": {"z": 3}})
        state = asyncio.run(SimulationWorkflow().run(config))
        assert state.thresholds.z == 3
        assert state.thresholds.lam == 2.0

    def test_gs_simulated_with_optimal_tangent(self):
        code = OuterCode.rs(15, 7, m=4)
        config = RunConfig(
            code=CodeConfig(n=15, k=7, m=4),
            channel=ChannelConfig(p=0.02, rate_inner=0.5, n_inner=16, e0=0.12, s=0.5),
            decoder=DecoderConfig(),
            simulation=SimulationConfig(num_words=20_000, seed=7),
        )
        state = asyncio.run(SimulationWorkflow().run(config))
        assert state.status == RunStatus.COMPLETED

        kappa, tangent = optimal_kappa(code, 1)
        assert state.decoder == DecoderModel.tangent(code, kappa)
        assert state.report.decoder == f"tangent(kappa={kappa})"
        assert state.thresholds.lam == tangent.lam

        ts = optimal_thresholds(tangent.lam, 1, 0.12, 0.5)
        direct = estimate_pe(code, state.channel, DecoderModel.tangent(code, kappa), ts, 20_000, seed=7)
        assert state.report.num_failures == direct.num_failures

    def test_configuration_error_skips_simulation(self):
        # rate above capacity: no positive exponent
        config = RunConfig(
            code=CodeConfig(n=15, k=7, m=4),
            channel=ChannelConfig(p=0.11, rate_inner=0.9),
            simulation=SimulationConfig(num_words=100),
        )
        state = asyncio.run(SimulationWorkflow().run(config))
        assert state.status == RunStatus.FAILED
        assert state.report is None
        assert "Configuration error" in state.error_message


class TestValidationWorkflow:
    def test_clean_run(self):
        config = RunConfig(code=CodeConfig(n=15, k=7, m=4), simulation=SimulationConfig(oracle_trials=200))
        state = asyncio.run(ValidationWorkflow().run(config))
        assert state.status == RunStatus.COMPLETED
        assert state.report.ok

    def test_discrepancy_status(self):
        config = RunConfig(
            code=CodeConfig(n=15, k=7, m=4),
            simulation=SimulationConfig(oracle_trials=200, inject_fault=True),
        )
        state = asyncio.run(ValidationWorkflow().run(config))
        assert state.status == RunStatus.DISCREPANCY
        assert state.report.discrepancies


class TestRunConfig:
    def test_presets_are_copies(self):
        a = RunPresets.get_config("rs255-tangent")
        a.trials.z_list.append(99)
        assert RunPresets.get_config("rs255-tangent").trials.z_list == [1, 5, 10]

    def test_merge_keeps_untouched_fields(self):
        merged = merge_config(RunPresets.get_config("mc-check"), {"channel": {"p": 0.03}})
        assert merged.channel.p == 0.03
        assert merged.channel.e0 == 0.225
        assert merged.code.n == 3
