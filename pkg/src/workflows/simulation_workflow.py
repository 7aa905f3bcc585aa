"""Monte Carlo workflow using LangGraph."""
import logging

from langgraph.graph import END, StateGraph

from ..models.model_configs import RunConfig
from ..nodes.simulation_nodes import AnalyticComparator, MonteCarloRunner, OperatingPointBuilder
from .state import RunStatus, SimulationState

logger = logging.getLogger(__name__)


class SimulationWorkflow:
    """configure -> simulate -> compare -> finalize; configuration errors skip to finalize."""

    def __init__(self):
        self.builder = OperatingPointBuilder()
        self.runner = MonteCarloRunner()
        self.comparator = AnalyticComparator()
        self.graph = self._build_graph()

    def _build_graph(self):
        workflow = StateGraph(SimulationState)

        workflow.add_node("configure", self.builder.configure)
        workflow.add_node("simulate", self.runner.simulate)
        workflow.add_node("compare", self.comparator.compare)
        workflow.add_node("finalize", self._finalize_node)

        workflow.set_entry_point("configure")

        workflow.add_conditional_edges(
            "configure",
            self.builder.route,
            {
                "ok": "simulate",
                "failed": "finalize",
            },
        )
        workflow.add_edge("simulate", "compare")
        workflow.add_edge("compare", "finalize")
        workflow.add_edge("finalize", END)

        return workflow.compile()

    async def _finalize_node(self, state: SimulationState) -> dict:
        status = RunStatus.FAILED if state.error_message else RunStatus.COMPLETED
        logger.info(f"Simulation run finished: {status.value}")
        return {"status": status, "current_step": "completed"}

    async def run(self, config: RunConfig) -> SimulationState:
        """Run the whole pipeline for ``config`` and return the final state."""
        initial_state = SimulationState(config=config, status=RunStatus.IN_PROGRESS)
        try:
            result = await self.graph.ainvoke(initial_state)
            return SimulationState.model_validate(result)
        except Exception as e:
            logger.error(f"Simulation workflow failed: {e}")
            initial_state.error_message = f"Workflow error: {e}"
            initial_state.status = RunStatus.FAILED
            return initial_state
