"""RS decoder cross-check workflow using LangGraph."""
import logging

from langgraph.graph import END, StateGraph

from ..models.model_configs import RunConfig
from ..nodes.validation_nodes import OracleValidator
from .state import RunStatus, ValidationState

logger = logging.getLogger(__name__)


class ValidationWorkflow:
    """validate -> finalize."""

    def __init__(self):
        self.validator = OracleValidator()
        self.graph = self._build_graph()

    def _build_graph(self):
        workflow = StateGraph(ValidationState)
        workflow.add_node("validate", self.validator.validate)
        workflow.add_node("finalize", self._finalize_node)
        workflow.set_entry_point("validate")
        workflow.add_edge("validate", "finalize")
        workflow.add_edge("finalize", END)
        return workflow.compile()

    async def _finalize_node(self, state: ValidationState) -> dict:
        if state.error_message or state.report is None:
            status = RunStatus.FAILED
        elif state.report.ok:
            status = RunStatus.COMPLETED
        else:
            status = RunStatus.DISCREPANCY
        logger.info(f"Validation run finished: {status.value}")
        return {"status": status, "current_step": "completed"}

    async def run(self, config: RunConfig) -> ValidationState:
        initial_state = ValidationState(config=config, status=RunStatus.IN_PROGRESS)
        try:
            result = await self.graph.ainvoke(initial_state)
            return ValidationState.model_validate(result)
        except Exception as e:
            logger.error(f"Validation workflow failed: {e}")
            initial_state.error_message = f"Workflow error: {e}"
            initial_state.status = RunStatus.FAILED
            return initial_state
