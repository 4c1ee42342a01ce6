"""Graph-based pipeline execution engine."""

from .graph import Graph, GraphRun, GraphRunResult
from .node import BaseNode, End, NodeRecord
from .runner import WorkflowRunner
from .scheduler import Scheduler
from .state import GraphRunContext

__all__ = [
    "Graph",
    "GraphRun",
    "GraphRunResult",
    "BaseNode",
    "End",
    "NodeRecord",
    "GraphRunContext",
    "Scheduler",
    "WorkflowRunner",
]
