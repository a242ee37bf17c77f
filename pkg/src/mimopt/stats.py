"""Mutable solve-statistics counters threaded through the solver stack."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class SolveStats:
    probes: int = 0
    columns_generated: int = 0
    bnb_nodes: int = 0
    notes: list[str] = field(default_factory=list)

    def count_nodes(self, ilp_result) -> None:
        self.bnb_nodes += ilp_result.nodes

    def as_dict(self) -> dict:
        return {
            "probes": self.probes,
            "columnsGenerated": self.columns_generated,
            "branchAndBoundNodes": self.bnb_nodes,
        }
