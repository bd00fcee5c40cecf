"""In-process storage cluster with single-node failure injection and repair."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..codec import Codeword, encode
from ..construction import CodeParams
from ..errors import ScenarioInfeasible
from ..repair import RepairReport, execute_repair, plan_repair, repair_report

log = logging.getLogger(__name__)


@dataclass
class Node:
    index: int
    block: np.ndarray
    alive: bool = True
    served: int = 0


class _ServedBlock:
    """Read-only view of a node's block that counts every symbol handed out."""

    def __init__(self, node: Node, state: "ClusterState"):
        self._node = node
        self._state = state

    def __getitem__(self, sym: int) -> int:
        if not self._node.alive:
            raise KeyError(f"node {self._node.index} is down")
        self._node.served += 1
        self._state.log(f"serve node={self._node.index} symbol={sym}")
        return int(self._node.block[sym])


@dataclass
class ClusterState:
    params: CodeParams
    nodes: list[Node]
    events: list[str] = field(default_factory=list)

    @classmethod
    def from_codeword(cls, cw: Codeword) -> "ClusterState":
        nodes = [Node(i, cw.blocks[i - 1].copy()) for i in range(1, cw.params.n + 1)]
        return cls(cw.params, nodes)

    def log(self, msg: str) -> None:
        self.events.append(msg)

    def node(self, i: int) -> Node:
        return self.nodes[i - 1]

    @property
    def alive(self) -> int:
        return sum(node.alive for node in self.nodes)

    def served(self) -> dict[int, int]:
        return {node.index: node.served for node in self.nodes}

    def blocks(self) -> np.ndarray:
        return np.stack([node.block for node in self.nodes])

    def fail(self, i: int) -> None:
        node = self.node(i)
        node.alive = False
        node.block = np.zeros_like(node.block)
        self.log(f"fail node={i}")
        if self.alive < self.params.k:
            raise ScenarioInfeasible(f"only {self.alive} nodes alive, need {self.params.k}")

    def repair(self, i: int) -> RepairReport:
        plan = plan_repair(self.params, i)
        helpers = {node.index: _ServedBlock(node, self) for node in self.nodes
                   if node.alive and node.index != i}
        block = execute_repair(self.params, helpers, plan)
        node = self.node(i)
        node.block = block
        node.alive = True
        report = repair_report(plan)
        self.log(f"repair node={i} downloaded={report.downloaded_symbols}")
        return report


@dataclass
class SimSummary:
    state: ClusterState
    reports: list[RepairReport]
    final_ok: bool

    @property
    def total_traffic(self) -> int:
        return sum(self.state.served().values())

    def to_text(self) -> str:
        lines = [
            f"repairs={len(self.reports)}",
            f"total_traffic={self.total_traffic}",
            f"reported_traffic={sum(r.downloaded_symbols for r in self.reports)}",
            f"final_ok={str(self.final_ok).lower()}",
        ]
        lines += [f"served[{i}]={c}" for i, c in self.state.served().items()]
        return "\n".join(lines) + "\n"


def _normalise(step, n: int) -> int:
    group = (step,) if isinstance(step, (int, np.integer)) else tuple(step)
    if len(group) != 1:
        raise ScenarioInfeasible(
            f"step {group} fails {len(group)} nodes at once; repair needs all n-1 others alive")
    i = int(group[0])
    if not 1 <= i <= n:
        raise ScenarioInfeasible(f"node {i} outside 1..{n}")
    return i


def random_scenario(n: int, rounds: int, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    return [int(x) for x in rng.integers(1, n + 1, size=rounds)]


def sim_run(params: CodeParams, scenario=None, seed: int = 0) -> SimSummary:
    """Fail and immediately repair one node per scenario step.

    ``scenario`` is a sequence of node indices (1..n); ``None`` fails every
    node once in order. The stored data is a random codeword drawn from ``seed``.
    """
    if scenario is None:
        scenario = list(range(1, params.n + 1))
    steps = [_normalise(s, params.n) for s in scenario]
    rng = np.random.default_rng(seed)
    original = encode(params, params.spec.random_array(rng, params.k * params.ell))
    state = ClusterState.from_codeword(original)
    reports = []
    for i in steps:
        state.fail(i)
        reports.append(state.repair(i))
    final_ok = bool(np.array_equal(state.blocks(), original.blocks))
    log.info("simulated %d repairs, traffic %d", len(reports), sum(state.served().values()))
    return SimSummary(state, reports, final_ok)
