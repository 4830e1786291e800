"""End-to-end 2Q reliability between every ordered pair of hardware qubits.

Entry (i, j) is the best achievable reliability of a 2Q gate with control
state at i and target at j: swap the control along a path i .. t' where t'
neighbours j, then run the gate t' -> j. Each swap hop costs three native 2Q
gates. Work is done in the log domain (edge weight -3 log f per hop).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .machine import GateSet, Machine


class ReliabilityMode(Enum):
    NOISE_AWARE = "noise_aware"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class ReliabilityMatrix:
    r2q: np.ndarray                      # (n, n); diagonal is nan
    paths: dict                          # (i, j) -> tuple path i .. t'
    rro: np.ndarray                      # (n,)

    @property
    def num_qubits(self) -> int:
        return self.r2q.shape[0]

    def __call__(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError("reliability of a 2Q gate on a single qubit is undefined")
        return float(self.r2q[i, j])

    def to_csv(self) -> str:
        n = self.num_qubits
        lines = ["control," + ",".join(str(j) for j in range(n))]
        for i in range(n):
            cells = ["" if i == j else f"{self.r2q[i, j]:.12g}" for j in range(n)]
            lines.append(f"{i}," + ",".join(cells))
        return "\n".join(lines) + "\n"


def direction_factor(machine: Machine, a: int, b: int) -> float:
    """Reliability of the four H gates that reverse a directed CNOT on (a, b)."""
    e1 = 0.5 * (machine.err1q[a] + machine.err1q[b])
    return (1.0 - e1) ** 4


def _uniformize(machine: Machine) -> Machine:
    n = machine.num_qubits
    mean2 = machine.mean_err2q()
    return machine.with_errors(
        [mean2] * len(machine.edges),
        [float(np.mean(machine.err1q))] * n,
        [float(np.mean(machine.erro))] * n,
    )


def _weights(machine: Machine, direction_correction: bool):
    """Per-edge log-costs: (swap hop cost, cost of gate u->v) keyed by ordered pair."""
    correct = direction_correction and machine.gate_set is GateSet.IBM
    hop: dict[tuple[int, int], float] = {}
    gate_cost: dict[tuple[int, int], float] = {}
    for e in machine.edges:
        f = e.reliability
        logf = math.log(f) if f > 0 else -math.inf
        corr = -math.log(direction_factor(machine, e.a, e.b)) if (correct and e.directed) else 0.0
        # a swap is oriented so that exactly one of its three CNOTs runs reversed
        h = -3.0 * logf + corr
        hop[(e.a, e.b)] = hop[(e.b, e.a)] = h
        gate_cost[(e.a, e.b)] = -logf
        gate_cost[(e.b, e.a)] = -logf + (corr if e.directed else 0.0)
    return hop, gate_cost


def compute_reliability_matrix(machine: Machine, mode: ReliabilityMode | str = ReliabilityMode.NOISE_AWARE,
                               direction_correction: bool = True) -> ReliabilityMatrix:
    mode = ReliabilityMode(mode)
    if mode is ReliabilityMode.UNIFORM:
        machine = _uniformize(machine)
    n = machine.num_qubits
    hop, gate_cost = _weights(machine, direction_correction)
    adj = {q: machine.neighbors(q) for q in range(n)}
    r2q = np.full((n, n), np.nan)
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for j in range(n):
        # multi-source Dijkstra towards target j over the graph without j;
        # labels are (cost, forward path from node to t'), lexicographic ties
        best: dict[int, tuple[float, tuple[int, ...]]] = {}
        heap = [(gate_cost[(k, j)], (k,)) for k in adj[j]]
        heapq.heapify(heap)
        while heap:
            cost, path = heapq.heappop(heap)
            u = path[0]
            if u in best:
                continue
            best[u] = (cost, path)
            for v in adj[u]:
                if v != j and v not in best:
                    heapq.heappush(heap, (cost + hop[(v, u)], (v,) + path))
        for i in range(n):
            if i == j:
                continue
            if i not in best:
                raise ValueError(f"qubit {i} cannot reach qubit {j}; machine is disconnected")
            cost, path = best[i]
            r2q[i, j] = math.exp(-cost)
            paths[(i, j)] = path
    rro = np.array([1.0 - e for e in machine.erro])
    return ReliabilityMatrix(r2q, paths, rro)


def best_swap_path(rm: ReliabilityMatrix, i: int, j: int) -> tuple[tuple[int, ...], int]:
    """Stored most-reliable route: swap path from i, and the neighbour t' of j it ends at."""
    if i == j:
        raise ValueError("control and target must differ")
    path = rm.paths[(i, j)]
    return path, path[-1]
