"""Shared fixtures and independent oracles for the test suite."""
from __future__ import annotations

import math
import sys

import numpy as np
import pytest

from qcc.machine import Edge, GateSet, Machine, builtin_machines


def random_machine(rng: np.random.Generator, n: int, gate_set: GateSet | None = None,
                   extra_edge_prob: float = 0.3, name: str = "rand") -> Machine:
    """Connected random device: a random spanning tree plus extra edges."""
    if gate_set is None:
        gate_set = list(GateSet)[int(rng.integers(len(GateSet)))]
    order = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        a, b = int(order[k]), int(order[rng.integers(k)])
        pairs.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < extra_edge_prob:
                pairs.add((a, b))
    edges = []
    for a, b in sorted(pairs):
        directed = gate_set is GateSet.IBM and bool(rng.integers(2))
        if directed and rng.integers(2):
            a, b = b, a
        edges.append(Edge(a, b, float(rng.uniform(0.01, 0.2)), directed))
    return Machine(name, n, tuple(edges), tuple(rng.uniform(0.0, 0.01, n)),
                   tuple(rng.uniform(0.01, 0.1, n)), gate_set)


def brute_force_r2q(machine: Machine) -> np.ndarray:
    """Best reliability over every simple swap path, by explicit enumeration."""
    n = machine.num_qubits
    ibm = machine.gate_set is GateSet.IBM

    def dir_factor(a, b):
        e1 = (machine.err1q[a] + machine.err1q[b]) / 2
        return (1 - e1) ** 4

    def hop(u, v):
        e = machine.edge(u, v)
        r = e.reliability ** 3
        return r * dir_factor(u, v) if ibm and e.directed else r

    def gate(k, j):
        e = machine.edge(k, j)
        r = e.reliability
        if ibm and e.directed and not machine.native_direction(k, j):
            r *= dir_factor(k, j)
        return r

    def walks(u, rel, seen):
        """Every simple path from u that avoids j, as (end node, product of hops)."""
        yield u, rel
        for v in machine.neighbors(u):
            if v not in seen:
                yield from walks(v, rel * hop(u, v), seen | {v})

    out = np.full((n, n), np.nan)
    for j in range(n):
        for i in range(n):
            if i != j:
                out[i, j] = max(rel * gate(u, j) for u, rel in walks(i, 1.0, frozenset({i, j}))
                                if machine.adjacent(u, j))
    return out


@pytest.fixture(scope="session")
def presets() -> dict[str, Machine]:
    return builtin_machines()


def close(a: float, b: float, tol: float = 1e-12) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance verdicts, one line per criterion, after the run."""
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])
