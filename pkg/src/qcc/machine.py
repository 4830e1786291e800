"""Hardware machine descriptions: topology, calibration data and gate set.

A machine file is a JSON object::

    {
      "name": "ibmq5",
      "num_qubits": 5,
      "gate_set": "ibm",            # "ibm" | "rigetti" | "iontrap"
      "edges": [{"a": 1, "b": 0, "err2q": 0.03, "directed": true}, ...],
      "err1q": [0.002, ...],         # one per qubit
      "erro":  [0.04, ...]           # readout error, one per qubit
    }

A directed edge ``a -> b`` means the native CNOT has control ``a`` and
target ``b``. Unknown keys are rejected.
"""
from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)


class MachineError(ValueError):
    """Invalid machine description. ``field`` names the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class GateSet(Enum):
    IBM = "ibm"
    RIGETTI = "rigetti"
    IONTRAP = "iontrap"


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    err2q: float
    directed: bool = False

    @property
    def reliability(self) -> float:
        return 1.0 - self.err2q

    @property
    def key(self) -> tuple[int, int]:
        return (min(self.a, self.b), max(self.a, self.b))


@dataclass(frozen=True)
class Machine:
    name: str
    num_qubits: int
    edges: tuple[Edge, ...]
    err1q: tuple[float, ...]
    erro: tuple[float, ...]
    gate_set: GateSet
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "err1q", tuple(float(e) for e in self.err1q))
        object.__setattr__(self, "erro", tuple(float(e) for e in self.erro))
        _validate(self)
        object.__setattr__(self, "_index", {e.key: e for e in self.edges})

    def edge(self, a: int, b: int) -> Edge | None:
        return self._index.get((min(a, b), max(a, b)))

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._index

    def native_direction(self, a: int, b: int) -> bool:
        """True when a 2Q gate with control a, target b needs no reorientation."""
        e = self.edge(a, b)
        if e is None:
            return False
        return not e.directed or (e.a == a and e.b == b)

    def neighbors(self, q: int) -> list[int]:
        out = []
        for e in self.edges:
            if e.a == q:
                out.append(e.b)
            elif e.b == q:
                out.append(e.a)
        return sorted(out)

    @property
    def is_directed(self) -> bool:
        return any(e.directed for e in self.edges)

    def mean_err2q(self) -> float:
        return float(np.mean([e.err2q for e in self.edges])) if self.edges else 0.0

    def with_errors(self, err2q: Sequence[float] | None = None, err1q: Sequence[float] | None = None,
                    erro: Sequence[float] | None = None, name: str | None = None) -> Machine:
        """Same topology and gate set with replaced calibration data."""
        edges = self.edges
        if err2q is not None:
            edges = tuple(Edge(e.a, e.b, float(x), e.directed) for e, x in zip(self.edges, err2q, strict=True))
        return Machine(name or self.name, self.num_qubits, edges,
                       self.err1q if err1q is None else tuple(err1q),
                       self.erro if erro is None else tuple(erro), self.gate_set)

    def randomized(self, rng: np.random.Generator, err2q: tuple[float, float] = (0.01, 0.15),
                   erro: tuple[float, float] = (0.01, 0.1), name: str | None = None) -> Machine:
        """Fresh uniform draws for every 2Q and readout error; 1Q errors kept."""
        return self.with_errors(rng.uniform(*err2q, size=len(self.edges)), None,
                                rng.uniform(*erro, size=self.num_qubits), name=name)

    def noiseless(self) -> Machine:
        return self.with_errors([0.0] * len(self.edges), [0.0] * self.num_qubits,
                                [0.0] * self.num_qubits, name=f"{self.name}-noiseless")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "num_qubits": self.num_qubits,
            "gate_set": self.gate_set.value,
            "edges": [{"a": e.a, "b": e.b, "err2q": e.err2q, "directed": e.directed} for e in self.edges],
            "err1q": list(self.err1q),
            "erro": list(self.erro),
        }


def _check_rate(value, where: str) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not (0.0 <= value < 1.0):
        raise MachineError(f"error rate must be in [0, 1), got {value!r}", where)


def _validate(m: Machine) -> None:
    n = m.num_qubits
    if n < 1:
        raise MachineError("must be at least 1", "num_qubits")
    if len(m.err1q) != n:
        raise MachineError(f"expected {n} entries, got {len(m.err1q)}", "err1q")
    if len(m.erro) != n:
        raise MachineError(f"expected {n} entries, got {len(m.erro)}", "erro")
    for i, e in enumerate(m.err1q):
        _check_rate(e, f"err1q[{i}]")
    for i, e in enumerate(m.erro):
        _check_rate(e, f"erro[{i}]")
    seen = set()
    for i, e in enumerate(m.edges):
        where = f"edges[{i}]"
        if not (0 <= e.a < n and 0 <= e.b < n):
            raise MachineError(f"qubit out of range ({e.a}, {e.b})", where)
        if e.a == e.b:
            raise MachineError(f"self-loop on qubit {e.a}", where)
        _check_rate(e.err2q, f"{where}.err2q")
        if e.key in seen:
            raise MachineError(f"duplicate edge {e.key}", where)
        seen.add(e.key)
    # connectivity
    adj: dict[int, list[int]] = {q: [] for q in range(n)}
    for e in m.edges:
        adj[e.a].append(e.b)
        adj[e.b].append(e.a)
    reached = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in reached:
                reached.add(v)
                queue.append(v)
    if len(reached) != n:
        missing = sorted(set(range(n)) - reached)
        raise MachineError(f"topology is disconnected; unreachable qubits {missing}", "edges")


_KEYS = {"name", "num_qubits", "gate_set", "edges", "err1q", "erro"}
_EDGE_KEYS = {"a", "b", "err2q", "directed"}


def machine_from_dict(doc: dict) -> Machine:
    if not isinstance(doc, dict):
        raise MachineError("machine description must be an object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise MachineError(f"unknown key(s) {sorted(unknown)}")
    missing = _KEYS - set(doc)
    if missing:
        raise MachineError(f"missing key(s) {sorted(missing)}")
    try:
        gate_set = GateSet(doc["gate_set"])
    except ValueError:
        raise MachineError(f"unknown gate set {doc['gate_set']!r}", "gate_set") from None
    n = doc["num_qubits"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise MachineError("must be an integer", "num_qubits")
    edges = []
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, dict):
            raise MachineError("edge must be an object", f"edges[{i}]")
        bad = set(e) - _EDGE_KEYS
        if bad:
            raise MachineError(f"unknown key(s) {sorted(bad)}", f"edges[{i}]")
        if not {"a", "b", "err2q"} <= set(e):
            raise MachineError("edge needs a, b, err2q", f"edges[{i}]")
        _check_rate(e["err2q"], f"edges[{i}].err2q")
        directed = bool(e.get("directed", False))
        if directed and gate_set is not GateSet.IBM:
            log.warning("edge %d is directed but gate set %s has symmetric 2Q gates", i, gate_set.value)
        edges.append(Edge(int(e["a"]), int(e["b"]), float(e["err2q"]), directed))
    for key in ("err1q", "erro"):
        if not isinstance(doc[key], list):
            raise MachineError("must be an array", key)
        for i, v in enumerate(doc[key]):
            _check_rate(v, f"{key}[{i}]")
    return Machine(str(doc["name"]), n, tuple(edges), tuple(doc["err1q"]), tuple(doc["erro"]), gate_set)


def load_machine(path) -> Machine:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MachineError(f"parse error: {exc}") from None
    return machine_from_dict(doc)


def write_machine(machine: Machine, path) -> None:
    Path(path).write_text(json.dumps(machine.to_dict(), indent=2) + "\n")


# -- presets (synthetic calibrations at representative magnitudes) --------------

def _line4() -> Machine:
    edges = [Edge(0, 1, 0.045), Edge(1, 2, 0.08), Edge(2, 3, 0.035)]
    return Machine("line4", 4, edges, [0.002, 0.003, 0.002, 0.004], [0.05, 0.04, 0.045, 0.03], GateSet.RIGETTI)


def _ibmq5() -> Machine:
    # bowtie; arrows give the native CNOT orientation
    edges = [
        Edge(1, 0, 0.025, True), Edge(2, 0, 0.03, True), Edge(2, 1, 0.04, True),
        Edge(3, 2, 0.06, True), Edge(2, 4, 0.035, True), Edge(3, 4, 0.05, True),
    ]
    return Machine("ibmq5", 5, edges, [0.001, 0.002, 0.0015, 0.003, 0.002],
                   [0.035, 0.04, 0.03, 0.05, 0.045], GateSet.IBM)


def grid_machine(rows: int, cols: int, name: str | None = None, gate_set: GateSet = GateSet.IBM,
                 seed: int | None = None, err2q: tuple[float, float] = (0.02, 0.08),
                 erro: tuple[float, float] = (0.03, 0.05), err1q: float = 0.002) -> Machine:
    """Row-major rows x cols grid. Calibrations drawn from ``seed`` (uniform in the given ranges)."""
    rng = np.random.default_rng(0 if seed is None else seed)
    directed = gate_set is GateSet.IBM
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                a, b = (q, q + 1) if (r + c) % 2 == 0 else (q + 1, q)
                edges.append((a, b))
            if r + 1 < rows:
                a, b = (q, q + cols) if c % 2 == 0 else (q + cols, q)
                edges.append((a, b))
    errs = rng.uniform(*err2q, size=len(edges))
    n = rows * cols
    ro = rng.uniform(*erro, size=n)
    return Machine(name or f"grid{rows}x{cols}", n,
                   tuple(Edge(a, b, round(float(e), 4), directed) for (a, b), e in zip(edges, errs)),
                   tuple([err1q] * n), tuple(round(float(x), 4) for x in ro), gate_set)


def _ion5() -> Machine:
    errs = [0.01, 0.012, 0.015, 0.02, 0.011, 0.013, 0.018, 0.01, 0.016, 0.014]
    pairs = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    edges = [Edge(a, b, e) for (a, b), e in zip(pairs, errs)]
    return Machine("ion5", 5, edges, [0.002] * 5, [0.006, 0.007, 0.006, 0.008, 0.007], GateSet.IONTRAP)


def example8() -> Machine:
    """8-qubit device whose 2Q reliabilities reproduce the textbook
    reliability-matrix example: r(1,6) = 0.9**3 * 0.8 via a swap 1<->5."""
    rel = {(0, 1): 0.95, (1, 2): 0.7, (1, 4): 0.9, (1, 5): 0.9, (3, 4): 0.8,
           (5, 6): 0.8, (2, 3): 0.6, (6, 7): 0.85, (0, 7): 0.75}
    edges = [Edge(a, b, round(1.0 - f, 12)) for (a, b), f in rel.items()]
    return Machine("example8", 8, edges, [0.001] * 8, [0.03] * 8, GateSet.RIGETTI)


def builtin_machines() -> dict[str, Machine]:
    return {
        "line4": _line4(),
        "ibmq5": _ibmq5(),
        "grid14": grid_machine(2, 7, name="grid14", seed=14),
        "ion5": _ion5(),
        "example8": example8(),
    }


def resolve_machine(spec: str) -> Machine:
    """A machine file path, or the name of a builtin preset."""
    p = Path(spec)
    if p.is_file():
        return load_machine(p)
    presets = builtin_machines()
    if spec in presets:
        return presets[spec]
    raise MachineError(f"no machine file or preset named {spec!r}")
