"""
Circuit IR: gate kinds, gates, circuits and the passes that work on them
before any hardware is involved.

Contains:
    - GateKind / Gate / Circuit
    - parse_circuit / format_circuit: the line-oriented text format
    - decompose_high_level: TOFFOLI and FREDKIN into 1Q + CNOT
    - dependency_schedule / dependency_layers: ordering by shared qubits
    - interaction_profile: 2Q pair counts and measured qubits (mapper input)
"""
from __future__ import annotations

import heapq
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class CircuitError(ValueError):
    """Malformed circuit text or an invalid gate/circuit."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GateKind(Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    CNOT = "cnot"
    CZ = "cz"
    XX = "xx"
    SWAP = "swap"
    TOFFOLI = "toffoli"
    FREDKIN = "fredkin"
    MEASURE = "measure"

    @property
    def arity(self) -> int:
        return _ARITY.get(self, 1)

    @property
    def has_angle(self) -> bool:
        return self in ANGLE_KINDS

    @property
    def is_1q(self) -> bool:
        return self.arity == 1 and self is not GateKind.MEASURE

    @property
    def is_2q(self) -> bool:
        return self.arity == 2


_ARITY = {
    GateKind.CNOT: 2, GateKind.CZ: 2, GateKind.XX: 2, GateKind.SWAP: 2,
    GateKind.TOFFOLI: 3, GateKind.FREDKIN: 3,
}
ANGLE_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.XX})
# rotations about Z only; implemented in software on every target
Z_KINDS = frozenset({GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.RZ})
HIGH_LEVEL_KINDS = frozenset({GateKind.TOFFOLI, GateKind.FREDKIN})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise CircuitError(f"{self.kind.value} takes {self.kind.arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate qubit in {self.kind.value} {list(self.qubits)}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.kind.value}")
        if self.kind.has_angle:
            if self.angle is None:
                raise CircuitError(f"{self.kind.value} requires an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise CircuitError(f"{self.kind.value} takes no angle")

    def remap(self, mapping: Sequence[int] | dict[int, int]) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)

    def __str__(self) -> str:
        parts = [self.kind.value]
        if self.angle is not None:
            parts.append(repr(self.angle))
        parts.extend(str(q) for q in self.qubits)
        return " ".join(parts)


def gate(kind: GateKind | str, *qubits: int, angle: float | None = None) -> Gate:
    """Shorthand constructor: ``gate("cnot", 0, 1)``, ``gate("rz", 2, angle=pi)``."""
    if isinstance(kind, str):
        kind = GateKind(kind)
    return Gate(kind, qubits, angle)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = "circuit"

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 0:
            raise CircuitError("qubit count must be non-negative")
        measured: set[int] = set()
        for g in self.gates:
            for q in g.qubits:
                if q >= self.num_qubits:
                    raise CircuitError(f"qubit {q} out of range for {self.num_qubits} qubits")
                if q in measured:
                    raise CircuitError(f"gate {g} acts on qubit {q} after its measurement")
            if g.kind is GateKind.MEASURE:
                measured.add(g.qubits[0])

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def measured_qubits(self) -> list[int]:
        return sorted({g.qubits[0] for g in self.gates if g.kind is GateKind.MEASURE})

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.num_qubits, tuple(gates), self.name)

    def count(self, *kinds: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)


# -- text format --------------------------------------------------------------

_PI_RE = re.compile(r"^(-)?(\d+(?:\.\d*)?)?\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_angle(token: str) -> float:
    """Decimal literal or a multiple of pi: ``pi``, ``-pi/4``, ``3pi/2``."""
    tok = token.strip().lower()
    m = _PI_RE.match(tok)
    if m:
        sign = -1.0 if m.group(1) else 1.0
        mult = float(m.group(2)) if m.group(2) else 1.0
        div = float(m.group(3)) if m.group(3) else 1.0
        if div == 0:
            raise ValueError(f"division by zero in angle {token!r}")
        return sign * mult * math.pi / div
    try:
        value = float(tok)
    except ValueError:
        raise ValueError(f"bad angle {token!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"bad angle {token!r}")
    return value


def _parse_index(token: str, lineno: int) -> int:
    if not re.fullmatch(r"\d+", token):
        raise CircuitError(f"bad qubit index {token!r}", lineno)
    return int(token)


def parse_circuit(text: str, name: str = "circuit") -> Circuit:
    """Parse the line-oriented circuit format.

    The first non-comment line must be ``qubits <n>``. Every other line is
    ``<gate> [angle] <q...>``; ``#`` starts a comment.
    """
    num_qubits: int | None = None
    gates: list[Gate] = []
    measured: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if num_qubits is None:
            if head != "qubits" or len(tokens) != 2:
                raise CircuitError("expected 'qubits <n>' declaration", lineno)
            num_qubits = _parse_index(tokens[1], lineno)
            continue
        if head == "qubits":
            raise CircuitError("duplicate qubits declaration", lineno)
        try:
            kind = GateKind(head)
        except ValueError:
            raise CircuitError(f"unknown gate {tokens[0]!r}", lineno) from None
        args = tokens[1:]
        angle = None
        if kind.has_angle:
            if not args:
                raise CircuitError(f"{head} requires an angle", lineno)
            try:
                angle = parse_angle(args[0])
            except ValueError as exc:
                raise CircuitError(str(exc), lineno) from None
            args = args[1:]
        if len(args) != kind.arity:
            raise CircuitError(f"{head} takes {kind.arity} qubit(s), got {len(args)}", lineno)
        qubits = tuple(_parse_index(a, lineno) for a in args)
        for q in qubits:
            if q >= num_qubits:
                raise CircuitError(f"qubit {q} out of range (circuit has {num_qubits})", lineno)
            if q in measured:
                raise CircuitError(f"qubit {q} used after measurement", lineno)
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"duplicate qubit in {head}", lineno)
        if kind is GateKind.MEASURE:
            measured.add(qubits[0])
        gates.append(Gate(kind, qubits, angle))
    if num_qubits is None:
        raise CircuitError("missing 'qubits <n>' declaration")
    return Circuit(num_qubits, tuple(gates), name)


def format_circuit(circuit: Circuit) -> str:
    lines = [f"# {circuit.name}", f"qubits {circuit.num_qubits}"]
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def load_circuit(path) -> Circuit:
    from pathlib import Path

    p = Path(path)
    return parse_circuit(p.read_text(), name=p.stem)


# -- high-level gate expansion ------------------------------------------------

def toffoli_network(a: int, b: int, c: int) -> list[Gate]:
    """Six-CNOT Toffoli with controls a, b and target c."""
    H, T, TDG, CX = GateKind.H, GateKind.T, GateKind.TDG, GateKind.CNOT
    return [
        Gate(H, (c,)),
        Gate(CX, (b, c)), Gate(TDG, (c,)),
        Gate(CX, (a, c)), Gate(T, (c,)),
        Gate(CX, (b, c)), Gate(TDG, (c,)),
        Gate(CX, (a, c)), Gate(T, (b,)), Gate(T, (c,)),
        Gate(H, (c,)),
        Gate(CX, (a, b)), Gate(T, (a,)), Gate(TDG, (b,)),
        Gate(CX, (a, b)),
    ]


def fredkin_network(c: int, a: int, b: int) -> list[Gate]:
    """Controlled-SWAP of a and b as CNOT(b,a) TOFFOLI(c,a,b) CNOT(b,a)."""
    cx = Gate(GateKind.CNOT, (b, a))
    return [cx, *toffoli_network(c, a, b), cx]


def decompose_high_level(circuit: Circuit) -> Circuit:
    out: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.TOFFOLI:
            out.extend(toffoli_network(*g.qubits))
        elif g.kind is GateKind.FREDKIN:
            out.extend(fredkin_network(*g.qubits))
        else:
            out.append(g)
    return circuit.with_gates(out)


# -- scheduling ----------------------------------------------------------------

def _dependency_edges(gates: Sequence[Gate]) -> list[list[int]]:
    """Successor lists; each gate depends on the previous gate on each of its qubits."""
    last: dict[int, int] = {}
    succ: list[list[int]] = [[] for _ in gates]
    for i, g in enumerate(gates):
        for q in g.qubits:
            if q in last and i not in succ[last[q]]:
                succ[last[q]].append(i)
            last[q] = i
    return succ


def dependency_schedule(circuit: Circuit | Sequence[Gate]) -> list[Gate]:
    """Topological order of the gate dependency DAG.

    Kahn's algorithm with ready gates released in input order, so the input
    order itself (always a valid witness) is what comes back.
    """
    gates = list(circuit.gates if isinstance(circuit, Circuit) else circuit)
    succ = _dependency_edges(gates)
    indeg = [0] * len(gates)
    for s in succ:
        for j in s:
            indeg[j] += 1
    ready = [i for i, d in enumerate(indeg) if d == 0]
    heapq.heapify(ready)
    order: list[Gate] = []
    while ready:
        i = heapq.heappop(ready)
        order.append(gates[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    return order


def dependency_layers(circuit: Circuit | Sequence[Gate]) -> list[int]:
    """ASAP layer of each gate; gates sharing a layer touch disjoint qubits."""
    gates = circuit.gates if isinstance(circuit, Circuit) else circuit
    depth: dict[int, int] = {}
    layers = []
    for g in gates:
        layer = max((depth.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            depth[q] = layer + 1
        layers.append(layer)
    return layers


# -- mapper input ----------------------------------------------------------------

@dataclass
class InteractionProfile:
    num_qubits: int
    # (control, target) -> count, direction preserved
    directed: Counter = field(default_factory=Counter)
    measured: frozenset[int] = frozenset()

    @property
    def pairs(self) -> dict[tuple[int, int], int]:
        """Counts per unordered pair, keyed (low, high)."""
        out: Counter = Counter()
        for (a, b), n in self.directed.items():
            out[(min(a, b), max(a, b))] += n
        return dict(out)

    def degree(self, q: int) -> int:
        return sum(1 for (a, b) in self.pairs if q in (a, b))

    @property
    def num_ops(self) -> int:
        return sum(self.directed.values()) + len(self.measured)


def interaction_profile(circuit: Circuit) -> InteractionProfile:
    directed: Counter = Counter()
    for g in circuit.gates:
        if g.kind in HIGH_LEVEL_KINDS:
            raise CircuitError("interaction_profile needs high-level gates decomposed first")
        if g.kind.is_2q:
            directed[(g.qubits[0], g.qubits[1])] += 1
    return InteractionProfile(circuit.num_qubits, directed, frozenset(circuit.measured_qubits))
