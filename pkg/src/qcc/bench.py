"""Benchmark circuit generators.

The small programs use standard textbook constructions; they are
representative of the benchmark families rather than copies of any
particular source program.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ir import Circuit, Gate, GateKind


class Family(Enum):
    BV = "bv"
    HS = "hs"
    QFT = "qft"
    TOFFOLI = "toffoli"
    FREDKIN = "fredkin"
    OR = "or"
    PERES = "peres"
    ADDER = "adder"
    SUPREMACY = "supremacy"


@dataclass(frozen=True)
class BenchmarkSpec:
    family: Family
    name: str
    num_qubits: int = 0
    secret: str = ""               # BV secret / HS shift / QFT encoded value (binary)
    rows: int = 0
    cols: int = 0
    depth: int = 0
    seed: int = 0

    @property
    def correct_output(self) -> str | None:
        """Noiseless answer over the measured qubits in ascending order; None if not deterministic."""
        f = self.family
        if f is Family.BV:
            return self.secret
        if f is Family.HS:
            return self.secret
        if f is Family.QFT:
            return self.secret[::-1]
        return _FIXED_OUTPUTS.get(f)


# measured over all qubits, ascending
_FIXED_OUTPUTS = {
    Family.TOFFOLI: "111",   # |11>|0> -> target flips
    Family.FREDKIN: "101",   # control 1 swaps |1>|0>
    Family.OR: "011",        # 0 OR 1 = 1
    Family.PERES: "101",     # a=1, b=1, t=0 -> t=1, b=a^b=0
    Family.ADDER: "1001",    # a=1, b=0, cin=1 -> sum 0, carry 1, b restored
}


class BenchmarkError(ValueError):
    pass


def _g(kind: str, *qs, angle=None) -> Gate:
    return Gate(GateKind(kind), qs, angle)


def bernstein_vazirani(n: int, secret: str | None = None) -> Circuit:
    """n-1 data qubits and an ancilla (qubit n-1); measures the data qubits."""
    if n < 2:
        raise BenchmarkError("BV needs at least 2 qubits")
    secret = "1" * (n - 1) if secret is None else secret
    if len(secret) != n - 1 or set(secret) - {"0", "1"}:
        raise BenchmarkError(f"secret must be {n - 1} binary digits")
    anc = n - 1
    gates = [_g("x", anc)]
    gates += [_g("h", q) for q in range(n)]
    gates += [_g("cnot", q, anc) for q, bit in enumerate(secret) if bit == "1"]
    gates += [_g("h", q) for q in range(n - 1)]
    gates += [_g("measure", q) for q in range(n - 1)]
    return Circuit(n, tuple(gates), f"bv{n}")


def hidden_shift(n: int, shift: str | None = None) -> Circuit:
    """Hidden shift for the bent function sum of x_{2k} x_{2k+1}: one CZ per qubit pair."""
    if n < 2 or n % 2:
        raise BenchmarkError("hidden shift needs an even number of qubits >= 2")
    shift = ("10" * n)[:n] if shift is None else shift
    if len(shift) != n or set(shift) - {"0", "1"}:
        raise BenchmarkError(f"shift must be {n} binary digits")
    pairs = [(2 * k, 2 * k + 1) for k in range(n // 2)]
    xs = [_g("x", q) for q in range(n) if shift[q] == "1"]
    hs = [_g("h", q) for q in range(n)]
    cz = [_g("cz", a, b) for a, b in pairs]
    gates = [*hs, *xs, *cz, *xs, *hs, *cz, *hs]
    gates += [_g("measure", q) for q in range(n)]
    return Circuit(n, tuple(gates), f"hs{n}")


def controlled_phase(c: int, t: int, lam: float) -> list[Gate]:
    """diag(1, 1, 1, e^{i lam}) up to global phase, over CNOT and RZ."""
    return [_g("rz", c, angle=lam / 2), _g("cnot", c, t), _g("rz", t, angle=-lam / 2),
            _g("cnot", c, t), _g("rz", t, angle=lam / 2)]


def qft(n: int = 4, value: str | None = None) -> Circuit:
    """QFT (no final swaps) applied to the product state that it maps to |value>.

    The input is prepared with H and RZ per qubit; the register then reads out
    ``value`` in reversed bit order.
    """
    if n < 1:
        raise BenchmarkError("QFT needs at least 1 qubit")
    value = ("1011" * n)[:n] if value is None else value
    if len(value) != n or set(value) - {"0", "1"}:
        raise BenchmarkError(f"value must be {n} binary digits")
    y = int(value, 2)
    gates: list[Gate] = []
    for j in range(n):
        gates.append(_g("h", j))
        phase = math.remainder(-2.0 * math.pi * y / 2 ** (j + 1), 2.0 * math.pi)
        if abs(phase) > 1e-15:
            gates.append(_g("rz", j, angle=phase))
    for j in range(n):
        gates.append(_g("h", j))
        for k in range(j + 1, n):
            gates.extend(controlled_phase(k, j, math.pi / 2 ** (k - j)))
    gates += [_g("measure", q) for q in range(n)]
    return Circuit(n, tuple(gates), f"qft{n}")


def toffoli_bench() -> Circuit:
    gates = [_g("x", 0), _g("x", 1), _g("toffoli", 0, 1, 2)]
    return Circuit(3, (*gates, *(_g("measure", q) for q in range(3))), "toffoli")


def fredkin_bench() -> Circuit:
    gates = [_g("x", 0), _g("x", 1), _g("fredkin", 0, 1, 2)]
    return Circuit(3, (*gates, *(_g("measure", q) for q in range(3))), "fredkin")


def or_bench() -> Circuit:
    """t = a OR b as NOT(NOT a AND NOT b), inputs a=0, b=1."""
    gates = [_g("x", 1),
             _g("x", 0), _g("x", 1), _g("x", 2), _g("toffoli", 0, 1, 2), _g("x", 0), _g("x", 1)]
    return Circuit(3, (*gates, *(_g("measure", q) for q in range(3))), "or")


def peres_bench() -> Circuit:
    gates = [_g("x", 0), _g("x", 1), _g("toffoli", 0, 1, 2), _g("cnot", 0, 1)]
    return Circuit(3, (*gates, *(_g("measure", q) for q in range(3))), "peres")


def adder_bench() -> Circuit:
    """1-bit full adder on (a, b, cin, cout): cin ends as the sum, cout as the carry."""
    a, b, cin, cout = range(4)
    gates = [_g("x", a), _g("x", cin),
             _g("toffoli", a, b, cout), _g("cnot", a, b),
             _g("toffoli", b, cin, cout), _g("cnot", b, cin),
             _g("cnot", a, b)]
    return Circuit(4, (*gates, *(_g("measure", q) for q in range(4))), "adder")


def supremacy_patterns(rows: int, cols: int) -> list[list[tuple[int, int]]]:
    """Four CZ patterns that together cover every grid edge once."""
    def q(r, c):
        return r * cols + c
    pats: list[list[tuple[int, int]]] = [[], [], [], []]
    for r in range(rows):
        for c in range(cols - 1):
            pats[c % 2].append((q(r, c), q(r, c + 1)))
    for r in range(rows - 1):
        for c in range(cols):
            pats[2 + r % 2].append((q(r, c), q(r + 1, c)))
    return pats


def supremacy_cz_count(rows: int, cols: int, depth: int) -> int:
    pats = supremacy_patterns(rows, cols)
    return sum(len(pats[layer % 4]) for layer in range(depth))


def supremacy(rows: int, cols: int, depth: int, seed: int = 0) -> Circuit:
    """Layered random circuit: H layer, then per layer random 1Q gates from
    {sqrt X, sqrt Y, T} and CZs on the next of four cycled grid-edge patterns."""
    if rows < 1 or cols < 1 or depth < 0:
        raise BenchmarkError("supremacy needs positive grid size and non-negative depth")
    rng = np.random.default_rng(seed)
    n = rows * cols
    pats = supremacy_patterns(rows, cols)
    gates: list[Gate] = [_g("h", q) for q in range(n)]
    for layer in range(depth):
        for q in range(n):
            choice = int(rng.integers(3))
            if choice == 0:
                gates.append(_g("rx", q, angle=math.pi / 2))
            elif choice == 1:
                gates.append(_g("ry", q, angle=math.pi / 2))
            else:
                gates.append(_g("t", q))
        gates.extend(_g("cz", a, b) for a, b in pats[layer % 4])
    gates += [_g("measure", q) for q in range(n)]
    return Circuit(n, tuple(gates), f"supremacy{rows}x{cols}d{depth}")


def generate(spec: BenchmarkSpec) -> Circuit:
    f = spec.family
    if f is Family.BV:
        c = bernstein_vazirani(spec.num_qubits, spec.secret or None)
    elif f is Family.HS:
        c = hidden_shift(spec.num_qubits, spec.secret or None)
    elif f is Family.QFT:
        c = qft(spec.num_qubits or 4, spec.secret or None)
    elif f is Family.SUPREMACY:
        c = supremacy(spec.rows, spec.cols, spec.depth, spec.seed)
    else:
        c = {Family.TOFFOLI: toffoli_bench, Family.FREDKIN: fredkin_bench, Family.OR: or_bench,
             Family.PERES: peres_bench, Family.ADDER: adder_bench}[f]()
    return Circuit(c.num_qubits, c.gates, spec.name)


def _spec(family: Family, name: str, n: int = 0, secret: str = "") -> BenchmarkSpec:
    return BenchmarkSpec(family, name, num_qubits=n, secret=secret)


def list_benchmarks() -> list[BenchmarkSpec]:
    return [
        _spec(Family.BV, "bv4", 4, "111"),
        _spec(Family.BV, "bv6", 6, "11111"),
        _spec(Family.BV, "bv8", 8, "1111111"),
        _spec(Family.HS, "hs2", 2, "10"),
        _spec(Family.HS, "hs4", 4, "1010"),
        _spec(Family.HS, "hs6", 6, "101010"),
        _spec(Family.QFT, "qft", 4, "1011"),
        _spec(Family.TOFFOLI, "toffoli", 3),
        _spec(Family.FREDKIN, "fredkin", 3),
        _spec(Family.OR, "or", 3),
        _spec(Family.PERES, "peres", 3),
        _spec(Family.ADDER, "adder", 4),
    ]


def supremacy_spec(rows: int, cols: int, depth: int, seed: int = 0) -> BenchmarkSpec:
    return BenchmarkSpec(Family.SUPREMACY, f"supremacy{rows}x{cols}d{depth}", num_qubits=rows * cols,
                         rows=rows, cols=cols, depth=depth, seed=seed)


def benchmark(name: str) -> BenchmarkSpec:
    for spec in list_benchmarks():
        if spec.name == name:
            return spec
    raise BenchmarkError(f"unknown benchmark {name!r}; known: {[s.name for s in list_benchmarks()]}")
