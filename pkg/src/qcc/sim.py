"""Dense state-vector simulation for verification and noisy success-rate runs.

Qubit 0 is the most significant bit of a basis index, so ``CNOT(0, 1)`` has
the textbook 4x4 matrix.

Noisy runs use numpy's PCG64 generator. Shots are processed in fixed blocks
of ``SHOT_BLOCK``; block ``k`` draws from ``SeedSequence(seed).spawn(...)[k]``,
so a histogram depends only on (program, machine, shots, seed).
"""
from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .ir import Gate, GateKind

MAX_QUBITS = 12
SHOT_BLOCK = 1024

_S2 = 1.0 / math.sqrt(2.0)
_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_FIXED = {
    GateKind.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    GateKind.X: _X,
    GateKind.Y: _Y,
    GateKind.Z: _Z,
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.T: np.diag([1, np.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
}


def _rot(pauli: np.ndarray, theta: float) -> np.ndarray:
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * pauli


@lru_cache(maxsize=None)
def _permutation_matrix(kind: GateKind) -> np.ndarray:
    n = kind.arity
    dim = 2 ** n
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = [(i >> (n - 1 - k)) & 1 for k in range(n)]
        if kind is GateKind.CNOT and bits[0]:
            bits[1] ^= 1
        elif kind is GateKind.SWAP:
            bits[0], bits[1] = bits[1], bits[0]
        elif kind is GateKind.TOFFOLI and bits[0] and bits[1]:
            bits[2] ^= 1
        elif kind is GateKind.FREDKIN and bits[0]:
            bits[1], bits[2] = bits[2], bits[1]
        j = sum(b << (n - 1 - k) for k, b in enumerate(bits))
        m[j, i] = 1
    return m


def gate_matrix(g: Gate) -> np.ndarray:
    k = g.kind
    if k in _FIXED:
        return _FIXED[k]
    if k is GateKind.RX:
        return _rot(_X, g.angle)
    if k is GateKind.RY:
        return _rot(_Y, g.angle)
    if k is GateKind.RZ:
        return _rot(_Z, g.angle)
    if k is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if k is GateKind.XX:
        xx = np.kron(_X, _X)
        return math.cos(g.angle) * np.eye(4) - 1j * math.sin(g.angle) * xx
    if k in (GateKind.CNOT, GateKind.SWAP, GateKind.TOFFOLI, GateKind.FREDKIN):
        return _permutation_matrix(k)
    raise ValueError(f"no matrix for {k.value}")


def apply_gate(state: np.ndarray, mat: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Apply ``mat`` to ``qubits`` of ``state``, shaped (batch, 2, ..., 2) with n qubit axes."""
    k = len(qubits)
    axes = [1 + q for q in qubits]
    op = mat.reshape((2,) * (2 * k))
    # contract op's input indices with the state's qubit axes
    out = np.tensordot(state, op, axes=(axes, list(range(k, 2 * k))))
    # tensordot appends op's output axes at the end; move them back into place
    return np.moveaxis(out, list(range(n + 1 - k, n + 1)), axes)


def unitary_of(gates: Iterable[Gate], n: int) -> np.ndarray:
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the simulator limit of {MAX_QUBITS}")
    dim = 2 ** n
    # batch axis indexes the input basis state; the result is U^T, transposed at the end
    state = np.eye(dim, dtype=complex).reshape((dim,) + (2,) * n)
    for g in gates:
        if g.kind is GateKind.MEASURE:
            raise ValueError("strip MEASURE gates before building a unitary")
        state = apply_gate(state, gate_matrix(g), g.qubits, n)
    return state.reshape(dim, dim).T


def equivalent_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    return phase_distance(u, v) < tol


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over phi of ||u - e^{i phi} v||_F."""
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch {u.shape} vs {v.shape}")
    overlap = np.vdot(v, u)  # tr(v^dagger u)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.linalg.norm(u - phase * v))


def permute_qubits(u: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Relabel qubits: qubit i of ``u`` becomes qubit ``perm[i]`` of the result."""
    n = len(perm)
    dim = 2 ** n
    t = u.reshape((2,) * (2 * n))
    out_axes = [0] * n
    for i, p in enumerate(perm):
        out_axes[p] = i
    order = out_axes + [n + a for a in out_axes]
    return t.transpose(order).reshape(dim, dim)


# -- noisy execution -----------------------------------------------------------

def success_rate(histogram: dict[str, int], correct: str) -> float:
    total = sum(histogram.values())
    return histogram.get(correct, 0) / total if total else 0.0


def _pauli_flip(state: np.ndarray, rows: np.ndarray, pauli: int, axis: int) -> None:
    """Apply X (1), Y (2) or Z (3) on ``axis`` to the selected rows, ignoring global phase."""
    if pauli in (1, 2):
        state[rows] = np.flip(state[rows], axis=axis)
    if pauli in (2, 3):
        # after the flip, Y ~ X Z: the component now at index 0 came from |1>
        idx = [slice(None)] * state.ndim
        idx[0] = rows
        idx[axis] = 0 if pauli == 2 else 1
        state[tuple(idx)] *= -1


def run_noisy(cp, machine, shots: int = 1024, seed: int = 0, noise: bool = True) -> dict[str, int]:
    """Histogram of measured bitstrings for a compiled program.

    After each gate, with probability equal to its error rate a uniformly
    random non-identity Pauli hits its qubits. Z rotations are noiseless.
    Each readout bit flips with the qubit's readout error. Bitstrings list
    the measured program qubits in ascending order.
    """
    from .codegen import gate_error

    active = sorted({q for g in cp.instructions for q in g.qubits})
    n = len(active)
    if n > MAX_QUBITS:
        raise ValueError(f"{n} active qubits exceeds the simulator limit of {MAX_QUBITS}")
    pos = {h: i for i, h in enumerate(active)}
    program = [(g, [pos[q] for q in g.qubits], gate_error(g, machine) if noise else 0.0)
               for g in cp.instructions]
    mats = [None if g.kind is GateKind.MEASURE else gate_matrix(g) for g, _, _ in program]
    order = sorted(range(len(cp.measured)), key=lambda k: cp.measured[k])
    nblocks = max(1, math.ceil(shots / SHOT_BLOCK))
    seeds = np.random.SeedSequence(seed).spawn(nblocks)
    hist: Counter = Counter()
    for b in range(nblocks):
        size = min(SHOT_BLOCK, shots - b * SHOT_BLOCK)
        if size <= 0:
            break
        rng = np.random.default_rng(seeds[b])
        state = np.zeros((size,) + (2,) * n, dtype=complex)
        state[(slice(None),) + (0,) * n] = 1.0
        bits = np.zeros((size, len(cp.measured)), dtype=np.int8)
        mcount = 0
        for (g, qs, err), mat in zip(program, mats):
            if g.kind is GateKind.MEASURE:
                axis = 1 + qs[0]
                one = np.take(state, 1, axis=axis)
                p1 = np.sum(np.abs(one.reshape(size, -1)) ** 2, axis=1)
                outcome = rng.random(size) < p1
                idx = [slice(None)] * state.ndim
                for value in (0, 1):
                    rows = outcome != bool(value)   # shots whose outcome is not `value`
                    idx[axis] = value
                    sub = state[tuple(idx)]
                    sub[rows] = 0
                    state[tuple(idx)] = sub
                norms = np.sqrt(np.sum(np.abs(state.reshape(size, -1)) ** 2, axis=1))
                state /= norms.reshape((size,) + (1,) * n)
                flips = rng.random(size) < err
                bits[:, mcount] = outcome ^ flips
                mcount += 1
                continue
            state = apply_gate(state, mat, qs, n)
            if err > 0.0:
                hit = np.flatnonzero(rng.random(size) < err)
                if hit.size:
                    k = len(qs)
                    # uniform over the 4^k - 1 non-identity Paulis
                    labels = rng.integers(1, 4 ** k, size=hit.size)
                    for slot, qa in enumerate(qs):
                        digit = (labels >> (2 * slot)) & 3
                        for p in (1, 2, 3):
                            rows = hit[digit == p]
                            if rows.size:
                                _pauli_flip(state, rows, p, 1 + qa)
        for row in bits[:, order]:
            hist["".join("1" if x else "0" for x in row)] += 1
    return dict(hist)


def qubit_permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Unitary that moves the state of qubit i onto qubit ``perm[i]``."""
    n = len(perm)
    dim = 2 ** n
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = 0
        for k in range(n):
            if (i >> (n - 1 - k)) & 1:
                j |= 1 << (n - 1 - perm[k])
        m[j, i] = 1
    return m
