"""Unit quaternions as single-qubit rotations.

``Quaternion(w, x, y, z)`` is the SU(2) element ``w I - i (x X + y Y + z Z)``,
i.e. a rotation by ``2 acos(w)`` about ``(x, y, z)``. The product ``a * b``
corresponds to the matrix product ``A @ B`` (apply b first).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ir import Gate, GateKind

_SQ = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def identity(cls) -> Quaternion:
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> Quaternion:
        ax = np.asarray(axis, dtype=float)
        ax = ax / np.linalg.norm(ax)
        s = math.sin(angle / 2.0)
        return cls(math.cos(angle / 2.0), s * ax[0], s * ax[1], s * ax[2])

    @classmethod
    def from_gate(cls, g: Gate) -> Quaternion:
        try:
            axis, angle = _GATE_ROTATIONS[g.kind]
        except KeyError:
            if g.kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
                axis = {GateKind.RX: (1, 0, 0), GateKind.RY: (0, 1, 0), GateKind.RZ: (0, 0, 1)}[g.kind]
                return cls.from_axis_angle(axis, g.angle)
            raise ValueError(f"{g.kind.value} is not a single-qubit rotation") from None
        return cls.from_axis_angle(axis, angle)

    def __mul__(self, o: Quaternion) -> Quaternion:
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = o.w, o.x, o.y, o.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ).normalized()

    def conjugate(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def normalized(self) -> Quaternion:
        n = self.norm()
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def rotation_angle(self) -> float:
        """Rotation angle in [0, pi]; q and -q are the same rotation."""
        return 2.0 * math.atan2(math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2), abs(self.w))

    def is_identity(self, tol: float = 1e-10) -> bool:
        return self.rotation_angle() < tol

    def to_matrix(self) -> np.ndarray:
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array([[w - 1j * z, -1j * x - y],
                         [-1j * x + y, w + 1j * z]], dtype=complex)

    def zyz(self) -> tuple[float, float, float]:
        """Angles (a, b, c) with this rotation = RZ(a) RY(b) RZ(c)."""
        w, x, y, z = self.w, self.x, self.y, self.z
        b = 2.0 * math.atan2(math.hypot(x, y), math.hypot(w, z))
        plus = 2.0 * math.atan2(z, w) if math.hypot(w, z) > 1e-15 else 0.0
        minus = 2.0 * math.atan2(-x, y) if math.hypot(x, y) > 1e-15 else 0.0
        return (plus + minus) / 2.0, b, (plus - minus) / 2.0

    def zxz(self) -> tuple[float, float, float]:
        """Angles (a, b, c) with this rotation = RZ(a) RX(b) RZ(c)."""
        a, b, c = self.zyz()
        return a + math.pi / 2.0, b, c - math.pi / 2.0


def wrap_angle(theta: float) -> float:
    """Into (-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t


_GATE_ROTATIONS = {
    GateKind.H: ((_SQ, 0.0, _SQ), math.pi),
    GateKind.X: ((1, 0, 0), math.pi),
    GateKind.Y: ((0, 1, 0), math.pi),
    GateKind.Z: ((0, 0, 1), math.pi),
    GateKind.S: ((0, 0, 1), math.pi / 2),
    GateKind.SDG: ((0, 0, 1), -math.pi / 2),
    GateKind.T: ((0, 0, 1), math.pi / 4),
    GateKind.TDG: ((0, 0, 1), -math.pi / 4),
}


def compose(gates) -> Quaternion:
    """Rotation of applying ``gates`` in order."""
    q = Quaternion.identity()
    for g in gates:
        q = Quaternion.from_gate(g) * q
    return q


def synthesize(q: Quaternion, qubit: int, pulse: GateKind = GateKind.RX, tol: float = 1e-10) -> list[Gate]:
    """At most RZ, one ``pulse`` rotation (RX or RY), RZ; near-zero angles dropped."""
    if q.is_identity(tol):
        return []
    a, b, c = q.zxz() if pulse is GateKind.RX else q.zyz()
    a, b, c = wrap_angle(a), wrap_angle(b), wrap_angle(c)
    if abs(b) < tol:
        total = wrap_angle(a + c)
        return [Gate(GateKind.RZ, (qubit,), total)] if abs(total) >= tol else []
    out = []
    if abs(c) >= tol:
        out.append(Gate(GateKind.RZ, (qubit,), c))
    out.append(Gate(pulse, (qubit,), b))
    if abs(a) >= tol:
        out.append(Gate(GateKind.RZ, (qubit,), a))
    return out
