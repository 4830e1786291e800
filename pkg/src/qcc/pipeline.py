"""Compilation pipeline and the four optimisation levels.

    NOOPT    identity placement, route, per-gate lowering
    ONEQOPT  identity placement, route, lowering + 1Q optimisation
    COMMOPT  placement on a uniform-error matrix, route, full lowering
    NOISEOPT placement on the calibrated matrix, route, full lowering
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import codegen
from .ir import Circuit, GateKind, decompose_high_level, dependency_schedule, interaction_profile, load_circuit
from .machine import GateSet, Machine, resolve_machine
from .mapper import MapObjective, Mapping, ProgramTooLargeError, map_qubits, trivial_map
from .reliability import ReliabilityMode, compute_reliability_matrix
from .router import RoutedCircuit, route


class OptLevel(Enum):
    NOOPT = "none"
    ONEQOPT = "1q"
    COMMOPT = "comm"
    NOISEOPT = "noise"


@dataclass
class CompileReport:
    circuit: str
    machine: str
    level: OptLevel
    objective: MapObjective
    counts: dict[str, int]
    swaps: int
    estimated_reliability: float
    mapping: tuple[int, ...]
    final_mapping: tuple[int, ...]
    map_seconds: float
    compile_seconds: float = 0.0
    seed: int = 0
    route_lines: list[str] = field(default_factory=list)

    def row(self) -> dict:
        return {
            "circuit": self.circuit, "machine": self.machine, "level": self.level.value,
            "1q": self.counts["1q"], "z": self.counts["z"], "2q": self.counts["2q"],
            "measure": self.counts["measure"], "swaps": self.swaps,
            "reliability": f"{self.estimated_reliability:.12g}",
            "mapping": " ".join(map(str, self.mapping)),
        }

    def to_text(self) -> str:
        c = self.counts
        lines = [
            f"circuit {self.circuit} on {self.machine}, level {self.level.value}",
            f"mapping {' '.join(map(str, self.mapping))} -> final {' '.join(map(str, self.final_mapping))}",
            f"gates: 1q {c['1q']}  z {c['z']}  2q {c['2q']}  measure {c['measure']}",
            f"swaps inserted: {self.swaps}",
            f"estimated reliability: {self.estimated_reliability:.6g}",
            f"mapper time: {self.map_seconds:.3f} s, total {self.compile_seconds:.3f} s",
        ]
        lines += [f"route {line}" for line in self.route_lines]
        return "\n".join(lines) + "\n"


@dataclass
class CompileResult:
    program: codegen.CompiledProgram
    report: CompileReport
    routed: RoutedCircuit
    source: Circuit


def _lower(routed: RoutedCircuit, machine: Machine, level: OptLevel) -> list:
    gates = codegen.decompose_swaps(routed.gates, machine)
    gates = codegen.lower_two_qubit(gates, machine.gate_set, machine)
    if machine.gate_set is GateSet.IBM:
        gates = codegen.correct_directions(gates, machine)
    if level is OptLevel.NOOPT:
        gates = codegen.lower_1q_naive(gates, machine.gate_set)
    else:
        gates = codegen.optimize_1q(gates, machine.gate_set)
    codegen.check_legal(gates, machine)
    return gates


@dataclass
class _Candidate:
    mapping: Mapping
    routed: RoutedCircuit
    gates: list
    reliability: float

    @property
    def two_qubit(self) -> int:
        return sum(1 for g in self.gates if g.kind.is_2q)


def _build(schedule, m0: Mapping, rm, machine: Machine, level: OptLevel) -> _Candidate:
    routed = route(schedule, m0, rm, machine)
    gates = _lower(routed, machine, level)
    return _Candidate(m0, routed, gates, codegen.estimate_reliability(gates, machine))


def _fewest_2q(cands: list[_Candidate]) -> _Candidate:
    return min(cands, key=lambda c: c.two_qubit)          # min keeps the first on ties


def _most_reliable(cands: list[_Candidate]) -> _Candidate:
    return max(cands, key=lambda c: c.reliability)        # max keeps the first on ties


def compile_circuit(circuit: Circuit, machine: Machine, level: OptLevel | str = OptLevel.NOISEOPT,
                    objective: MapObjective | str = MapObjective.SUM_LOG, seed: int = 0) -> CompileResult:
    """Compile ``circuit`` for ``machine`` at the given optimisation level.

    The placement model scores each gate against the initial layout only, while
    routing moves qubits for good, so a placement that scores better can still
    route worse. Two selection steps close that gap:

    * COMMOPT routes the mapper's placement and the identity placement and keeps
      the one with fewer 2Q gates (mapper wins ties), so it never uses more 2Q
      gates than NOOPT.
    * NOISEOPT compiles the calibrated placement on the calibrated matrix, the
      COMMOPT result, and the two cross combinations, and keeps the highest
      estimated reliability (calibrated first on ties), so it never scores
      below COMMOPT.
    """
    level = OptLevel(level)
    objective = MapObjective(objective)
    if circuit.num_qubits > machine.num_qubits:
        raise ProgramTooLargeError(
            f"{circuit.name} needs {circuit.num_qubits} qubits, {machine.name} has {machine.num_qubits}")
    start = time.perf_counter()
    lowered = decompose_high_level(circuit)
    schedule = dependency_schedule(lowered)
    profile = interaction_profile(lowered)
    uniform = compute_reliability_matrix(machine, ReliabilityMode.UNIFORM)
    identity = trivial_map(circuit.num_qubits, machine.num_qubits)

    t0 = time.perf_counter()
    if level in (OptLevel.NOOPT, OptLevel.ONEQOPT):
        placements = {}
    else:
        placements = {"comm": map_qubits(profile, uniform, MapObjective.SUM_LOG)[0]}
        if level is OptLevel.NOISEOPT:
            calibrated = compute_reliability_matrix(machine, ReliabilityMode.NOISE_AWARE)
            placements["noise"] = map_qubits(profile, calibrated, objective)[0]
        else:
            objective = MapObjective.SUM_LOG
    map_seconds = time.perf_counter() - t0

    if level in (OptLevel.NOOPT, OptLevel.ONEQOPT):
        best = _build(schedule, identity, uniform, machine, level)
    else:
        comm = [_build(schedule, placements["comm"], uniform, machine, level)]
        if identity.assign != placements["comm"].assign:
            comm.append(_build(schedule, identity, uniform, machine, level))
        best = _fewest_2q(comm)
        if level is OptLevel.NOISEOPT:
            m_noise = placements["noise"]
            best = _most_reliable([
                _build(schedule, m_noise, calibrated, machine, level),
                best,
                _build(schedule, best.mapping, calibrated, machine, level),
                _build(schedule, m_noise, uniform, machine, level),
            ])

    routed, gates, rel = best.routed, best.gates, best.reliability
    program = codegen.CompiledProgram(machine.gate_set, tuple(gates), rel, routed.final_mapping,
                                      best.mapping, machine.num_qubits, routed.measured)
    report = CompileReport(circuit.name, machine.name, level, objective, codegen.gate_counts(gates),
                           routed.swap_count, rel, best.mapping.assign, routed.final_mapping.assign,
                           map_seconds, time.perf_counter() - start, seed,
                           [str(d) for d in routed.decisions])
    return CompileResult(program, report, routed, circuit)


def compile_files(circuit_path, machine_spec, level=OptLevel.NOISEOPT,
                  objective=MapObjective.SUM_LOG, seed: int = 0) -> CompileResult:
    return compile_circuit(load_circuit(circuit_path), resolve_machine(str(machine_spec)), level, objective, seed)


CSV_FIELDS = ["circuit", "machine", "level", "1q", "z", "2q", "measure", "swaps", "reliability", "mapping"]


def compare(circuit: Circuit, machine: Machine, levels=tuple(OptLevel),
            objective: MapObjective | str = MapObjective.SUM_LOG) -> list[CompileReport]:
    return [compile_circuit(circuit, machine, lvl, objective).report for lvl in levels]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def sweep(suite_dir, machines_dir, levels=tuple(OptLevel),
          objective: MapObjective | str = MapObjective.SUM_LOG) -> str:
    """Every circuit file x machine file x level; programs that do not fit get an X row."""
    circuits = sorted(Path(suite_dir).glob("*.qc"))
    machines = [resolve_machine(str(p)) for p in sorted(Path(machines_dir).glob("*.json"))]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for cpath in circuits:
        circuit = load_circuit(cpath)
        for m in machines:
            for lvl in levels:
                try:
                    w.writerow(compile_circuit(circuit, m, lvl, objective).report.row())
                except ProgramTooLargeError:
                    row = {k: "" for k in CSV_FIELDS}
                    row.update(circuit=circuit.name, machine=m.name, level=OptLevel(lvl).value, reliability="X")
                    w.writerow(row)
    return buf.getvalue()


def strip_measurements(gates):
    return [g for g in gates if g.kind is not GateKind.MEASURE]


def layout_permutation(routed: RoutedCircuit, start: Mapping) -> tuple[list[int], list[int]]:
    """Full hardware layouts before and after routing.

    Program qubit p starts on ``start[p]``; the remaining hardware qubits are
    labelled p = n, n+1, ... in ascending hardware order. Returns
    (initial, final) lists: label -> hardware qubit.
    """
    n = len(start)
    free = [h for h in range(routed.num_qubits) if h not in set(start.assign)]
    init = list(start.assign) + free
    where = {h: lbl for lbl, h in enumerate(init)}
    for g in routed.gates:
        if g.kind is GateKind.SWAP:
            u, v = g.qubits
            where[u], where[v] = where[v], where[u]
    final = [0] * len(init)
    for h, lbl in where.items():
        final[lbl] = h
    assert final[:n] == list(routed.final_mapping.assign)
    return init, final
