"""Noise-adaptive compiler for small superconducting and trapped-ion devices."""
from .bench import BenchmarkSpec, Family, benchmark, generate, list_benchmarks
from .codegen import CompiledProgram, emit, estimate_reliability
from .ir import Circuit, CircuitError, Gate, GateKind, load_circuit, parse_circuit
from .machine import GateSet, Machine, MachineError, builtin_machines, load_machine, resolve_machine
from .mapper import MapObjective, Mapping, ProgramTooLargeError, exhaustive_map, map_qubits
from .pipeline import CompileReport, CompileResult, OptLevel, compile_circuit, compare
from .reliability import ReliabilityMatrix, ReliabilityMode, compute_reliability_matrix
from .router import RoutedCircuit, route
from .sim import run_noisy, success_rate

__version__ = "0.1.0"

__all__ = [
    "BenchmarkSpec", "Family", "benchmark", "generate", "list_benchmarks",
    "CompiledProgram", "emit", "estimate_reliability",
    "Circuit", "CircuitError", "Gate", "GateKind", "load_circuit", "parse_circuit",
    "GateSet", "Machine", "MachineError", "builtin_machines", "load_machine", "resolve_machine",
    "MapObjective", "Mapping", "ProgramTooLargeError", "exhaustive_map", "map_qubits",
    "CompileReport", "CompileResult", "OptLevel", "compile_circuit", "compare",
    "ReliabilityMatrix", "ReliabilityMode", "compute_reliability_matrix",
    "RoutedCircuit", "route", "run_noisy", "success_rate",
]
