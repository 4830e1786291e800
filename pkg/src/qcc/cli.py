"""``qcc`` command-line driver.

Exit codes: 0 success, 2 program does not fit the machine (reported as "X"),
3 bad input (unreadable or malformed circuit/machine, unknown names).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import BenchmarkError, benchmark, generate, list_benchmarks, supremacy_spec
from .codegen import emit
from .ir import CircuitError, format_circuit, load_circuit
from .machine import GateSet, MachineError, builtin_machines, resolve_machine, write_machine
from .mapper import MapObjective, ProgramTooLargeError
from .pipeline import OptLevel, compare, compile_circuit, reports_to_csv, sweep
from .reliability import ReliabilityMode, compute_reliability_matrix
from .sim import run_noisy

EXIT_OK, EXIT_TOO_LARGE, EXIT_INPUT = 0, 2, 3

log = logging.getLogger("qcc")


class InputError(Exception):
    pass


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _machine(spec: str):
    try:
        return resolve_machine(spec)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from exc


def _load(path: str):
    try:
        return load_circuit(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _levels(text: str) -> list[OptLevel]:
    try:
        return [OptLevel(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"unknown level in {text!r}; choose from none,1q,comm,noise") from exc


def cmd_compile(args) -> int:
    circuit, machine = _load(args.circuit), _machine(args.machine)
    if args.target is not None and GateSet(args.target) is not machine.gate_set:
        raise InputError(f"--target {args.target} does not match {machine.name} ({machine.gate_set.value})")
    result = compile_circuit(circuit, machine, args.opt, args.objective, args.seed)
    _write(emit(result.program, machine), args.emit)
    if args.report:
        sys.stderr.write(result.report.to_text())
    if args.dump_reliability:
        mode = ReliabilityMode.NOISE_AWARE if OptLevel(args.opt) is OptLevel.NOISEOPT else ReliabilityMode.UNIFORM
        Path(args.dump_reliability).write_text(compute_reliability_matrix(machine, mode).to_csv())
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.supremacy:
        rows, cols, depth = args.supremacy
        specs = [supremacy_spec(rows, cols, depth, args.seed)]
    elif args.all:
        specs = list_benchmarks()
    elif args.name:
        specs = [benchmark(args.name)]
    else:
        raise InputError("give a benchmark name, --all or --supremacy")
    if len(specs) > 1:
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        for spec in specs:
            (out / f"{spec.name}.qc").write_text(format_circuit(generate(spec)))
        return EXIT_OK
    _write(format_circuit(generate(specs[0])), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    circuit, machine = _load(args.circuit), _machine(args.machine)
    result = compile_circuit(circuit, machine, args.opt, args.objective, args.seed)
    hist = run_noisy(result.program, machine, shots=args.shots, seed=args.seed, noise=not args.noiseless)
    lines = ["bitstring,count"] + [f"{k},{hist[k]}" for k in sorted(hist)]
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    circuit, machine = _load(args.circuit), _machine(args.machine)
    _write(reports_to_csv(compare(circuit, machine, _levels(args.levels), args.objective)), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    for d in (args.suite, args.machines):
        if not Path(d).is_dir():
            raise InputError(f"{d} is not a directory")
    _write(sweep(args.suite, args.machines, _levels(args.levels), args.objective), args.out)
    return EXIT_OK


def cmd_machine(args) -> int:
    presets = builtin_machines()
    if args.name is None:
        _write("".join(f"{n}\t{m.num_qubits}\t{m.gate_set.value}\n" for n, m in presets.items()), None)
        return EXIT_OK
    if args.name not in presets:
        raise InputError(f"unknown preset {args.name!r}; known: {sorted(presets)}")
    if args.out in (None, "-"):
        import json
        sys.stdout.write(json.dumps(presets[args.name].to_dict(), indent=2) + "\n")
    else:
        write_machine(presets[args.name], args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcc", description="Noise-adaptive compiler for small quantum devices.")
    p.add_argument("--version", action="version", version=f"qcc {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    levels = [lv.value for lv in OptLevel]
    objectives = [o.value for o in MapObjective]

    def common(sp, with_opt=True):
        sp.add_argument("circuit", help="circuit file")
        sp.add_argument("--machine", "-m", required=True, help="machine JSON file or preset name")
        if with_opt:
            sp.add_argument("--opt", choices=levels, default=OptLevel.NOISEOPT.value)
        sp.add_argument("--objective", choices=objectives, default=MapObjective.SUM_LOG.value)
        sp.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compile", help="compile a circuit for a machine")
    common(c)
    c.add_argument("--target", choices=[g.value for g in GateSet],
                   help="must agree with the machine's gate set")
    c.add_argument("--emit", "-o", help="output file (default stdout)")
    c.add_argument("--report", action="store_true", help="print a compile report to stderr")
    c.add_argument("--dump-reliability", metavar="CSV", help="write the reliability matrix used")
    c.set_defaults(func=cmd_compile)

    b = sub.add_parser("bench", help="write benchmark circuits")
    b.add_argument("name", nargs="?", help=", ".join(s.name for s in list_benchmarks()))
    b.add_argument("--all", action="store_true", help="every suite benchmark, one file each")
    b.add_argument("--supremacy", nargs=3, type=int, metavar=("ROWS", "COLS", "DEPTH"))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", "-o", help="file, or directory with --all")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("simulate", help="compile then run noisy shots; prints bitstring,count CSV")
    common(s)
    s.add_argument("--shots", type=int, default=8192)
    s.add_argument("--noiseless", action="store_true")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_simulate)

    k = sub.add_parser("compare", help="one CSV row per optimisation level")
    common(k, with_opt=False)
    k.add_argument("--levels", default=",".join(levels))
    k.add_argument("--out", "-o")
    k.set_defaults(func=cmd_compare)

    w = sub.add_parser("sweep", help="every *.qc in a directory against every *.json machine")
    w.add_argument("--suite", required=True)
    w.add_argument("--machines", required=True)
    w.add_argument("--levels", default=",".join(levels))
    w.add_argument("--objective", choices=objectives, default=MapObjective.SUM_LOG.value)
    w.add_argument("--out", "-o")
    w.set_defaults(func=cmd_sweep)

    m = sub.add_parser("machine", help="list presets or write one as JSON")
    m.add_argument("name", nargs="?")
    m.add_argument("--out", "-o")
    m.set_defaults(func=cmd_machine)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ProgramTooLargeError as exc:
        print(f"X: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (InputError, CircuitError, MachineError, BenchmarkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
