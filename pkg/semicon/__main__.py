"""
Semicon: command-line tools for semiconstrained systems.

Commands:
- capacity: solve the capacity of a constraint spec
- bounds: lower, solved and upper capacity of (0,k,p)-RLL systems over a p grid
- enumerate: exact admissible counts and growth rates for small n
- synth-chain: export the capacity-achieving Markov chain
- encode / decode: transform files with the graph-walking codec
- simulate: Monte Carlo campaign of the codec
- verify-table1: recompute the reference triple distribution of 101001101000

Constraint specs come from a JSON file (--spec) or the (0,K,P)-RLL shortcut
(--rll K --cap P). Rationals are accepted as "num/den" or exact decimals.

Output Formats:
- CSV: fixed header row, default for tables
- JSON: records with metadata
- TXT: aligned table with metadata lines, default for capacity

Examples:
    # Capacity of the (0,1,1/8)-RLL system
    semicon capacity --rll 1 --cap 1/8

    # Sandwich table for k=2
    semicon bounds --k 2 --p-grid 1/100:1/8:1/100 -o bounds.csv

    # Encode and decode a file
    semicon encode --rll 2 --cap 1/20 data.bin -o data.scsc
    semicon decode --rll 2 --cap 1/20 data.scsc -o data.out

    # Simulation campaign on four workers
    semicon simulate --rll 2 --cap 1/20 --n 16384 --trials 200 --jobs 4 -o sim.csv

License: GNU Affero General Public License v3.0 or later (AGPL-3.0-or-later)
SPDX-License-Identifier: AGPL-3.0-or-later
"""
import argparse
import importlib.metadata
import shutil
import signal
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
from returns.pipeline import is_successful
from returns.result import Failure, Result, Success, safe

from .bounds import bounds_table, cyclic_equivalence_check
from .capacity import METHODS, capacity_report, capacity_vs_enumeration, solve_capacity
from .codec import (DEFAULT_EPSILON, TailRule, decode, encode, make_plan, pack_container, read_container,
                    received_bits, simulate, simulation_report, write_container)
from .errors import (BudgetExceededError, ContainerError, DecodeFailure, InfeasibleSpecError, InputError,
                     NonConvergenceError, SpecError)
from .formats import Report, get_supported_formats, write_format, write_format_to_stdout
from .markov import chain_from_measure, export_chain, fit_geometric_decay, mixing_profile
from .measures import apply_f, constraint_matrix_for, empirical_k_distribution
from .words import ConstraintSpec, Mode, load_spec, parse_rational, rll_spec

__version__ = importlib.metadata.version("semicon")

# Global context for cleanup on signal interruption
_cleanup_context: Optional['RunContext'] = None

TABLE_FORMAT = "csv"

TABLE1_SEQUENCE = "101001101000"
TABLE1_WINDOWS = 10
TABLE1_EXPECTED = {
    "000": Fraction(1, 10), "001": Fraction(1, 10), "010": Fraction(2, 10), "011": Fraction(1, 10),
    "100": Fraction(2, 10), "101": Fraction(2, 10), "110": Fraction(1, 10), "111": Fraction(0),
}
TABLE1_F_MAP = {"1": Fraction(5, 10), "100": Fraction(2, 10)}

FAILURE_LABELS = [
    (InfeasibleSpecError, "infeasible"),
    (BudgetExceededError, "budget"),
    (SpecError, "parse"),
    ((DecodeFailure, ContainerError), "codec"),
    (NonConvergenceError, "solver"),
    (InputError, "input"),
]


def signal_handler(signum: int, frame) -> None:
    """Handle CTRL+C (SIGINT) and SIGTERM gracefully."""
    signal_names = {
        signal.SIGINT: "SIGINT (CTRL+C)",
        signal.SIGTERM: "SIGTERM"
    }
    signal_name = signal_names.get(signum, f"signal {signum}")
    print(f"\n⚠️  Received {signal_name}. Cleaning up and exiting...", file=sys.stderr)

    if _cleanup_context and _cleanup_context.workdir.exists():
        try:
            shutil.rmtree(_cleanup_context.workdir, ignore_errors=True)
            print(f"🗑️  Cleaned up temporary directory: {_cleanup_context.workdir}", file=sys.stderr)
        except Exception:
            pass  # Ignore cleanup errors during signal handling

    print("👋 Goodbye!", file=sys.stderr)
    exit_code = 130 if signum == signal.SIGINT else 143
    sys.exit(exit_code)


@dataclass
class Config:
    """Validated command-line configuration."""
    command: str
    verbose_level: int = 0
    quiet: bool = False
    format: Optional[str] = None
    output: Optional[Path] = None
    overwrite_files: bool = False
    spec_path: Optional[Path] = None
    rll: Optional[int] = None
    cap: Optional[Fraction] = None
    input_path: Optional[Path] = None
    n: Optional[int] = None
    epsilon: Fraction = DEFAULT_EPSILON
    trials: int = 100
    seed: int = 0
    jobs: int = 1
    k: Optional[int] = None
    p_values: List[Fraction] = field(default_factory=list)
    dimensions: int = 1
    solve: bool = True
    mode: str = Mode.STRICT.value
    method: str = "dual"
    tail_rule: str = TailRule.LITERAL.value
    mixing: Optional[int] = None
    check_cyclic: bool = False


@dataclass
class RunContext:
    """Context for one command run."""
    config: Config
    vprint: Callable[[str, int], None]
    workdir: Path


def create_print_wrapper(verbose_level: int, quiet: bool) -> Callable[[str, int], None]:
    """Create a print wrapper that respects verbosity and quiet mode."""
    def vprint(message: str, level: int = 0):
        """Print message to stderr if verbosity level is sufficient and not in quiet mode.

        Args:
            message: The message to print
            level: Required verbosity level (0=always, 1=-v, 2=-vv)
        """
        if not quiet and verbose_level >= level:
            print(message, file=sys.stderr)

    return vprint


def describe_failure(error: object) -> str:
    """Single-line diagnostic naming the failure class."""
    for kinds, label in FAILURE_LABELS:
        if isinstance(error, kinds):
            return f"{label}: {error}"
    return str(error)


def parse_p_grid(text: str) -> List[Fraction]:
    """Inclusive exact grid from "start:stop:step"."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    try:
        start, stop, step = (parse_rational(part) for part in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("grid needs step > 0 and start <= stop")
    count = int((stop - start) / step)
    return [start + i * step for i in range(count + 1)]


def rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


@safe
def resolve_spec(config: Config) -> ConstraintSpec:
    """Constraint from --spec or --rll/--cap."""
    if config.spec_path is not None:
        if not config.spec_path.exists():
            raise SpecError(f"File not found: {config.spec_path}")
        return load_spec(config.spec_path)
    if config.rll is not None and config.cap is not None:
        return rll_spec(config.rll, config.cap)
    raise InputError("a constraint is required: --spec FILE or --rll K --cap P")


@safe
def check_file_overwrite(target: Path, overwrite_files: bool) -> None:
    """Check if file should be overwritten and handle user confirmation."""
    if target.exists() and not overwrite_files:
        try:
            response = input(f"⚠️ Output file '{target}' already exists. Overwrite? [y/N] ").lower()
            if response != 'y':
                raise ValueError("User aborted")
        except EOFError:
            print("\n⚠️  EOF received. Aborting operation.", file=sys.stderr)
            raise ValueError("User aborted with EOF")
        except KeyboardInterrupt:
            print("\n⚠️  Interrupted by user. Aborting operation.", file=sys.stderr)
            raise ValueError("User interrupted")


def move_into_place(ctx: RunContext, produced: Path, target: Path) -> None:
    target.parent.mkdir(parents=True, exist_ok=True)
    shutil.move(str(produced), target)
    ctx.vprint(f"✅ Saved to: '{target}'", 1)


def emit_report(ctx: RunContext, report: Report, default_format: str = TABLE_FORMAT) -> Result[None, Exception]:
    """Write a report to --out (through the work directory) or stdout."""
    fmt = ctx.config.format or default_format
    if ctx.config.output is None:
        write_format_to_stdout(fmt, report)
        return Success(None)

    def produce(_):
        staged = ctx.workdir / ctx.config.output.name
        write_format(fmt, report, staged, ctx.config.verbose_level >= 1, ctx.vprint)
        move_into_place(ctx, staged, ctx.config.output)

    return check_file_overwrite(ctx.config.output, ctx.config.overwrite_files).bind(safe(produce))


def emit_bytes(ctx: RunContext, data: bytes, stage: Callable[[Path], None]) -> Result[None, Exception]:
    """Binary output: staged file moved to --out, or raw bytes on stdout."""
    if ctx.config.output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return Success(None)

    def produce(_):
        staged = ctx.workdir / ctx.config.output.name
        stage(staged)
        move_into_place(ctx, staged, ctx.config.output)

    return check_file_overwrite(ctx.config.output, ctx.config.overwrite_files).bind(safe(produce))


@safe
def run_capacity(ctx: RunContext, spec: ConstraintSpec) -> Report:
    ctx.vprint(f"📐 Solving capacity of {spec.describe()}", 1)
    result = solve_capacity(spec, method=ctx.config.method, k=ctx.config.k, vprint=ctx.vprint)
    ctx.vprint(f"✅ Capacity {result.capacity:.9f} after {result.iterations} iterations", 2)
    return capacity_report(spec, result)


@safe
def run_bounds(ctx: RunContext) -> Report:
    config = ctx.config
    if config.k is None or not config.p_values:
        raise InputError("bounds needs --k and --p or --p-grid")
    ctx.vprint(f"📐 Bounds for k={config.k} over {len(config.p_values)} values of p", 1)

    def solver(k, p):
        return solve_capacity(rll_spec(k, p), method=config.method).capacity

    return bounds_table(config.k, config.p_values, solve=config.solve, dimensions=config.dimensions,
                        solver=solver)


@safe
def run_enumerate(ctx: RunContext, spec: ConstraintSpec) -> Report:
    config = ctx.config
    if config.n is None:
        raise InputError("enumerate needs --n")
    if config.check_cyclic:
        if config.rll is None:
            raise InputError("--check-cyclic applies to --rll specs only")
        return cyclic_equivalence_check(config.rll, config.cap, config.n)
    ctx.vprint(f"📐 Counting admissible words up to n={config.n} ({config.mode})", 1)
    report = capacity_vs_enumeration(spec, config.n, config.mode, method=config.method)
    if not report.metadata["feasible"]:
        ctx.vprint("⚠️  No shift-invariant measure meets the caps; capacity column left empty", 1)
    return report


@safe
def run_synth_chain(ctx: RunContext, spec: ConstraintSpec) -> Report:
    config = ctx.config
    result = solve_capacity(spec, method=config.method, k=max(spec.k, 2, config.k or 2))
    chain = chain_from_measure(result.optimizer, tol=1e-8)
    report = export_chain(chain)
    report.metadata["capacity"] = result.capacity
    if config.mixing:
        c, alpha = fit_geometric_decay(mixing_profile(chain, config.mixing))
        report.metadata["mixing_c"] = c
        report.metadata["mixing_alpha"] = alpha
    return report


def read_input_bits(path: Optional[Path]) -> np.ndarray:
    data = sys.stdin.buffer.read() if path is None else path.read_bytes()
    if not data:
        raise InputError("input is empty")
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def run_encode(ctx: RunContext, spec: ConstraintSpec) -> Result[None, Exception]:
    config = ctx.config

    @safe
    def transmit():
        bits = read_input_bits(config.input_path)
        plan = make_plan(spec, bits.size, config.epsilon, tail_rule=config.tail_rule, method=config.method)
        ctx.vprint(f"📐 {plan.n} bits -> {plan.transmit_len} transmitted (rate {plan.n / plan.transmit_len:.4f})", 1)
        outcome = encode(bits, plan, config.seed)
        if not is_successful(outcome):
            raise DecodeFailure(f"encoding failed: {outcome.failure()}")
        bits = outcome.unwrap().bits
        return plan, bits, pack_container(plan, bits, config.seed)

    def store(sent):
        plan, bits, data = sent
        return emit_bytes(ctx, data, lambda staged: write_container(staged, plan, bits, config.seed))

    return transmit().bind(store)


def run_decode(ctx: RunContext, spec: ConstraintSpec) -> Result[None, Exception]:
    config = ctx.config

    @safe
    def recover() -> bytes:
        if config.input_path is None or not config.input_path.exists():
            raise InputError(f"File not found: {config.input_path}")
        container = read_container(config.input_path)
        plan = make_plan(spec, container.n, container.epsilon, tail_rule=config.tail_rule, method=config.method)
        bits = decode(received_bits(container, plan), plan)
        ctx.vprint(f"📐 Recovered {bits.size} bits", 1)
        return np.packbits(bits).tobytes()

    def store(data: bytes):
        return emit_bytes(ctx, data, lambda staged: staged.write_bytes(data))

    return recover().bind(store)


@safe
def run_simulate(ctx: RunContext, spec: ConstraintSpec) -> Report:
    config = ctx.config
    if config.n is None:
        raise InputError("simulate needs --n")
    plan = make_plan(spec, config.n, config.epsilon, tail_rule=config.tail_rule, method=config.method)
    ctx.vprint(f"📐 Simulating {config.trials} trials of n={plan.n} on {config.jobs} worker(s)", 1)
    result = simulate(spec, config.n, config.epsilon, config.trials, config.seed, config.jobs,
                      plan=plan, vprint=ctx.vprint)
    ctx.vprint(f"✅ Success rate {result.success_rate:.4f}, rate {result.rate:.4f}", 1)
    return simulation_report(result)


def table1_report() -> Report:
    """The reference triple distribution and its f-map, expected against observed."""
    bits = [int(c) for c in TABLE1_SEQUENCE]
    measure = empirical_k_distribution(bits, 3, n=TABLE1_WINDOWS).measure
    rows = []
    for word, observed in measure.items():
        key = "".join(str(s) for s in word)
        expected = TABLE1_EXPECTED[key]
        rows.append([key, expected, observed, observed == expected])
    words = [tuple(int(c) for c in w) for w in TABLE1_F_MAP]
    frequencies = apply_f(constraint_matrix_for(words, 2, 3), measure)
    for name, observed in zip(TABLE1_F_MAP, frequencies):
        rows.append([f"M[{name}]", TABLE1_F_MAP[name], observed, observed == TABLE1_F_MAP[name]])
    return Report(
        title="Triple distribution of 101001101000",
        columns=["quantity", "expected", "observed", "match"],
        rows=rows,
        metadata={"sequence": TABLE1_SEQUENCE, "windows": TABLE1_WINDOWS,
                  "all_match": all(row[-1] for row in rows)},
    )


def run_verify_table1(ctx: RunContext) -> Result[None, Exception]:
    report = table1_report()

    def verdict(_):
        if not report.metadata["all_match"]:
            return Failure(InputError("table mismatch"))
        ctx.vprint("✅ All values match", 1)
        return Success(None)

    return emit_report(ctx, report).bind(verdict)


def run_command(ctx: RunContext) -> Result[None, Exception]:
    """Dispatch the configured command."""
    command = ctx.config.command
    if command == "bounds":
        return run_bounds(ctx).bind(lambda report: emit_report(ctx, report))
    if command == "verify-table1":
        return run_verify_table1(ctx)

    spec_result = resolve_spec(ctx.config)
    if command == "capacity":
        return (spec_result
                .bind(lambda spec: run_capacity(ctx, spec))
                .bind(lambda report: emit_report(ctx, report, "txt")))
    if command == "enumerate":
        return spec_result.bind(lambda spec: run_enumerate(ctx, spec)).bind(lambda report: emit_report(ctx, report))
    if command == "synth-chain":
        return spec_result.bind(lambda spec: run_synth_chain(ctx, spec)).bind(lambda report: emit_report(ctx, report))
    if command == "encode":
        return spec_result.bind(lambda spec: run_encode(ctx, spec))
    if command == "decode":
        return spec_result.bind(lambda spec: run_decode(ctx, spec))
    if command == "simulate":
        return spec_result.bind(lambda spec: run_simulate(ctx, spec)).bind(lambda report: emit_report(ctx, report))
    return Failure(InputError(f"unknown command {command}"))


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Increase verbosity (use -vv for debug output)")
    parser.add_argument("--quiet", action="store_true", help="Silence all progress messages")
    parser.add_argument("-f", "--format", choices=get_supported_formats(), help="Output format: csv, json or txt")
    parser.add_argument("-o", "--out", help="Write output to this file instead of stdout")
    parser.add_argument("--overwrite", action="store_true", help="Overwrite an existing output file without confirmation")


def add_spec_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--spec", help="Constraint spec JSON file")
    parser.add_argument("--rll", type=int, metavar="K", help="Use the (0,K,P)-RLL spec (forbidden word 1^{K+1})")
    parser.add_argument("--cap", type=rational_arg, metavar="P", help="Cap of the --rll spec")
    parser.add_argument("--method", choices=METHODS, default="dual", help="Capacity solver (default: dual)")


def add_codec_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=rational_arg, default=DEFAULT_EPSILON,
                        help="Slack exponent in (0, 1/4) (default: 1/10)")
    parser.add_argument("--tail-rule", choices=[r.value for r in TailRule], default=TailRule.LITERAL.value,
                        help="Post-walk check (default: literal)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-command per operation."""
    parser = argparse.ArgumentParser(prog="semicon", description="Capacity, bounds and encoders for semiconstrained systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}", help="Show program's version number and exit")
    sub = parser.add_subparsers(dest="command", metavar="command")

    capacity = sub.add_parser("capacity", help="Solve the capacity of a constraint")
    add_common_arguments(capacity)
    add_spec_arguments(capacity)
    capacity.add_argument("--k", type=int, help="Tuple length to solve on (default: longest forbidden word)")

    bounds = sub.add_parser("bounds", help="Capacity bounds of (0,k,p)-RLL systems")
    add_common_arguments(bounds)
    bounds.add_argument("--k", type=int, required=True, help="Run-length parameter")
    grid = bounds.add_mutually_exclusive_group(required=True)
    grid.add_argument("--p", type=rational_arg, help="Single cap")
    grid.add_argument("--p-grid", type=parse_p_grid, help="Inclusive grid start:stop:step")
    bounds.add_argument("--dimensions", type=int, default=1, help="Number of dimensions (default: 1)")
    bounds.add_argument("--no-solve", action="store_true", help="Skip the numerical capacity column")
    bounds.add_argument("--method", choices=METHODS, default="dual", help="Capacity solver (default: dual)")

    enum = sub.add_parser("enumerate", help="Count admissible words for small n")
    add_common_arguments(enum)
    add_spec_arguments(enum)
    enum.add_argument("--n", type=int, required=True, help="Largest word length")
    enum.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.STRICT.value, help="Membership mode")
    enum.add_argument("--check-cyclic", action="store_true", help="Compare cyclic and linear counts (--rll only)")

    synth = sub.add_parser("synth-chain", help="Export the capacity-achieving Markov chain")
    add_common_arguments(synth)
    add_spec_arguments(synth)
    synth.add_argument("--k", type=int, help="Tuple length (chain order k-1)")
    synth.add_argument("--mixing", type=int, metavar="STEPS", help="Fit a geometric mixing rate over STEPS steps")

    enc = sub.add_parser("encode", help="Encode a file into a constrained bit stream")
    add_common_arguments(enc)
    add_spec_arguments(enc)
    add_codec_arguments(enc)
    enc.add_argument("input", nargs="?", help="Input file (default: stdin)")
    enc.add_argument("--seed", type=int, default=0, help="Padding seed (default: 0)")

    dec = sub.add_parser("decode", help="Decode an encoded file")
    add_common_arguments(dec)
    add_spec_arguments(dec)
    dec.add_argument("input", help="Encoded file")
    dec.add_argument("--tail-rule", choices=[r.value for r in TailRule], default=TailRule.LITERAL.value,
                     help="Post-walk check used when encoding (default: literal)")

    sim = sub.add_parser("simulate", help="Monte Carlo simulation of the codec")
    add_common_arguments(sim)
    add_spec_arguments(sim)
    add_codec_arguments(sim)
    sim.add_argument("--n", type=int, required=True, help="Input length in bits")
    sim.add_argument("--trials", type=int, default=100, help="Number of trials (default: 100)")
    sim.add_argument("--seed", type=int, default=0, help="Master seed (default: 0)")
    sim.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")

    verify = sub.add_parser("verify-table1", help="Recompute the triple distribution of 101001101000")
    add_common_arguments(verify)
    return parser


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        sys.exit(1)
    return args


def create_config(args: argparse.Namespace) -> Config:
    """Create configuration from parsed arguments."""
    p_values = []
    if getattr(args, "p_grid", None):
        p_values = args.p_grid
    elif getattr(args, "p", None) is not None:
        p_values = [args.p]
    input_path = getattr(args, "input", None)
    spec_path = getattr(args, "spec", None)
    return Config(
        command=args.command,
        verbose_level=args.verbose,
        quiet=args.quiet,
        format=args.format,
        output=Path(args.out).expanduser().resolve() if args.out else None,
        overwrite_files=args.overwrite,
        spec_path=Path(spec_path).expanduser().resolve() if spec_path else None,
        rll=getattr(args, "rll", None),
        cap=getattr(args, "cap", None),
        input_path=Path(input_path).expanduser().resolve() if input_path else None,
        n=getattr(args, "n", None),
        epsilon=getattr(args, "epsilon", DEFAULT_EPSILON),
        trials=getattr(args, "trials", 100),
        seed=getattr(args, "seed", 0),
        jobs=getattr(args, "jobs", 1),
        k=getattr(args, "k", None),
        p_values=p_values,
        dimensions=getattr(args, "dimensions", 1),
        solve=not getattr(args, "no_solve", False),
        mode=getattr(args, "mode", Mode.STRICT.value),
        method=getattr(args, "method", "dual"),
        tail_rule=getattr(args, "tail_rule", TailRule.LITERAL.value),
        mixing=getattr(args, "mixing", None),
        check_cyclic=getattr(args, "check_cyclic", False),
    )


def create_run_context(config: Config) -> RunContext:
    """Create run context."""
    return RunContext(
        config=config,
        vprint=create_print_wrapper(config.verbose_level, config.quiet),
        workdir=Path(tempfile.mkdtemp()),
    )


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point."""
    global _cleanup_context

    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)

    try:
        args = parse_arguments(argv)
        config = create_config(args)
        ctx = create_run_context(config)

        # Set global context for signal handler cleanup
        _cleanup_context = ctx

        try:
            result = run_command(ctx)
            if not is_successful(result):
                print(f"Error: {describe_failure(result.failure())}", file=sys.stderr)
                sys.exit(1)
        except KeyboardInterrupt:
            print("\n⚠️  Operation interrupted by user.", file=sys.stderr)
            sys.exit(130)

    except KeyboardInterrupt:
        print("\n⚠️  Setup interrupted by user.", file=sys.stderr)
        sys.exit(130)
    except EOFError:
        print("\n⚠️  EOF received during input. Exiting.", file=sys.stderr)
        sys.exit(1)
    finally:
        if _cleanup_context and _cleanup_context.workdir.exists():
            shutil.rmtree(_cleanup_context.workdir, ignore_errors=True)
        _cleanup_context = None


if __name__ == "__main__":
    main()
