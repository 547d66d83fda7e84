# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
"""Command line front end.

``synth`` exits with 10 for realizable and 20 for unrealizable
formulas, following the synthesis competition convention.
"""

import argparse
import logging
import multiprocessing
import queue
import sys
import time
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from .config import RC
from .dfa import (
    build_bad_prefix_dfa,
    dfa_statistics,
    dualize_to_dsa,
    encode_symbolic,
    minimize_dfa,
)
from .game import Mover, winning_region
from .horn import build_horn, horn_strategy, solve_horn
from .ltl import (
    Formula,
    Partition,
    expand_until,
    read_formula,
    read_partition,
    to_nnf,
    to_text,
)
from .transducer import (
    ExportFormat,
    Transducer,
    export,
    symbolic_strategy,
    validate_strategy,
)
from .utils import (
    LOG,
    ErrorCode,
    SynthesisError,
    kill_process_tree,
    resident_memory_mib,
)

MODES = ("symbolic", "horn", "both")


class ExitCode(IntEnum):
    OK = 0
    ERROR = 1
    FRAGMENT_VIOLATION = 2
    RESOURCE_LIMIT = 3
    REALIZABLE = 10
    UNREALIZABLE = 20


@dataclass(frozen=True)
class RunConfig:
    formula: Path
    partition: Path
    mode: str = "symbolic"
    first_mover: Mover = Mover.ENVIRONMENT
    expand: Optional[int] = None
    out: ExportFormat = ExportFormat.JSON
    out_file: Optional[Path] = None
    state_cap: Optional[int] = None
    timeout: Optional[float] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            err_msg = f"unknown mode {self.mode!r}"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "RunConfig")
        if self.mode != "symbolic" and self.first_mover is not Mover.ENVIRONMENT:
            err_msg = "the horn solver needs the environment to move first"
            raise SynthesisError(ErrorCode.INVALID_ARGUMENT, err_msg, "RunConfig")

    @property
    def strategy_path(self) -> Path:
        if self.out_file is not None:
            return self.out_file
        return self.formula.with_suffix(f".strategy.{self.out.value}")


class SynthesisOutcome(NamedTuple):
    #: realizability verdict per solver
    verdicts: Dict[str, bool]
    dfa_states: int
    #: exported strategy per solver
    artifacts: Dict[str, bytes]
    #: violating plays found by self validation, per solver
    violations: Dict[str, int]
    memory_mib: float


def run_synthesis(
    phi: Formula,
    part: Partition,
    mode: str = "symbolic",
    first_mover: Mover = Mover.ENVIRONMENT,
    state_cap: Optional[int] = None,
    seed: int = 0,
    fmt: Optional[ExportFormat] = ExportFormat.JSON,
    validate: bool = True,
) -> SynthesisOutcome:
    """Decide `phi` with the selected solvers and export their strategies.

    The outcome only holds plain data so that it can cross process
    boundaries.
    """
    start = time.perf_counter()
    dfa = minimize_dfa(build_bad_prefix_dfa(phi, part, state_cap))
    LOG.info(
        "DFA construction: %.3f s, %d states",
        time.perf_counter() - start,
        dfa.num_states,
    )

    verdicts: Dict[str, bool] = {}
    strategies: Dict[str, Transducer] = {}
    if mode in ("symbolic", "both"):
        start = time.perf_counter()
        sdfa = encode_symbolic(dfa, part)
        region = winning_region(sdfa, first_mover)
        verdicts["symbolic"] = region.realizable
        LOG.info("symbolic game solving: %.3f s", time.perf_counter() - start)
        if region.realizable:
            start = time.perf_counter()
            strategies["symbolic"] = symbolic_strategy(sdfa, region)
            LOG.info(
                "symbolic strategy extraction: %.3f s", time.perf_counter() - start
            )

    if mode in ("horn", "both"):
        start = time.perf_counter()
        dsa = dualize_to_dsa(dfa)
        if dsa.is_empty():
            verdicts["horn"] = False
        else:
            result = solve_horn(build_horn(dsa, part))
            verdicts["horn"] = result.satisfiable
            if result.satisfiable:
                strategies["horn"] = horn_strategy(result, dsa, part)
        LOG.info("horn game solving: %.3f s", time.perf_counter() - start)

    artifacts: Dict[str, bytes] = {}
    violations: Dict[str, int] = {}
    for solver, strategy in strategies.items():
        if validate:
            report = validate_strategy(
                strategy,
                phi,
                plays=RC["VALIDATION_PLAYS"],
                horizon=RC["VALIDATION_HORIZON"],
                seed=seed,
                adversarial_plays=RC["VALIDATION_ADVERSARIAL_PLAYS"],
            )
            violations[solver] = report.violations
        if fmt is not None:
            artifacts[solver] = export(strategy, fmt)

    return SynthesisOutcome(
        verdicts=verdicts,
        dfa_states=dfa.num_states,
        artifacts=artifacts,
        violations=violations,
        memory_mib=resident_memory_mib(),
    )


def _worker(
    results: "multiprocessing.Queue[Tuple[bool, Any]]",
    func: Callable[..., Any],
    args: Sequence[Any],
) -> None:
    try:
        results.put((True, func(*args)))
    except SynthesisError as exc:
        results.put((False, exc))
    except Exception as exc:
        err_msg = f"{type(exc).__name__}: {exc}"
        results.put(
            (False, SynthesisError(ErrorCode.INTERNAL_ERROR, err_msg, func.__name__))
        )


def _poll(
    results: "multiprocessing.Queue[Tuple[bool, Any]]",
    process: multiprocessing.Process,
    deadline: float,
    function: str,
) -> Tuple[bool, Any]:
    while True:
        remaining = deadline - time.perf_counter()
        if remaining <= 0:
            raise queue.Empty
        try:
            return results.get(timeout=min(0.1, remaining))
        except queue.Empty:
            if process.is_alive():
                continue
        # the child may have put its result right before exiting
        try:
            return results.get(timeout=0.5)
        except queue.Empty:
            err_msg = f"worker exited with code {process.exitcode}"
            raise SynthesisError(ErrorCode.INTERNAL_ERROR, err_msg, function) from None


def run_with_timeout(
    func: Callable[..., Any], args: Sequence[Any], timeout: Optional[float]
) -> Any:
    """Call ``func(*args)``, in a child process if a timeout is given.

    On expiry the child process tree is killed. A child that dies without a
    result raises :attr:`~pysafesynth.utils.ErrorCode.INTERNAL_ERROR`.
    """
    if timeout is None:
        return func(*args)
    results: "multiprocessing.Queue[Tuple[bool, Any]]" = multiprocessing.Queue()
    process = multiprocessing.Process(
        target=_worker, args=(results, func, args), daemon=True
    )
    process.start()
    try:
        success, value = _poll(
            results, process, time.perf_counter() + timeout, func.__name__
        )
    except queue.Empty:
        if process.pid is not None:
            kill_process_tree(process.pid)
        err_msg = f"no result within {timeout} s"
        raise SynthesisError(ErrorCode.TIMEOUT, err_msg, func.__name__) from None
    finally:
        process.join(timeout=1.0)
    if not success:
        raise value
    return value


def _load(
    formula: Path, partition: Path, expand: Optional[int]
) -> Tuple[Formula, Partition]:
    phi = to_nnf(read_formula(formula))
    part = read_partition(partition)
    part.check(phi)
    if expand is not None:
        phi = expand_until(phi, expand)
    return phi, part


def cmd_synth(config: RunConfig) -> ExitCode:
    phi, part = _load(config.formula, config.partition, config.expand)
    job = (
        phi,
        part,
        config.mode,
        config.first_mover,
        config.state_cap,
        config.seed,
        config.out,
    )
    outcome: SynthesisOutcome = run_with_timeout(run_synthesis, job, config.timeout)
    if len(set(outcome.verdicts.values())) > 1:
        print(f"solvers disagree: {outcome.verdicts}", file=sys.stderr)
        return ExitCode.ERROR
    for solver, count in outcome.violations.items():
        if count:
            err_msg = f"{solver} strategy failed validation in {count} plays"
            print(err_msg, file=sys.stderr)
            return ExitCode.ERROR

    if not all(outcome.verdicts.values()):
        print("UNREALIZABLE")
        return ExitCode.UNREALIZABLE
    print("REALIZABLE")
    artifact = outcome.artifacts.get("symbolic") or outcome.artifacts["horn"]
    config.strategy_path.write_bytes(artifact)
    LOG.info("strategy written to %s", config.strategy_path)
    return ExitCode.REALIZABLE


def cmd_expand(formula: Path, length: int) -> ExitCode:
    print(to_text(expand_until(to_nnf(read_formula(formula)), length)))
    return ExitCode.OK


def cmd_dfa(formula: Path, partition: Path, state_cap: Optional[int]) -> ExitCode:
    phi, part = _load(formula, partition, None)
    dfa = minimize_dfa(build_bad_prefix_dfa(phi, part, state_cap))
    stats = dfa_statistics(dfa)
    print(dfa.to_text(), end="")
    accepting = ", ".join(str(s) for s in sorted(dfa.accepting))
    print(
        f"# states {stats.states}, edges {stats.edges}, "
        f"accepting {{{accepting}}}, bits {stats.bits}"
    )
    if dfa.initial in dfa.accepting:
        print("# initial state accepting: every trace is a bad prefix")
    return ExitCode.OK


def cmd_bench(
    formula: Path,
    partition: Path,
    max_length: int,
    timeout: Optional[float],
    state_cap: Optional[int],
    seed: int,
) -> ExitCode:
    """Print one tab separated row per expansion length and solver."""
    base, part = _load(formula, partition, None)
    print("length\tsolver\tverdict\tstates\tseconds\tMiB")
    for length in range(1, max_length + 1):
        phi = expand_until(base, length)
        for solver in ("horn", "symbolic"):
            start = time.perf_counter()
            states, memory = "-", "-"
            job = (phi, part, solver, Mover.ENVIRONMENT, state_cap, seed, None, False)
            try:
                outcome: SynthesisOutcome = run_with_timeout(
                    run_synthesis, job, timeout
                )
            except SynthesisError as exc:
                verdict = {
                    ErrorCode.TIMEOUT: "TIMEOUT",
                    ErrorCode.RESOURCE_EXHAUSTED: "CAP",
                }.get(exc.error_code, "ERROR")
            else:
                verdict = "REALIZABLE" if outcome.verdicts[solver] else "UNREALIZABLE"
                states = str(outcome.dfa_states)
                memory = f"{outcome.memory_mib:.1f}"
            seconds = time.perf_counter() - start
            print(f"{length}\t{solver}\t{verdict}\t{states}\t{seconds:.3f}\t{memory}")
    return ExitCode.OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="log debug output")

    parser = argparse.ArgumentParser(
        prog="pysafesynth", description="Safety LTL synthesis"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", parents=[common], help="decide and synthesise")
    synth.add_argument("-f", "--formula", type=Path, required=True)
    synth.add_argument("-p", "--partition", type=Path, required=True)
    synth.add_argument("--mode", choices=MODES, default="symbolic")
    synth.add_argument("--first", choices=[m.value for m in Mover], default="env")
    synth.add_argument("--expand", type=int, metavar="L")
    synth.add_argument(
        "--out", choices=[f.value for f in ExportFormat], default="json"
    )
    synth.add_argument("--out-file", type=Path)
    synth.add_argument("--state-cap", type=int, metavar="N")
    synth.add_argument("--timeout", type=float, metavar="SECONDS")
    synth.add_argument("--seed", type=int, default=0)

    expand = commands.add_parser("expand", parents=[common], help="bound eventualities")
    expand.add_argument("-f", "--formula", type=Path, required=True)
    expand.add_argument("-l", "--length", type=int, required=True)

    dfa = commands.add_parser("dfa", parents=[common], help="print the bad-prefix DFA")
    dfa.add_argument("-f", "--formula", type=Path, required=True)
    dfa.add_argument("-p", "--partition", type=Path, required=True)
    dfa.add_argument("--state-cap", type=int, metavar="N")

    bench = commands.add_parser("bench", parents=[common], help="compare both solvers")
    bench.add_argument("-f", "--formula", type=Path, required=True)
    bench.add_argument("-p", "--partition", type=Path, required=True)
    bench.add_argument("-L", "--max-length", type=int, required=True)
    bench.add_argument("--timeout", type=float, metavar="SECONDS")
    bench.add_argument("--state-cap", type=int, metavar="N")
    bench.add_argument("--seed", type=int, default=0)
    return parser


def _exit_code(exc: SynthesisError) -> ExitCode:
    if exc.error_code is ErrorCode.FRAGMENT_VIOLATION:
        return ExitCode.FRAGMENT_VIOLATION
    if exc.error_code in (ErrorCode.RESOURCE_EXHAUSTED, ErrorCode.TIMEOUT):
        return ExitCode.RESOURCE_LIMIT
    return ExitCode.ERROR


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "synth":
            config = RunConfig(
                formula=args.formula,
                partition=args.partition,
                mode=args.mode,
                first_mover=Mover(args.first),
                expand=args.expand,
                out=ExportFormat(args.out),
                out_file=args.out_file,
                state_cap=args.state_cap,
                timeout=args.timeout,
                seed=args.seed,
            )
            return int(cmd_synth(config))
        if args.command == "expand":
            return int(cmd_expand(args.formula, args.length))
        if args.command == "dfa":
            return int(cmd_dfa(args.formula, args.partition, args.state_cap))
        return int(
            cmd_bench(
                args.formula,
                args.partition,
                args.max_length,
                args.timeout,
                args.state_cap,
                args.seed,
            )
        )
    except SynthesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(_exit_code(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.ERROR)
    except Exception as exc:
        LOG.debug("unhandled error", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return int(ExitCode.ERROR)
