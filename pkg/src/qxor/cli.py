"""Command-line entry point.

Subcommands: ``validate``, ``bias``, ``optimize``, ``dilate``, ``verify``.
Stdout carries a human summary; structured detail goes to files (JSON
strategies and reports, CSV traces).  Exit codes: 0 success, 1 validation
failure, 2 I/O or parse error, 3 internal numerical failure.  The env var
``QXOR_THREADS`` caps restart parallelism for ``optimize``.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .dilation import (
    corner_pattern,
    embed_self_adjoint,
    extract_from_embedding,
    observable_dilation_commuting,
    observable_dilation_tensor,
    symmetrize_strategy,
)
from .errors import NumericalError, ParseError, ShapeError, ValidationError
from .game import load_game
from .jsonio import dump_json, load_json
from .linalg import trace_norm
from .optimize import (
    SeesawConfig,
    dimension_ladder,
    seesaw,
    write_ladder_csv,
    write_trace_csv,
)
from .properties import VerifyContext, run_verify
from .strategy import (
    TensorStrategy,
    adjoint_strategy,
    bias_direct,
    bias_trace,
    correlation_of,
    is_observable_strategy,
    load_strategy,
    save_strategy,
    success_probability,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


@dataclass
class RunReport:
    """Machine-readable record of one subcommand invocation."""

    command: str
    inputs: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    status: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(
            command=data["command"],
            inputs=dict(data.get("inputs", {})),
            config=dict(data.get("config", {})),
            results=dict(data.get("results", {})),
            status=int(data.get("status", 0)),
        )


def _digest(path) -> str:
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.16g}{z.imag:+.16g}j"


def _threads() -> int:
    raw = os.environ.get("QXOR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_validate(args) -> RunReport:
    report = RunReport(command="validate", inputs={str(args.game): _digest(args.game)})
    report.config = {"game": str(args.game), "tol": args.tol}
    game = load_game(args.game, tol=args.tol)
    tn = trace_norm(game.M)
    herm = float(np.max(np.abs(game.M - game.M.conj().T)))
    report.results = {
        "n": game.n,
        "strict": game.strict,
        "trace_norm": tn,
        "self_adjoint_defect": herm,
    }
    print(f"game: {args.game}")
    print(f"n: {game.n}  strict: {str(game.strict).lower()}")
    print(f"trace norm: {tn:.16g}")
    print(f"self-adjoint defect: {herm:.3e}")
    print("OK")
    return report


def _cmd_bias(args) -> RunReport:
    report = RunReport(
        command="bias",
        inputs={str(args.game): _digest(args.game), str(args.strategy): _digest(args.strategy)},
        config={"game": str(args.game), "strategy": str(args.strategy)},
    )
    game = load_game(args.game)
    strat = load_strategy(args.strategy)
    if game.n != strat.n:
        raise ShapeError(f"game size {game.n} does not match strategy size {strat.n}")
    b_corr = bias_trace(game, correlation_of(strat))
    print(f"bias (correlation path): {_fmt_complex(b_corr)}")
    results = {"bias_re": b_corr.real, "bias_im": b_corr.imag}
    if isinstance(strat, TensorStrategy):
        b_dir = bias_direct(game, strat)
        diff = abs(b_corr - b_dir)
        print(f"bias (direct path):      {_fmt_complex(b_dir)}")
        print(f"path difference:         {diff:.3e}")
        results.update({"bias_direct_re": b_dir.real, "bias_direct_im": b_dir.imag, "path_difference": diff})
    else:
        print("bias (direct path):      n/a (commuting model)")
    p = success_probability(b_corr.real)
    print(f"success probability:     {p:.16g}")
    results["success_probability"] = p
    report.results = results
    return report


def _parse_dims(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ValidationError(f"could not parse dimension list {raw!r}") from exc


def _cmd_optimize(args) -> RunReport:
    report = RunReport(command="optimize", inputs={str(args.game): _digest(args.game)})
    game = load_game(args.game)
    dA = args.dimA if args.dimA is not None else args.dim
    dB = args.dimB if args.dimB is not None else args.dim
    config = SeesawConfig(
        dA=dA, dB=dB, restarts=args.restarts, max_sweeps=args.sweeps, tol=args.tol, seed=args.seed
    )
    threads = _threads()
    report.config = {
        "game": str(args.game),
        "dA": dA,
        "dB": dB,
        "restarts": config.restarts,
        "max_sweeps": config.max_sweeps,
        "tol": config.tol,
        "seed": config.seed,
        "threads": threads,
        "dims": args.dims,
    }
    print(f"game: {args.game} (n={game.n})")
    if args.dims:
        dims = _parse_dims(args.dims)
        entries = dimension_ladder(game, dims, config, max_workers=threads)
        print("dim  best_bias")
        for entry in entries:
            print(f"{entry.dim:<4d} {entry.best_bias:.16g}")
        if args.trace:
            write_ladder_csv(entries, args.trace)
            print(f"ladder table written: {args.trace}")
        report.results = {"ladder": [{"dim": e.dim, "best_bias": e.best_bias} for e in entries]}
        return report
    print(
        f"config: dA={dA} dB={dB} restarts={config.restarts} sweeps={config.max_sweeps} "
        f"tol={config.tol:g} seed={config.seed} threads={threads}"
    )
    result = seesaw(game, config, max_workers=threads)
    p = success_probability(min(result.best_bias, 1.0))
    print(f"best bias: {result.best_bias:.16g}")
    print(f"success probability: {p:.16g}")
    converged = sum(1 for t in result.traces if t.converged)
    print(f"restarts converged: {converged}/{len(result.traces)}")
    report.results = {
        "best_bias": result.best_bias,
        "success_probability": p,
        "converged_restarts": converged,
        "wall_time": sum(t.wall_time for t in result.traces),
    }
    if args.trace:
        write_trace_csv(result, args.trace)
        print(f"trace written: {args.trace}")
    if args.strategy_out:
        save_strategy(result.best_strategy, args.strategy_out)
        print(f"strategy written: {args.strategy_out}")
    return report


def _cmd_dilate(args) -> RunReport:
    report = RunReport(
        command="dilate",
        inputs={str(args.strategy): _digest(args.strategy)},
        config={"strategy": str(args.strategy), "kind": args.kind, "out": args.out},
    )
    strat = load_strategy(args.strategy)
    model = "tensor" if isinstance(strat, TensorStrategy) else "commuting"
    X_in = correlation_of(strat).X
    sym = (X_in + X_in.conj().T) / 2
    results: dict = {"model": model, "n_in": strat.n}
    if args.kind == "observable":
        out = (observable_dilation_tensor if model == "tensor" else observable_dilation_commuting)(strat)
        X_out = correlation_of(out).X
        dist = float(np.max(np.abs(X_out - sym)))
        print(f"correlation distance to (X + X*)/2: {dist:.3e}")
        print(f"output observable: {is_observable_strategy(out)}")
        results.update({"correlation_distance": dist, "observable": is_observable_strategy(out)})
    elif args.kind == "adjoint":
        out = adjoint_strategy(strat)
        dist = float(np.max(np.abs(correlation_of(out).X - X_in.conj().T)))
        print(f"correlation distance to X*: {dist:.3e}")
        results["correlation_distance"] = dist
    elif args.kind == "symmetrize":
        out = symmetrize_strategy(strat)
        dist = float(np.max(np.abs(correlation_of(out).X - sym)))
        print(f"correlation distance to (X + X*)/2: {dist:.3e}")
        results["correlation_distance"] = dist
    elif args.kind == "embed":
        out, witness = embed_self_adjoint(strat)
        off = witness.off_pattern()
        corner_dist = float(np.max(np.abs(witness.corner() - X_in)))
        print(f"embedded size: {out.n} (corner pattern, off-pattern mass {off:.3e})")
        print(f"corner distance to X: {corner_dist:.3e}")
        results.update({"off_pattern": off, "corner_distance": corner_dist, "n_out": out.n})
    elif args.kind == "extract":
        out = extract_from_embedding(strat)
        corner, _, _ = corner_pattern(X_in, out.n)
        dist = float(np.max(np.abs(correlation_of(out).X - corner)))
        print(f"extracted size: {out.n}")
        print(f"correlation distance to corner block: {dist:.3e}")
        results.update({"correlation_distance": dist, "n_out": out.n})
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown dilation kind {args.kind!r}")
    if args.out:
        save_strategy(out, args.out)
        print(f"output written: {args.out}")
    report.results = results
    return report


def _cmd_verify(args) -> RunReport:
    ctx = VerifyContext(n=args.n, max_dim=args.dims, trials=args.trials, seed=args.seed)
    report = RunReport(
        command="verify",
        config={"n": ctx.n, "dims": ctx.max_dim, "trials": ctx.trials, "seed": ctx.seed},
    )
    results = run_verify(ctx)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += 0 if r.passed else 1
        print(f"{r.name:<{width}}  worst {r.worst:9.3e}  threshold {r.threshold:7.1e}  {status}")
    print(
        f"{len(results) - failures}/{len(results)} properties passed "
        f"(n={ctx.n}, max dim {ctx.max_dim}, trials {ctx.trials}, seed {ctx.seed})"
    )
    report.results = {
        "properties": [
            {"name": r.name, "worst": r.worst, "threshold": r.threshold, "passed": r.passed}
            for r in results
        ],
        "failures": failures,
    }
    if failures:
        report.status = EXIT_VALIDATION
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qxor", description="Quantum XOR game toolkit")
    parser.add_argument("--version", action="version", version=f"qxor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a game file's invariants")
    p.add_argument("game")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--report", help="write a JSON run report")

    p = sub.add_parser("bias", help="evaluate a strategy against a game")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--report")

    p = sub.add_parser("optimize", help="see-saw lower bound on the entanglement bias")
    p.add_argument("game")
    p.add_argument("--dim", type=int, default=2, help="local dimension for both players")
    p.add_argument("--dimA", type=int, default=None)
    p.add_argument("--dimB", type=int, default=None)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--sweeps", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write the per-sweep CSV trace here")
    p.add_argument("--strategy-out", dest="strategy_out", help="write the best strategy JSON here")
    p.add_argument("--dims", help="comma-separated list: run a dimension ladder instead")
    p.add_argument("--report")

    p = sub.add_parser("dilate", help="apply a strategy transform")
    p.add_argument("strategy")
    p.add_argument("--kind", required=True, choices=["observable", "adjoint", "symmetrize", "embed", "extract"])
    p.add_argument("--out", help="write the transformed strategy JSON here")
    p.add_argument("--report")

    p = sub.add_parser("verify", help="run the registered property suite")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dims", type=int, default=3, help="maximum local dimension")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--report")
    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "bias": _cmd_bias,
    "optimize": _cmd_optimize,
    "dilate": _cmd_dilate,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _HANDLERS[args.command](args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if getattr(args, "report", None):
        dump_json(report.to_dict(), args.report)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
