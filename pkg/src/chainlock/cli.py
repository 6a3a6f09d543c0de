"""Command-line front end: reproducible experiments with JSON/CSV output.

Exit codes: 0 success, 1 computation failure (failed construction, failed
certification, unmet --require-certified), 2 usage error.  Errors print as
single-line JSON objects on stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .constructions import optimal_model
from .errors import ChainlockError, ConstructionFailedError
from .nlocal import bound_report, lhv_exhaustive_max
from .qcore import beta_quantum, model_from_json_dict, model_to_json_dict
from .scenario import scenario_to_json_dict
from .seesaw import SeesawConfig, seesaw_optimize
from .soscert import certify, condition_residuals, tsirelson_ceiling

USAGE_ERROR, COMPUTE_ERROR = 2, 1


def _round12(obj):
    """Recursively round floats to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(payload, out_path: str | None):
    text = json.dumps(_round12(payload))
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _fail(message: str, code: int) -> int:
    print(json.dumps({"error": message}), file=sys.stderr)
    return code


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("CHAINLOCK_THREADS")
    return int(env) if env else 1


def _maybe_dump_scenario(args) -> bool:
    if getattr(args, "dump_scenario", False):
        _emit(scenario_to_json_dict(args.n), args.out)
        return True
    return False


def _cmd_bound(args) -> int:
    if _maybe_dump_scenario(args):
        return 0
    if args.exhaustive:
        report = lhv_exhaustive_max(args.n, threads=_threads(args))
    else:
        report = bound_report(args.n)
    _emit(report.to_json_dict(), args.out)
    return 0


def _cmd_quantum(args) -> int:
    if _maybe_dump_scenario(args):
        return 0
    expected = tsirelson_ceiling(args.n)
    try:
        model = optimal_model(args.n, qubits_per_half=args.pairs_per_source)
    except ConstructionFailedError as err:
        payload = {
            "n": args.n,
            "beta": err.beta,
            "expected": err.expected if err.expected else expected,
            "residuals": list(err.residuals or []),
            "error": str(err),
        }
        if err.model is not None and hasattr(err.model, "scenario"):
            _, payload["terms"] = beta_quantum(err.model, evaluator=args.evaluator)
        _emit(payload, args.out)
        return COMPUTE_ERROR
    beta, terms = beta_quantum(model, evaluator=args.evaluator)
    residuals = condition_residuals(model)
    payload = {"n": args.n, "beta": beta, "expected": expected, "terms": terms,
               "residuals": residuals}
    if args.dump_model:
        payload["model"] = model_to_json_dict(model)
    _emit(payload, args.out)
    return 0


def _cmd_seesaw(args) -> int:
    if _maybe_dump_scenario(args):
        return 0
    config = SeesawConfig(
        max_iterations=args.max_iterations, tolerance=args.tol,
        restarts=args.restarts, seed=args.seed,
        optimize_edges=not args.freeze_edges,
        qubits_per_half=args.pairs_per_source)
    report = seesaw_optimize(args.n, config)
    if args.trace_csv:
        with open(args.trace_csv, "w", encoding="utf-8") as fh:
            fh.write("restart,iteration,beta\n")
            for r, it, beta in report.trace:
                fh.write(f"{r},{it},{beta:.12g}\n")
    _emit(report.to_json_dict(), args.out)
    if args.require_certified and not certify(report.best_model).certified:
        return _fail("best seesaw model is not certified", COMPUTE_ERROR)
    return 0


def _cmd_certify(args) -> int:
    with open(args.model, "r", encoding="utf-8") as fh:
        model = model_from_json_dict(json.load(fh))
    report = certify(model, tol=args.tol)
    _emit(report.to_json_dict(), args.out)
    return 0 if report.certified else COMPUTE_ERROR


SWEEP_HEADER = "n,alpha,beta_opt,ratio,beta_constructed,certified"
SWEEP_QUANTUM_MAX_N = 5


def sweep_rows(n_min: int, n_max: int) -> list[dict]:
    """One row per n: classical bound, quantum ceiling, and constructed value."""
    from .nlocal import alpha_closed_form
    rows = []
    for n in range(n_min, n_max + 1):
        alpha = alpha_closed_form(n)
        ceiling = tsirelson_ceiling(n)
        row = {"n": n, "alpha": alpha, "beta_opt": ceiling,
               "ratio": ceiling / alpha, "beta_constructed": None, "certified": None}
        if n <= SWEEP_QUANTUM_MAX_N:
            try:
                model = optimal_model(n)
                row["beta_constructed"], _ = beta_quantum(model)
                row["certified"] = certify(model).certified
            except ConstructionFailedError as err:
                row["beta_constructed"] = err.beta
                row["certified"] = False
        rows.append(row)
    return rows


def _cmd_sweep(args) -> int:
    rows = sweep_rows(args.n_min, args.n_max)
    if args.output == "json":
        _emit(rows, args.out)
        return 0
    lines = [SWEEP_HEADER]
    for row in rows:
        cells = [str(row["n"]), str(row["alpha"]), f"{row['beta_opt']:.12g}",
                 f"{row['ratio']:.12g}",
                 "" if row["beta_constructed"] is None else f"{row['beta_constructed']:.12g}",
                 "" if row["certified"] is None else str(row["certified"]).lower()]
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainlock",
        description="n-locality inequalities on linear-chain networks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_n=True):
        if with_n:
            p.add_argument("--n", type=int, required=True, help="number of sources (>= 2)")
            p.add_argument("--dump-scenario", action="store_true",
                           help="print the scenario encoding as JSON and exit")
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--threads", type=int, default=None,
                       help="worker count for exhaustive searches "
                            "(CHAINLOCK_THREADS as fallback)")

    p_bound = sub.add_parser("bound", help="classical n-local bound")
    add_common(p_bound)
    p_bound.add_argument("--exhaustive", action="store_true",
                         help="full deterministic-strategy search (n <= 4)")
    p_bound.set_defaults(func=_cmd_bound)

    p_quantum = sub.add_parser("quantum", help="explicit quantum model for the ceiling")
    add_common(p_quantum)
    p_quantum.add_argument("--construction", choices=["jw"], default="jw")
    p_quantum.add_argument("--evaluator", choices=["dense", "contracted", "auto"],
                           default="auto")
    p_quantum.add_argument("--pairs-per-source", type=int, default=None)
    p_quantum.add_argument("--dump-model", action="store_true",
                           help="include the model matrices in the output")
    p_quantum.set_defaults(func=_cmd_quantum)

    p_seesaw = sub.add_parser("seesaw", help="variational maximization of beta")
    add_common(p_seesaw)
    p_seesaw.add_argument("--restarts", type=int, default=10)
    p_seesaw.add_argument("--seed", type=int, default=0)
    p_seesaw.add_argument("--max-iterations", type=int, default=500)
    p_seesaw.add_argument("--tol", type=float, default=1e-7)
    p_seesaw.add_argument("--freeze-edges", action="store_true")
    p_seesaw.add_argument("--pairs-per-source", type=int, default=None)
    p_seesaw.add_argument("--trace-csv", help="write restart,iteration,beta rows")
    p_seesaw.add_argument("--require-certified", action="store_true")
    p_seesaw.set_defaults(func=_cmd_seesaw)

    p_cert = sub.add_parser("certify", help="certificate report for a stored model")
    add_common(p_cert, with_n=False)
    p_cert.add_argument("--model", required=True, help="path to a model JSON file")
    p_cert.add_argument("--tol", type=float, default=1e-7)
    p_cert.set_defaults(func=_cmd_certify)

    p_sweep = sub.add_parser("sweep", help="alpha vs ceiling across a range of n")
    p_sweep.add_argument("--n-min", type=int, required=True)
    p_sweep.add_argument("--n-max", type=int, required=True)
    p_sweep.add_argument("--output", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--out", help="write output to this path instead of stdout")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    n = getattr(args, "n", None)
    if n is not None and n < 2:
        return _fail(f"need n >= 2, got {n}", USAGE_ERROR)
    if args.command == "sweep" and not 2 <= args.n_min <= args.n_max:
        return _fail(f"invalid range {args.n_min}..{args.n_max}", USAGE_ERROR)
    try:
        return args.func(args)
    except (ChainlockError, ValueError, OSError) as exc:
        return _fail(str(exc), COMPUTE_ERROR)


if __name__ == "__main__":
    raise SystemExit(main())
