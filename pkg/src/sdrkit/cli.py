"""Command-line front end.

Subcommands: study, eigen-study, oracle, tube-prob, analyze. Exit codes:
0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_study_config
from .csvio import analyze_csv
from .errors import SdrkitError
from .gcr import tube_capture_probability
from .reports import FORMATS, emit_json, emit_report
from .scr import ThresholdSpec
from .simgen import oracle_binary_k, oracle_lambda
from .study import MethodConfig, run_eigen_study, run_study


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sdrkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=FORMATS, default="json")
        p.add_argument("--out", help="write the report here instead of stdout")

    study = sub.add_parser("study", help="distance-comparison study from a config file")
    study.add_argument("--config", required=True)
    study.add_argument("--seed", type=int, help="override master_seed")
    study.add_argument("--workers", type=int, help="override worker count")
    study.add_argument("--norm", choices=["frobenius", "spectral"])
    common(study)

    eigen = sub.add_parser("eigen-study", help="eigenvalue-separation study (SCR/GCR)")
    eigen.add_argument("--config", required=True)
    eigen.add_argument("--seed", type=int)
    eigen.add_argument("--workers", type=int)
    common(eigen)

    oracle = sub.add_parser("oracle", help="Monte-Carlo population kernel moments")
    oracle.add_argument("--model", required=True, choices=["ex2_1", "ex2_2", "ex2_3"])
    oracle.add_argument("--c", required=True, help="cutoff value(s), comma-separated")
    oracle.add_argument("--sigma", type=float, default=0.3)
    oracle.add_argument("--pairs", type=int, default=1_000_000)
    oracle.add_argument("--seed", type=int, default=0)
    common(oracle)

    tube = sub.add_parser("tube-prob", help="tube capture probability by simulation")
    tube.add_argument("--dim", type=int, required=True)
    tube.add_argument("--rho", type=float, required=True)
    tube.add_argument("--samples", type=int, default=500_000)
    tube.add_argument("--seed", type=int, default=0)
    common(tube)

    analyze = sub.add_parser("analyze", help="fit one estimator to a CSV dataset")
    analyze.add_argument("--csv", required=True)
    analyze.add_argument("--response", required=True)
    analyze.add_argument("--method", required=True,
                         choices=["SCR", "GCR", "OLS", "SIR", "SAVE", "PHD"])
    analyze.add_argument("--q", type=int, required=True)
    analyze.add_argument("--r", type=float, help="proportion of pairs to keep")
    analyze.add_argument("--c", type=float, help="fixed selection cutoff")
    analyze.add_argument("--rho", type=float, help="tube radius (GCR)")
    analyze.add_argument("--slices", type=int, help="slice count (SIR/SAVE)")
    analyze.add_argument("--scores-out", help="write projected coordinates CSV here")
    common(analyze)

    return parser


def _write(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_study(args, eigen: bool) -> int:
    overrides = {"master_seed": args.seed, "workers": args.workers}
    if not eigen and args.norm:
        overrides["norm"] = args.norm
    cfg = load_study_config(args.config, overrides)
    report = run_eigen_study(cfg) if eigen else run_study(cfg)
    _write(emit_report(report, args.format), args.out)
    return 0


def _cmd_oracle(args) -> int:
    cutoffs = [float(v) for v in args.c.split(",")]
    doc = {"schema_version": 1, "model": args.model, "pairs": args.pairs,
           "seed": args.seed, "results": []}
    for c in cutoffs:
        if args.model == "ex2_3":
            k = oracle_binary_k(c, args.pairs, args.seed)
            doc["results"].append(
                {"c": c, "kernel": [[float(v) for v in row] for row in k]}
            )
        else:
            lam1, lam2 = oracle_lambda(args.model, c, args.sigma, args.pairs, args.seed)
            doc["results"].append({"c": c, "lambda1": lam1, "lambda2": lam2})
    if args.model != "ex2_3":
        doc["sigma"] = args.sigma
    if args.format == "json":
        _write(emit_json(doc), args.out)
    elif args.format == "tsv":
        if args.model == "ex2_3":
            lines = ["c\tk11\tk12\tk21\tk22"]
            for r in doc["results"]:
                k = r["kernel"]
                lines.append(f"{r['c']!r}\t{k[0][0]!r}\t{k[0][1]!r}\t{k[1][0]!r}\t{k[1][1]!r}")
        else:
            lines = ["c\tlambda1\tlambda2"]
            for r in doc["results"]:
                lines.append(f"{r['c']!r}\t{r['lambda1']!r}\t{r['lambda2']!r}")
        _write("\n".join(lines) + "\n", args.out)
    else:
        lines = []
        for r in doc["results"]:
            if args.model == "ex2_3":
                k = r["kernel"]
                lines.append(
                    f"c={r['c']:<6g} kernel=[[{k[0][0]:.4f}, {k[0][1]:.4f}], "
                    f"[{k[1][0]:.4f}, {k[1][1]:.4f}]]"
                )
            else:
                lines.append(
                    f"c={r['c']:<6g} lambda1={r['lambda1']:.4f} lambda2={r['lambda2']:.4f}"
                )
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_tube_prob(args) -> int:
    prob = tube_capture_probability(args.dim, args.rho, args.samples, args.seed)
    doc = {"schema_version": 1, "dim": args.dim, "rho": args.rho,
           "samples": args.samples, "seed": args.seed, "probability": prob}
    if args.format == "json":
        _write(emit_json(doc), args.out)
    elif args.format == "tsv":
        _write(f"dim\trho\tsamples\tprobability\n"
               f"{args.dim}\t{args.rho!r}\t{args.samples}\t{prob!r}\n", args.out)
    else:
        _write(f"P(capture) = {prob:.6g}  (dim={args.dim}, rho={args.rho:g}, "
               f"samples={args.samples})\n", args.out)
    return 0


def _method_from_args(args) -> MethodConfig:
    threshold = None
    if args.r is not None and args.c is not None:
        raise _UsageError("give either --r or --c, not both")
    if args.r is not None:
        threshold = ThresholdSpec.proportion(args.r)
    elif args.c is not None:
        threshold = ThresholdSpec.fixed_c(args.c)
    return MethodConfig(args.method, threshold=threshold, rho=args.rho,
                        n_slices=args.slices)


def _cmd_analyze(args) -> int:
    method = _method_from_args(args)
    if method.name in ("SCR", "GCR") and method.threshold is None:
        raise _UsageError(f"{method.name} needs --r or --c")
    if method.name == "GCR" and method.rho is None:
        raise _UsageError("GCR needs --rho")
    report = analyze_csv(args.csv, args.response, method, args.q)
    if args.format == "json":
        _write(emit_json(report.to_dict()), args.out)
    elif args.format == "tsv":
        lines = ["predictor\t" + "\t".join(f"dir{k + 1}" for k in range(report.q))]
        for name, row in zip(report.predictor_names, report.basis):
            lines.append(name + "\t" + "\t".join(repr(float(v)) for v in row))
        _write("\n".join(lines) + "\n", args.out)
    else:
        lines = [f"method {report.method}, q={report.q}, response {report.response_name}"]
        lines.append("basis (rows = predictors):")
        for name, row in zip(report.predictor_names, report.basis):
            lines.append(f"  {name:>12}  " + "  ".join(f"{v:9.4f}" for v in row))
        lines.append("kernel spectrum (descending): "
                     + ", ".join(f"{v:.4f}" for v in report.eigenvalues))
        _write("\n".join(lines) + "\n", args.out)
    if args.scores_out:
        with open(args.scores_out, "w", encoding="utf-8") as handle:
            handle.write(report.scores_csv())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    try:
        if args.command == "study":
            return _cmd_study(args, eigen=False)
        if args.command == "eigen-study":
            return _cmd_study(args, eigen=True)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "tube-prob":
            return _cmd_tube_prob(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        raise AssertionError(args.command)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except SdrkitError as err:
        print(f"data error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
