"""Command-line front end: point evaluations, figure CSV sweeps, oracle runs.

Exit codes: 0 success, 2 usage error, 3 numerical non-convergence,
4 resource cap exceeded, 5 bound-sandwich violation under --check-bounds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .asymptotic import (
    LoadPoint,
    asympt_lower_gaussian,
    asympt_upper,
    noiseless_limit,
    physical_branch,
    tanaka_capacity,
)
from .errors import (
    ConvergenceError,
    DomainError,
    QuadratureError,
    ResourceLimitError,
    UnsupportedNoiseError,
)
from .figures import format_csv, generate_figure
from .finite_bounds import (
    SystemSize,
    conjectured_upper,
    noiseless_lower,
    noisy_lower_envelope,
    noisy_lower_gamma,
)
from .noise import EbN0, NoiseModel
from .oracle import SignatureMatrix, exact_noiseless_capacity, mc_mutual_information

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_RESOURCE = 4
EXIT_SANDWICH = 5

_SANDWICH_SLACK = 1e-9


class UsageError(Exception):
    pass


class SandwichViolation(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdmacap",
        description="Sum-capacity bounds for binary-input, binary-signature CDMA.")
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="evaluate one bound at a single point")
    bound.add_argument("--m", type=int)
    bound.add_argument("--n", type=int)
    bound.add_argument("--beta", type=float)
    bound.add_argument("--zeta", type=float)
    bound.add_argument("--asymptotic", action="store_true")
    bound.add_argument("--noise", help="none | gaussian:<sigma2> | uniform:<a>")
    bound.add_argument("--sigma2", type=float, help="Gaussian noise variance")
    bound.add_argument("--ebn0-db", type=float, help="Gaussian noise level as Eb/N0 in dB")
    bound.add_argument("--side", choices=("lower", "upper", "both"), default="lower")
    bound.add_argument("--gamma", type=float, help="evaluate one family member")
    bound.add_argument("--gamma-envelope", action="store_true",
                       help="optimize over gamma (default for noisy lower bounds)")
    bound.add_argument("--eq6-mode", choices=("printed", "derived"), default="derived")
    bound.add_argument("--tanaka", action="store_true",
                       help="also report the replica fixed point (asymptotic Gaussian)")
    bound.add_argument("--json", action="store_true")
    bound.add_argument("--out")
    bound.add_argument("--threads", type=int, default=0)

    figure = sub.add_parser("figure", help="emit one figure's CSV rows")
    figure.add_argument("figure_id", type=int, metavar="ID", help="figure number 1..10")
    figure.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a figure parameter (JSON value)")
    figure.add_argument("--out")
    figure.add_argument("--threads", type=int, default=0)

    oracle = sub.add_parser("oracle", help="exact enumeration / Monte Carlo ground truth")
    oracle_sub = oracle.add_subparsers(dest="oracle_command", required=True)

    exact = oracle_sub.add_parser("exact", help="exact noiseless sum capacity")
    exact.add_argument("--m", type=int, required=True)
    exact.add_argument("--n", type=int, required=True)
    exact.add_argument("--sample", type=int,
                       help="sample this many matrices instead of exhaustive enumeration")
    exact.add_argument("--seed", type=int, default=0)
    exact.add_argument("--check-bounds", action="store_true",
                       help="assert lower <= oracle <= upper; exit 5 on violation")
    exact.add_argument("--json", action="store_true")
    exact.add_argument("--out")

    mc = oracle_sub.add_parser("mc", help="Monte Carlo mutual information")
    mc.add_argument("--matrix", required=True, help="signature matrix file")
    mc.add_argument("--noise", help="gaussian:<sigma2> | uniform:<a>")
    mc.add_argument("--sigma2", type=float)
    mc.add_argument("--ebn0-db", type=float)
    mc.add_argument("--samples", type=int, default=200_000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--json", action="store_true")
    mc.add_argument("--out")

    return parser


def _resolve_noise(args, *, allow_none: bool) -> NoiseModel:
    chosen = [name for name, given in (
        ("--noise", args.noise is not None),
        ("--sigma2", args.sigma2 is not None),
        ("--ebn0-db", args.ebn0_db is not None),
    ) if given]
    if len(chosen) > 1:
        raise UsageError(f"specify exactly one of --noise/--sigma2/--ebn0-db, got {chosen}")
    if args.noise is not None:
        model = NoiseModel.from_flag(args.noise)
    elif args.sigma2 is not None:
        model = NoiseModel.gaussian(args.sigma2)
    elif args.ebn0_db is not None:
        model = EbN0(args.ebn0_db).to_model()
    else:
        raise UsageError("a noise model is required (--noise/--sigma2/--ebn0-db)")
    if model.is_noiseless and not allow_none:
        raise UsageError("this command needs a noise density, not --noise none")
    return model


def _format_record(record: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(record, sort_keys=True) + "\n"
    lines = []
    for key in ("kind", "bits_total", "bits_per_user"):
        if key in record:
            lines.append(f"{key}={record[key]!r}" if isinstance(record[key], float)
                         else f"{key}={record[key]}")
    meta = record.get("meta", {})
    for key in sorted(meta):
        value = meta[key]
        lines.append(f"meta.{key}={value!r}" if isinstance(value, float)
                     else f"meta.{key}={value}")
    return "\n".join(lines) + "\n"


def _bound_record(bound) -> dict:
    return {"kind": bound.kind, "bits_total": bound.bits_total,
            "bits_per_user": bound.bits_per_user, "meta": dict(bound.meta)}


def _tanaka_record(solution) -> dict:
    meta = {"lambda": solution.lam, "m_rep": solution.m_rep,
            "iterations": solution.iterations, "converged": solution.converged}
    if solution.second_branch is not None:
        alt = solution.second_branch
        meta.update({"second_lambda": alt.lam, "second_m_rep": alt.m_rep,
                     "second_c_per_user": alt.c_per_user})
        meta["physical_c_per_user"] = physical_branch(solution).c_per_user
    return {"kind": "estimate", "bits_per_user": solution.c_per_user, "meta": meta}


def _cmd_bound(args) -> str:
    finite = args.m is not None or args.n is not None
    if args.asymptotic and finite:
        raise UsageError("--asymptotic conflicts with --m/--n")
    if not args.asymptotic and not finite:
        raise UsageError("finite mode needs --m and --n (or pass --asymptotic)")
    if args.gamma is not None and args.gamma_envelope:
        raise UsageError("--gamma conflicts with --gamma-envelope")

    records: dict[str, dict] = {}

    if args.asymptotic:
        if (args.beta is None) == (args.zeta is None):
            raise UsageError("asymptotic mode needs exactly one of --beta/--zeta")
        if args.zeta is not None:
            model = _resolve_noise(args, allow_none=True)
            if not model.is_noiseless:
                raise UsageError("the zeta regime is noiseless; use --noise none")
            value = noiseless_limit(args.zeta)
            if args.side in ("lower", "both"):
                records["lower"] = {"kind": "lower", "bits_per_user": value,
                                    "meta": {"zeta": args.zeta, "noise": "none"}}
            if args.side in ("upper", "both"):
                records["upper"] = {"kind": "true_upper", "bits_per_user": value,
                                    "meta": {"zeta": args.zeta, "noise": "none"}}
        else:
            model = _resolve_noise(args, allow_none=False)
            load = LoadPoint.from_beta(args.beta)
            if args.side in ("lower", "both"):
                if model.kind != "gaussian":
                    raise UsageError("the asymptotic lower bound is Gaussian-only")
                value = asympt_lower_gaussian(load, model.sigma2)
                records["lower"] = {"kind": "lower", "bits_per_user": value,
                                    "meta": {"beta": args.beta, "noise": model.label}}
            if args.side in ("upper", "both"):
                value = asympt_upper(load, model)
                records["upper"] = {"kind": "conjectured_upper", "bits_per_user": value,
                                    "meta": {"beta": args.beta, "noise": model.label}}
            if args.tanaka:
                if model.kind != "gaussian":
                    raise UsageError("the replica fixed point is Gaussian-only")
                records["tanaka"] = _tanaka_record(tanaka_capacity(load, model.sigma2))
    else:
        if args.m is None or args.n is None:
            raise UsageError("finite mode needs both --m and --n")
        size = SystemSize(args.m, args.n)
        model = _resolve_noise(args, allow_none=True)
        if args.side in ("lower", "both"):
            if model.is_noiseless:
                records["lower"] = _bound_record(noiseless_lower(size))
            elif args.gamma is not None:
                records["lower"] = _bound_record(
                    noisy_lower_gamma(size, model, args.gamma, eq6_mode=args.eq6_mode))
            else:
                records["lower"] = _bound_record(
                    noisy_lower_envelope(size, model, eq6_mode=args.eq6_mode))
        if args.side in ("upper", "both"):
            records["upper"] = _bound_record(conjectured_upper(size, model))

    if args.json:
        payload = records[args.side] if args.side in records and len(records) == 1 \
            else records
        return json.dumps(payload, sort_keys=True) + "\n"
    blocks = [_format_record(records[name], as_json=False)
              for name in ("lower", "upper", "tanaka") if name in records]
    return "\n".join(blocks)


def _cmd_figure(args) -> str:
    overrides = {}
    for item in args.set:
        key, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            overrides[key] = json.loads(raw)
        except json.JSONDecodeError:
            raise UsageError(f"--set value for {key!r} must be JSON, got {raw!r}") from None
    threads = args.threads if args.threads > 0 else (os.cpu_count() or 1)
    rows = generate_figure(args.figure_id, overrides, threads=threads)
    return format_csv(rows)


def _cmd_oracle_exact(args) -> str:
    size = SystemSize(args.m, args.n)
    if args.sample is not None:
        result = exact_noiseless_capacity(size, mode="sample",
                                          sample_count=args.sample, seed=args.seed)
    else:
        result = exact_noiseless_capacity(size)

    record = {"mode": result.mode, "matrices": result.matrices,
              "max": result.max_bits, "mean": result.mean_bits}
    if result.mode == "sample":
        record["seed"] = args.seed
    lines = [f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}"
             for k, v in record.items()]

    if args.check_bounds:
        lower = noiseless_lower(size).bits_total
        upper = conjectured_upper(size, NoiseModel.noiseless()).bits_total
        record["lower"] = lower
        record["upper"] = upper
        chain = (f"{lower:.6f} ≤ {result.mean_bits:.6f} ≤ "
                 f"{result.max_bits:.6f} ≤ {upper:.6f}")
        ok = (lower <= result.mean_bits + _SANDWICH_SLACK
              and result.mean_bits <= result.max_bits + _SANDWICH_SLACK
              and result.max_bits <= upper + _SANDWICH_SLACK)
        record["sandwich"] = "ok" if ok else "violated"
        lines.append(f"sandwich={record['sandwich']}: {chain}")
        if not ok:
            raise SandwichViolation(f"bound ordering violated: {chain}")

    if args.json:
        return json.dumps(record, sort_keys=True) + "\n"
    return "\n".join(lines) + "\n"


def _cmd_oracle_mc(args) -> str:
    matrix = SignatureMatrix.load(args.matrix)
    model = _resolve_noise(args, allow_none=False)
    est = mc_mutual_information(matrix, model, args.samples, args.seed)
    record = {"mean": est.mean, "std_error": est.std_error,
              "samples": est.samples, "seed": est.seed,
              "bits_per_user": est.mean / matrix.n, "noise": model.label}
    if args.json:
        return json.dumps(record, sort_keys=True) + "\n"
    return "\n".join(f"{k}={record[k]!r}" if isinstance(record[k], float)
                     else f"{k}={record[k]}" for k in sorted(record)) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bound":
            text = _cmd_bound(args)
        elif args.command == "figure":
            text = _cmd_figure(args)
        elif args.command == "oracle" and args.oracle_command == "exact":
            try:
                text = _cmd_oracle_exact(args)
            except SandwichViolation as err:
                sys.stderr.write(f"error: {err}\n")
                return EXIT_SANDWICH
        else:
            text = _cmd_oracle_mc(args)
    except (UsageError, DomainError, UnsupportedNoiseError, FileNotFoundError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE
    except (ConvergenceError, QuadratureError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_NO_CONVERGENCE
    except ResourceLimitError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_RESOURCE
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
