"""Command-line front end.

Subcommands: transform, kernel-norms, verify-lemmas, approx, modulus,
weights-validate.  Exit codes: 0 success, 1 mathematical check failed,
2 usage error.  A key=value config file (--config) supplies defaults;
explicit flags override it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

from . import experiments
from .dyadic import (
    INF,
    modulus_of_continuity,
    read_function,
    write_function,
)
from .kernels import fejer_norm_extremum, kernel_norm_sweep
from .walsh_system import fwht_forward, fwht_inverse, read_spectrum, write_spectrum
from .weights import DEFAULT_CASE_A_CAP, FAMILIES, build_scheme, load_weight_file, validate

USAGE_ERROR = 2
CHECK_FAILED = 1


def _parse_p_list(text: str) -> List[float]:
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        if token in ("inf", "infinity"):
            out.append(INF)
        else:
            p = float(token)
            if p < 1:
                raise ValueError(f"L_p exponent must be >= 1 or inf, got {token}")
            out.append(p)
    return out


def _scheme_factory(spec: str, alpha_default=None):
    """Weight spec: a family name, family:alpha, or a CSV file path."""
    if os.path.exists(spec):
        fixed = load_weight_file(spec)

        def from_file(n: int):
            if n != fixed.block_exponent:
                raise ValueError(
                    f"weight file covers block exponent {fixed.block_exponent}, "
                    f"cannot sweep n={n}"
                )
            return fixed

        return from_file
    name, _, arg = spec.partition(":")
    if name not in FAMILIES or name == "custom":
        raise ValueError(f"unknown weight spec {spec!r}")
    alpha = float(arg) if arg else alpha_default
    return lambda n: build_scheme(name, n, alpha=alpha)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _emit(lines_or_obj, fmt: str, out_path: str) -> None:
    stream, close = _open_out(out_path)
    try:
        if fmt == "json":
            json.dump(lines_or_obj, stream, indent=2)
            stream.write("\n")
        else:
            for line in lines_or_obj:
                stream.write(line + "\n")
    finally:
        if close:
            stream.close()


def _add_common(parser, resolution_default=8):
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    parser.add_argument("--resolution", type=int, default=resolution_default)
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walshvp",
        description="Walsh-Fourier analysis and de la Vallee Poussin mean experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="Walsh-Fourier transform of a sampled function")
    p.add_argument("--config")
    p.add_argument("--in", dest="infile", default="-", help="input path, '-' for stdin")
    p.add_argument("--out", default="-")
    p.add_argument("--inverse", action="store_true", help="synthesize from a spectrum")

    p = sub.add_parser("kernel-norms", help="L1 norms of Dirichlet and Fejer kernels")
    _add_common(p, resolution_default=10)
    p.add_argument("--nmax", type=int, default=0, help="default: 2^(N-1)")

    p = sub.add_parser("verify-lemmas", help="run the kernel identity and bound checks")
    _add_common(p)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--lemma5-count", type=int, default=200, dest="lemma5_count")
    p.add_argument("--random-schemes", type=int, default=25, dest="random_schemes")

    p = sub.add_parser("approx", help="approximation error vs modulus table")
    _add_common(p, resolution_default=10)
    p.add_argument("--function", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--p", default="inf", help="comma list, e.g. 1,2,inf")
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, default=0, help="default: N-2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cmax", type=float, default=DEFAULT_CASE_A_CAP)

    p = sub.add_parser("modulus", help="modulus of continuity table")
    _add_common(p, resolution_default=10)
    p.add_argument("--function", required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--nmin", type=int, default=0)
    p.add_argument("--nmax", type=int, default=0, help="default: N")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("weights-validate", help="validate a weight scheme")
    p.add_argument("--config")
    p.add_argument("--weights", required=True)
    p.add_argument("--n", type=int, default=0, help="block exponent for family specs")
    p.add_argument("--cmax", type=float, default=DEFAULT_CASE_A_CAP)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


def _apply_config(argv: List[str]) -> List[str]:
    """Inject config-file pairs as flags right after the subcommand, so
    explicit command-line flags still win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config requires a path")
    path = argv[i + 1]
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("_", "-")
            value = value.strip()
            if value.lower() == "true":
                injected.append(f"--{key}")
            else:
                injected.extend([f"--{key}", value])
    rest = argv[:i] + argv[i + 2 :]
    return rest[:1] + injected + rest[1:]


def _cmd_transform(args) -> int:
    if args.infile == "-":
        source = sys.stdin
    else:
        source = open(args.infile)
    try:
        if args.inverse:
            result = fwht_inverse(read_spectrum(source))
        else:
            result = fwht_forward(read_function(source))
    finally:
        if source is not sys.stdin:
            source.close()
    stream, close = _open_out(args.out)
    try:
        if args.inverse:
            write_function(result, stream)
        else:
            write_spectrum(result, stream)
    finally:
        if close:
            stream.close()
    return 0


def _cmd_kernel_norms(args) -> int:
    n_max = args.nmax or 1 << (args.resolution - 1)
    d_norms, k_norms = kernel_norm_sweep(n_max, args.resolution)
    if args.format == "json":
        payload = [
            {"n": n, "l1_dirichlet": float(d), "l1_fejer": float(k)}
            for n, (d, k) in enumerate(zip(d_norms, k_norms), start=1)
        ]
        _emit(payload, "json", args.out)
    else:
        rows = ["n,l1_dirichlet,l1_fejer"]
        for n, (d, k) in enumerate(zip(d_norms, k_norms), start=1):
            rows.append(f"{n},{float(d):.12g},{float(k):.12g}")
        _emit(rows, "csv", args.out)
    return 0


def _cmd_verify_lemmas(args) -> int:
    results = experiments.verify_all_lemmas(
        args.resolution,
        seed=args.seed,
        translate_count=args.lemma5_count,
        random_schemes=args.random_schemes,
    )
    if args.format == "json":
        _emit(experiments.lemma_json_rows(results), "json", args.out)
    else:
        _emit(experiments.lemma_csv_rows(results), "csv", args.out)
    return 0 if all(r.passed for r in results) else CHECK_FAILED


def _cmd_approx(args) -> int:
    n_max = args.nmax or args.resolution - 2
    if n_max + 1 > args.resolution:
        raise ValueError(f"nmax={n_max} needs resolution >= {n_max + 1}")
    f = experiments.make_function(args.function, args.resolution, args.seed)
    factory = _scheme_factory(args.weights)
    records = experiments.ratio_sweep(
        f,
        factory,
        range(args.nmin, n_max + 1),
        _parse_p_list(args.p),
    )
    if args.format == "json":
        payload = {"seed": args.seed, "records": experiments.approx_json_rows(records)}
        _emit(payload, "json", args.out)
    else:
        rows = [f"# seed={args.seed}"] + experiments.approx_csv_rows(records)
        _emit(rows, "csv", args.out)
    return 0 if experiments.sweep_ok(records) else CHECK_FAILED


def _cmd_modulus(args) -> int:
    n_max = args.nmax or args.resolution
    f = experiments.make_function(args.function, args.resolution, args.seed)
    rows = []
    for n in range(args.nmin, n_max + 1):
        for p in _parse_p_list(args.p):
            omega = modulus_of_continuity(f, n, p)
            rows.append((n, p, 2.0**-n, omega))
    if args.format == "json":
        payload = [
            {"n": n, "p": "inf" if p == INF else p, "delta": d, "omega": o}
            for n, p, d, o in rows
        ]
        _emit(payload, "json", args.out)
    else:
        lines = ["n,p,delta,omega"]
        for n, p, d, o in rows:
            p_txt = "inf" if p == INF else format(p, ".12g")
            lines.append(f"{n},{p_txt},{d:.12g},{o:.12g}")
        _emit(lines, "csv", args.out)
    return 0


def _cmd_weights_validate(args) -> int:
    if os.path.exists(args.weights):
        scheme = load_weight_file(args.weights, n=args.n or None)
    else:
        if not args.n:
            raise ValueError("family weight specs require --n")
        name, _, arg = args.weights.partition(":")
        scheme = build_scheme(name, args.n, alpha=float(arg) if arg else None)
    report = validate(scheme, case_a_cap=args.cmax)
    if args.format == "json":
        payload = {
            "n": scheme.block_exponent,
            "sum": report.total,
            "sum_ok": report.sum_ok,
            "monotonicity": report.monotonicity,
            "c2_constant": report.c2_constant,
            "case_a_ok": report.case_a_ok,
            "case_b_ok": report.case_b_ok,
        }
        _emit(payload, "json", args.out)
    else:
        lines = [
            "n,sum,sum_ok,monotonicity,c2_constant,case_a_ok,case_b_ok",
            ",".join(
                [
                    str(scheme.block_exponent),
                    format(report.total, ".12g"),
                    "true" if report.sum_ok else "false",
                    report.monotonicity,
                    format(report.c2_constant, ".12g"),
                    "true" if report.case_a_ok else "false",
                    "true" if report.case_b_ok else "false",
                ]
            ),
        ]
        _emit(lines, "csv", args.out)
    return 0


_COMMANDS = {
    "transform": _cmd_transform,
    "kernel-norms": _cmd_kernel_norms,
    "verify-lemmas": _cmd_verify_lemmas,
    "approx": _cmd_approx,
    "modulus": _cmd_modulus,
    "weights-validate": _cmd_weights_validate,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
