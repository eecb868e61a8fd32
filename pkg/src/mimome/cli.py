"""Command-line front end with reproducible, file-based workflows.

Subcommands:

* ``capacity``  solve the saddle-point problem for a channel file
* ``certify``   solve, then verify every optimality condition
* ``zerocap``   sharp zero-capacity test via the generalized singular value
* ``phase``     Monte Carlo sweep of the (beta, gamma) phase diagram to CSV
* ``allocate``  closed-form optimal antenna allocation constants
* ``sample``    draw a seeded random channel pair to a file

Exit codes: 0 success, 1 input error, 2 solver did not converge,
3 certification failure.  Stochastic commands require an explicit seed.
Every file-producing command writes a run manifest next to its output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .asymptotics import (
    CSV_HEADER,
    AspectRatios,
    monte_carlo_gsv,
    optimal_allocation,
    phase_csv_rows,
    phase_diagram,
)
from .certify import certify
from .channel import (
    ParseError,
    read_channel_file,
    sample_gaussian_pair,
    write_channel_file,
)
from .saddle import SolverConfig, solve
from .spectral import zero_capacity_test

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_CERTIFY = 3

LN2 = math.log(2.0)


def _manifest(command: str, argv, seed, duration: float) -> dict:
    return {
        "command": command,
        "arguments": list(argv),
        "master_seed": seed,
        "tool_version": __version__,
        "duration_seconds": duration,
    }


def _write_manifest(out_path: str, manifest: dict) -> None:
    with open(out_path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _load_pair(path: str):
    try:
        return read_channel_file(path)
    except (OSError, ParseError, ValueError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _rate_scale(bits: bool) -> float:
    return 1.0 / LN2 if bits else 1.0


def cmd_capacity(args, argv) -> int:
    pair = _load_pair(args.channel)
    if args.power <= 0:
        print("error: --power must be positive", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.time()
    result = solve(pair, args.power, SolverConfig(tol_gap=args.tol))
    duration = time.time() - t0
    scale = _rate_scale(args.bits)
    unit = "bits" if args.bits else "nats"
    payload = {
        "capacity": result.capacity_nats * scale,
        "unit": unit,
        "iterations": result.iterations,
        "final_gap_nats": result.final_gap,
        "status": result.status.name,
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"capacity={payload['capacity']:.6f} {unit}")
        print(f"iterations={result.iterations}")
        print(f"final_gap={result.final_gap:.3e} nats")
        print(f"status={result.status.name}")
    _emit_stdout_manifest(args, "capacity", argv, None, duration)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def cmd_certify(args, argv) -> int:
    pair = _load_pair(args.channel)
    if args.power <= 0:
        print("error: --power must be positive", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.time()
    result = solve(pair, args.power, SolverConfig(tol_gap=args.tol))
    cert = certify(pair, result.K_bar, result.Phi_bar, args.power)
    duration = time.time() - t0
    print(cert.as_text())
    if args.csv:
        print(cert.CSV_HEADER)
        print(cert.as_csv_row())
    _emit_stdout_manifest(args, "certify", argv, None, duration)
    if not result.converged:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK if cert.passed else EXIT_CERTIFY


def cmd_zerocap(args, argv) -> int:
    pair = _load_pair(args.channel)
    rep = zero_capacity_test(pair)
    sigma = "inf" if math.isinf(rep.sigma_max_gen) else f"{rep.sigma_max_gen:.12g}"
    margin = "inf" if math.isinf(rep.margin) else f"{rep.margin:.12g}"
    print(f"sigma={sigma} zero_capacity={str(rep.capacity_zero).lower()} "
          f"margin={margin}")
    return EXIT_OK


def _parse_grid(spec: str):
    try:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise ValueError
    except ValueError:
        raise SystemExit(EXIT_INPUT)
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def _worker_count() -> int:
    env = os.environ.get("MIMOME_THREADS", "")
    if env.strip():
        n = int(env)
        if n > 0:
            return n
    return os.cpu_count() or 1


def cmd_phase(args, argv) -> int:
    try:
        beta_grid = _parse_grid(args.beta)
        gamma_grid = _parse_grid(args.gamma)
    except SystemExit:
        print("error: grid syntax is a:b:n", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.time()
    workers = _worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = phase_diagram(beta_grid, gamma_grid, args.ne, args.trials,
                                   args.seed, map_fn=pool.map)
    else:
        points = phase_diagram(beta_grid, gamma_grid, args.ne, args.trials,
                               args.seed)
    duration = time.time() - t0
    lines = [CSV_HEADER] + phase_csv_rows(points)
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_manifest(args.out, _manifest("phase", argv, args.seed, duration))
    print(f"wrote {len(points)} grid points to {args.out}")
    return EXIT_OK


def cmd_allocate(args, argv) -> int:
    a = optimal_allocation()
    print(f"beta*={a['beta_star']:.6f} gamma*={a['gamma_star']:.6f} "
          f"sum={a['min_sum']:.6f}")
    print(f"equal_split={a['equal_split']:.6f}")
    return EXIT_OK


def cmd_sample(args, argv) -> int:
    if min(args.nt, args.nr, args.ne) < 1:
        print("error: antenna counts must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.time()
    pair = sample_gaussian_pair(args.nt, args.nr, args.ne, seed=args.seed)
    write_channel_file(pair, args.out,
                       comment=f"sampled nt={args.nt} nr={args.nr} ne={args.ne} "
                               f"seed={args.seed}")
    _write_manifest(args.out, _manifest("sample", argv, args.seed,
                                        time.time() - t0))
    print(f"wrote {args.out}")
    return EXIT_OK


def _emit_stdout_manifest(args, command, argv, seed, duration) -> None:
    """Attach a manifest when the command produced a file artifact."""
    out = getattr(args, "manifest", None)
    if out:
        _write_manifest(out, _manifest(command, argv, seed, duration))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mimome",
        description="Secrecy capacity of the Gaussian MIMO wiretap channel.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="solve for the secrecy capacity")
    cap.add_argument("--channel", required=True)
    cap.add_argument("--power", type=float, required=True)
    cap.add_argument("--tol", type=float, default=1e-7)
    cap.add_argument("--bits", action="store_true",
                     help="report in bits instead of nats")
    cap.add_argument("--json", action="store_true")
    cap.add_argument("--manifest", help="write a run manifest to this path")
    cap.set_defaults(fn=cmd_capacity)

    cer = sub.add_parser("certify", help="solve and verify optimality conditions")
    cer.add_argument("--channel", required=True)
    cer.add_argument("--power", type=float, required=True)
    cer.add_argument("--tol", type=float, default=1e-9)
    cer.add_argument("--csv", action="store_true")
    cer.add_argument("--manifest", help="write a run manifest to this path")
    cer.set_defaults(fn=cmd_certify)

    zc = sub.add_parser("zerocap", help="zero-capacity test")
    zc.add_argument("--channel", required=True)
    zc.set_defaults(fn=cmd_zerocap)

    ph = sub.add_parser("phase", help="phase-diagram Monte Carlo sweep")
    ph.add_argument("--beta", required=True, help="grid a:b:n")
    ph.add_argument("--gamma", required=True, help="grid a:b:n")
    ph.add_argument("--ne", type=int, required=True)
    ph.add_argument("--trials", type=int, required=True)
    ph.add_argument("--seed", type=int, required=True)
    ph.add_argument("--out", required=True)
    ph.set_defaults(fn=cmd_phase)

    al = sub.add_parser("allocate", help="optimal antenna allocation constants")
    al.set_defaults(fn=cmd_allocate)

    sa = sub.add_parser("sample", help="draw a random channel pair to a file")
    sa.add_argument("--nt", type=int, required=True)
    sa.add_argument("--nr", type=int, required=True)
    sa.add_argument("--ne", type=int, required=True)
    sa.add_argument("--seed", type=int, required=True)
    sa.add_argument("--out", required=True)
    sa.set_defaults(fn=cmd_sample)

    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold into the input-error code
        if exc.code not in (0, None):
            raise SystemExit(EXIT_INPUT)
        raise
    return args.fn(args, argv)


if __name__ == "__main__":
    sys.exit(main())
