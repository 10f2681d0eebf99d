"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 property violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, ConvexityError, CwrevError, ValidationError
from .formats import export_mesh, export_profile, export_profile_svg, parse_config
from .functionals import analyze
from .geometry import tessellate
from .properties import run_all
from .variational import minimize

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_PROPERTY = 0, 1, 2, 3
SEED_ENV = "CWREV_SEED"


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _read_config(path):
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return parse_config(data)


def _cmd_analyze(args):
    config = _read_config(args.config)
    report = analyze(config.body())
    if args.json:
        print(json.dumps({"config": config.to_dict(), **report.to_dict()}, indent=2))
    else:
        print(f"critical half-width w0  {report.critical_half_width:.9f}")
        print(f"half-width w            {report.half_width:.9f}")
        print(f"deficit F               {report.deficit:.9f}")
        print(f"volume V                {report.volume:.9f}")
        print(f"surface area A          {report.area:.9f}")
        print(f"ratio I                 {report.ratio:.9f}")
        print(f"method                  {report.method}")
    return EXIT_OK


def _cmd_mesh(args):
    config = _read_config(args.config)
    fmt = args.format or ("obj" if args.output.lower().endswith(".obj") else "stl")
    mesh = tessellate(config.body(), args.nt, args.ntheta)
    with open(args.output, "wb") as fh:
        export_mesh(mesh, fmt, fh)
    print(f"wrote {args.output}: {mesh.num_vertices} vertices, {mesh.num_triangles} triangles ({fmt})")
    return EXIT_OK


def _cmd_profile(args):
    config = _read_config(args.config)
    body = config.body()
    with open(args.output, "wb") as fh:
        if args.svg:
            export_profile_svg(body, args.n, fh)
        else:
            export_profile(body, args.n, fh)
    print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_optimize(args):
    seed = _default_seed() if args.seed is None else args.seed
    result = minimize(args.k, args.seeds, seed=seed)
    best = result.best_profile
    if args.json:
        payload = {
            "k": result.k,
            "seeds": args.seeds,
            "seed": seed,
            "converged": result.converged,
            "best": {
                "breakpoints": list(best.breakpoints),
                "sigma0": best.leading_sign,
                "deficit": result.best_deficit,
                "ratio": result.best_ratio,
            },
            "trace": [
                {"breakpoints": list(e.breakpoints), "sigma0": e.leading_sign, "deficit": e.deficit, "stage": e.stage}
                for e in result.trace
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"breakpoint count k      {result.k} (start), {best.num_breakpoints} (best)")
        print("best breakpoints        " + ", ".join(f"{t:.9f}" for t in best.breakpoints))
        print(f"deficit F               {result.best_deficit:.9f}")
        print(f"ratio I                 {result.best_ratio:.9f}")
        print(f"converged               {'yes' if result.converged else 'no'}")
        print(f"trace entries           {len(result.trace)}")
    return EXIT_OK


def _cmd_verify(args):
    seed = _default_seed() if args.seed is None else args.seed
    outcomes = run_all(args.samples, seed)
    failed = any(not o.passed for o in outcomes)
    if args.json:
        print(json.dumps({"seed": seed, "samples": args.samples, "outcomes": [o.to_dict() for o in outcomes]}, indent=2))
    else:
        for o in outcomes:
            _print_outcome(o)
    return EXIT_PROPERTY if failed else EXIT_OK


def _print_outcome(o, indent=""):
    status = "PASS" if o.passed else "FAIL"
    print(
        f"{indent}{status} {o.property_id:<20} samples={o.samples:<7} violations={o.violations:<4} "
        f"worst={o.worst_residual:.3e} ({o.elapsed:.2f}s)"
    )
    for child in o.children:
        _print_outcome(child, indent + "  ")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="cwrev", description="Constant-width bodies of revolution.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="print w0, deficit, volume, area and ratio of a body")
    p.add_argument("config", help="JSON body configuration ('-' for stdin)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("mesh", help="tessellate a body and write STL/OBJ")
    p.add_argument("config")
    p.add_argument("--nt", type=_positive_int, default=128)
    p.add_argument("--ntheta", type=_positive_int, default=128)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", choices=("stl", "obj"))
    p.set_defaults(func=_cmd_mesh)

    p = sub.add_parser("profile", help="sample the generating curve to CSV (or SVG)")
    p.add_argument("config")
    p.add_argument("-n", type=_positive_int, default=181)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("optimize", help="multi-start search over piecewise profiles")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--seeds", type=_positive_int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("verify", help="run the randomized property battery")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, ValidationError, ConvexityError) as exc:
        print(f"cwrev: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CwrevError, ValueError) as exc:
        print(f"cwrev: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cwrev: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
