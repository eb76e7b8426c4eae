"""Command line entry point ``conehull``.

Exit codes: 0 when every report row passes, 1 on a statistical failure,
2 on a configuration error.
"""

import argparse
import csv
import io
import json
import os
import sys

from . import closed_forms as cf
from .conic import Cone, conic_profile
from .errors import ConfigError
from .geometry import f_vector
from .harness import PRESETS, ExperimentConfig, load_config, run, verify_all
from .rng import ENV_SEED, make_rng, master_seed
from .samplers import PoissonParams, sample_cone, sample_poisson_hull, sample_symmetric_hull
from .serialize import to_dict


def _common(p):
    g = p.add_argument_group("common options")
    g.add_argument("--d", type=int, help="dimension")
    g.add_argument("--gamma", type=float, help="tail exponent of the Poisson process")
    g.add_argument("--c", type=float, help="intensity scale of the Poisson process")
    g.add_argument("--n", type=int, help="number of half-sphere points")
    g.add_argument("--a", type=float, help="distance exponent of T_{a,b}")
    g.add_argument("--b", type=float, help="volume exponent of T_{a,b}")
    g.add_argument("--k", type=int, help="index of the functional")
    g.add_argument("--replicates", type=int, help="Monte Carlo replicates")
    g.add_argument("--seed", type=lambda s: int(s, 0), help=f"master seed (default ${ENV_SEED} or built-in)")
    g.add_argument("--workers", type=int, default=1, help="worker processes")
    g.add_argument("--out", help="output file (sample commands) or directory (reports)")
    g.add_argument("--format", choices=("csv", "json", "both"), default="csv")
    g.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")
    g.add_argument("--no-figures", action="store_true", help="skip matplotlib figures")
    g.add_argument("--no-timing", action="store_true", help="leave wall_time_ms blank (byte-stable reports)")


def build_parser():
    parser = argparse.ArgumentParser(prog="conehull", description="Random cones and power-law Poisson hulls.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-hull", help="one certified Poisson hull as JSON")
    _common(p)
    p.add_argument("--symmetric", action="store_true")

    p = sub.add_parser("cone", help="one random cone sample and its section f-vector as JSON")
    _common(p)

    p = sub.add_parser("table", help="closed-form values for d = 1..D")
    _common(p)

    p = sub.add_parser("estimate", help="run one experiment and write a report")
    _common(p)
    p.add_argument("--kind", help="experiment kind (overrides the config file)")
    p.add_argument("--config", help="TOML experiment file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="extra parameter, value parsed as JSON when possible")

    p = sub.add_parser("conic", help="conic intrinsic volumes and Grassmann angles of one random cone")
    _common(p)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("buchta", help="both sides of the Grassmann-angle identity")
    _common(p)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("verify", help="run the acceptance battery")
    _common(p)
    p.add_argument("--preset", choices=sorted(PRESETS), default="fast")
    return parser


def _emit(doc, out):
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError("missing option(s): " + ", ".join("--" + n for n in missing))


def _cmd_sample_hull(args):
    _need(args, "d", "gamma")
    params = PoissonParams(args.d, args.gamma, args.c if args.c is not None else 1.0)
    rng = make_rng(master_seed(args.seed))
    if args.symmetric:
        doc = {"hull": to_dict(sample_symmetric_hull(params, rng))}
    else:
        sample, h = sample_poisson_hull(params, rng)
        doc = {"sample": to_dict(sample), "hull": to_dict(h)}
    _emit(doc, args.out)
    return 0


def _cmd_cone(args):
    _need(args, "d", "n")
    s = sample_cone(args.d, args.n, make_rng(master_seed(args.seed)))
    h = s.section_hull()
    _emit({"sample": to_dict(s), "section_hull": to_dict(h), "section_f_vector": f_vector(h).tolist()}, args.out)
    return 0


def _cmd_table(args):
    D = args.d or 4
    gamma = args.gamma if args.gamma is not None else 1.0
    rows = []
    for d in range(1, D + 1):
        row = {
            "d": d,
            "kappa_d": cf.kappa(d),
            "omega_d": cf.omega(d),
            "facets_poisson": cf.expected_facets_poisson(d, gamma),
            "limit_facets_halfsphere": cf.limit_facets_halfsphere(d),
            "B_d_d": cf.constant_B(d, d).value,
            "B_2_d": cf.constant_B(2, d).value if d >= 2 else None,
            "limit_f_vector": cf.limit_f_vector(d),
        }
        if args.n is not None and args.n >= d:
            row["exact_facets_halfsphere"] = cf.exact_facets_halfsphere(d, args.n)
        rows.append(row)
    if args.format == "json":
        text = json.dumps({"gamma": gamma, "rows": rows}, indent=2)
    else:
        buf = io.StringIO()
        cols = list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (";".join("" if x is None else repr(x) for x in v) if isinstance(v, list) else v) for k, v in r.items()})
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def _parse_value(v):
    try:
        return json.loads(v)
    except json.JSONDecodeError:
        return v


def _finish(report, args):
    for line in report.summary_lines():
        print(line)
    if args.out:
        for path in report.write(args.out, fmt=args.format, gnuplot=args.gnuplot, figures=not args.no_figures):
            print("wrote", path)
    return report.exit_code


def _cmd_estimate(args):
    extra = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        extra[key] = _parse_value(value)
    overrides = dict(
        kind=args.kind,
        replicates=args.replicates,
        seed=args.seed,
        workers=args.workers,
        d=args.d,
        gamma=args.gamma,
        c=args.c,
        n=args.n,
        a=args.a,
        b=args.b,
        k=args.k,
        **extra,
    )
    if args.no_timing:
        overrides["timing"] = False
    cfg = load_config(args.config, **overrides)
    report = run(cfg, write=False)
    return _finish(report, args)


def _cmd_conic(args):
    _need(args, "d", "n")
    samples = args.samples or args.replicates or 4000
    rng = make_rng(master_seed(args.seed), 8, args.d, 0)
    prof = conic_profile(Cone.from_sample(sample_cone(args.d, args.n, rng)), samples, rng)
    _emit(prof.to_dict(), args.out)
    return 0


def _cmd_buchta(args):
    _need(args, "d", "n", "k")
    samples = args.samples or args.replicates or 10_000
    cfg = ExperimentConfig("buchta", dict(d=args.d, n=args.n, k=args.k, samples=samples), samples, args.seed, timing=not args.no_timing)
    return _finish(run(cfg, write=False), args)


def _cmd_verify(args):
    def progress(sub):
        for line in sub.summary_lines():
            print(line, flush=True)

    report = verify_all(args.preset, seed=args.seed, workers=args.workers, progress=progress)
    if args.no_timing:
        for r in report.rows:
            r.wall_time_ms = None
    if args.out:
        for path in report.write(args.out, fmt=args.format, gnuplot=args.gnuplot, figures=not args.no_figures):
            print("wrote", path)
    failed = [r for r in report.rows if not r.passed]
    print(f"{len(report.rows) - len(failed)}/{len(report.rows)} rows pass")
    return report.exit_code


_COMMANDS = {
    "sample-hull": _cmd_sample_hull,
    "cone": _cmd_cone,
    "table": _cmd_table,
    "estimate": _cmd_estimate,
    "conic": _cmd_conic,
    "buchta": _cmd_buchta,
    "verify": _cmd_verify,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"conehull: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"conehull: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    os.environ.setdefault("PYTHONHASHSEED", "0")
    sys.exit(main())
